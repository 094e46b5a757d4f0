// SPDX-License-Identifier: Apache-2.0
//
// Seeded Monte Carlo over random user drops and one-parameter sweeps.
//
// Seeding: trial t of a sweep with master seed s draws its users from
// std::mt19937_64 seeded with trial_seed(s, t), where trial_seed is the
// SplitMix64 finalizer applied to s + (t + 1) * 0x9E3779B97F4A7C15. Each
// coordinate consumes one 64-bit draw u and maps it to (u >> 11) * 2^-53, so
// drops are reproducible across platforms and thread counts. The same drop is
// reused at every axis value.

#pragma once

#include "pinching/schemes.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pinching
{

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial);

// K users uniform over [0, D_x] x [-D_y/2, D_y/2].
std::vector<UserLocation> sample_users(std::uint64_t seed, const SystemParams &params);

struct SchemeRecord
{
    Scheme scheme = Scheme::prop;
    bool feasible = false;
    std::optional<double> ee; // present iff feasible
    double sum_rate = 0.0;
    double total_power_w = 0.0;
    std::string error;
};

struct TrialRecord
{
    std::uint64_t index = 0;
    std::uint64_t seed = 0;
    std::vector<SchemeRecord> schemes;

    const SchemeRecord *find(Scheme scheme) const;
};

// Never throws for solver failures; they are recorded per scheme.
TrialRecord run_trial(const Scenario &scenario, std::span<const Scheme> schemes, const SolverOptions &options = {});

enum class AccountingPolicy
{
    exclude_infeasible, // mean over feasible trials only
    zero_infeasible     // infeasible trials count as EE = 0
};

std::string_view policy_name(AccountingPolicy policy);
AccountingPolicy parse_policy(std::string_view name);

struct SchemeSummary
{
    Scheme scheme = Scheme::prop;
    std::optional<double> mean_ee; // absent when nothing is averaged
    double stderr_ee = 0.0;        // sample standard deviation / sqrt(n)
    double feasibility_rate = 0.0;
    std::size_t n_trials = 0;
};

// One summary per scheme in `schemes` order. Throws std::invalid_argument on
// empty input.
std::vector<SchemeSummary> aggregate(std::span<const TrialRecord> records, std::span<const Scheme> schemes,
                                     AccountingPolicy policy = AccountingPolicy::exclude_infeasible);

enum class SweepAxis
{
    p_max_dbm,
    r_min,
    n_antennas
};

std::string_view axis_name(SweepAxis axis);
SweepAxis parse_axis(std::string_view name);

// Copy of params with the axis quantity set to value. Throws
// std::invalid_argument for values the axis cannot take.
SystemParams apply_axis(const SystemParams &params, SweepAxis axis, double value);

struct SweepOptions
{
    std::size_t n_trials = 10000;
    std::uint64_t master_seed = 1;
    std::vector<Scheme> schemes{all_schemes.begin(), all_schemes.end()};
    AccountingPolicy policy = AccountingPolicy::exclude_infeasible;
    std::size_t threads = 0; // 0: hardware concurrency
    SolverOptions solver;
};

struct SweepResult
{
    SweepAxis axis = SweepAxis::p_max_dbm;
    std::vector<double> values;
    std::vector<Scheme> schemes;
    std::vector<std::vector<SchemeSummary>> points; // [value][scheme]
    std::size_t n_trials = 0;
    std::uint64_t master_seed = 0;
    AccountingPolicy policy = AccountingPolicy::exclude_infeasible;
};

// Per-value trial records, exposed for callers that need per-drop data.
std::vector<std::vector<TrialRecord>> run_sweep_records(SweepAxis axis, std::span<const double> values,
                                                        const SystemParams &params, const SweepOptions &options);

SweepResult run_sweep(SweepAxis axis, std::span<const double> values, const SystemParams &params,
                      const SweepOptions &options);

} // namespace pinching

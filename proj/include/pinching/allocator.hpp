// SPDX-License-Identifier: Apache-2.0
//
// Joint power and time allocation for energy-efficiency maximization under
// per-user minimum-rate constraints, with antenna positions (hence gains)
// held fixed:
//
//   max  sum_k tau_k log2(1 + P_k h_k) / (P_f + sum_k P_k)
//   s.t. 0 <= P_k <= P_max,  tau_k >= 0,  sum_k tau_k <= 1,
//        tau_k log2(1 + P_k h_k) >= R_min.
//
// Solved by block coordinate descent: the power block by Dinkelbach's method
// with a closed-form clamped stationary point per user, the time block in
// closed form.

#pragma once

#include "pinching/core_model.hpp"

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace pinching
{

// Raised when the inputs admit no point satisfying every rate constraint.
class InfeasibleError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

struct SolverOptions
{
    double dinkelbach_tolerance = 1e-6; // stop once beta increases by less
    std::size_t dinkelbach_max_iterations = 100;
    double bcd_tolerance = 1e-6; // stop once EE increases by less
    std::size_t bcd_max_iterations = 50;
};

struct Feasibility
{
    bool feasible = false;
    std::vector<double> tau_mins;
    double slack = 0.0; // 1 - sum tau_min
};

// R_min / log2(1 + P_max h). Zero when R_min = 0; throws InfeasibleError if
// the user cannot carry any rate (P_max h = 0) while R_min > 0.
double min_time(ChannelGain gain, const SystemParams &params);

// Every user at P_max with sum_k tau_min_k <= 1. Users that cannot carry any
// rate get an infinite tau_min.
Feasibility check_feasibility(std::span<const ChannelGain> gains, const SystemParams &params);

// Stationary point tau / (beta ln 2) - 1 / h clamped into
// [(2^(R_min / tau) - 1) / h, P_max]. Throws InfeasibleError if the QoS lower
// bound exceeds P_max (tau below tau_min).
double power_clamped(double tau, ChannelGain gain, double beta, const SystemParams &params);

struct DinkelbachResult
{
    std::vector<double> powers_w;
    double beta = 0.0;          // EE of powers_w at the given taus
    std::vector<double> betas;  // beta^(0), beta^(1), ...
    std::size_t iterations = 0;
    bool converged = false;
};

// Globally optimal powers for fixed taus. Users with tau = 0 (possible only
// when R_min = 0) get zero power. On hitting the iteration cap the best
// iterate is returned with converged = false.
DinkelbachResult dinkelbach_power(std::span<const double> taus, std::span<const ChannelGain> gains,
                                  const SystemParams &params, const SolverOptions &options = {});

// Index of the largest per-unit-time rate log2(1 + P_k h_k); ties go to the
// lowest index.
std::size_t best_rate_user(std::span<const double> powers_w, std::span<const ChannelGain> gains);

// Minimum time R_min / log2(1 + P_k h_k) for every user except the best-rate
// user, who receives the remainder. Throws InfeasibleError if the remainder
// cannot meet that user's rate constraint.
std::vector<double> time_allocate(std::span<const double> powers_w, std::span<const ChannelGain> gains,
                                  const SystemParams &params);

struct AllocationResult
{
    std::vector<double> powers_w;
    std::vector<double> taus;
    std::vector<double> rates;  // bps/Hz
    double ee = 0.0;            // bps/Hz/W
    std::vector<double> trace;  // EE after each outer iteration
    bool converged = false;
    std::size_t iterations = 0;

    double sum_rate() const;
    double total_power(double p_fixed_w) const;
};

// Alternates dinkelbach_power and time_allocate, starting from
// tau_k = tau_min_k + slack / K. Throws InfeasibleError if the instance
// fails check_feasibility.
AllocationResult bcd_solve(std::span<const ChannelGain> gains, const SystemParams &params,
                           const SolverOptions &options = {});

// Rates, EE and an empty trace for a fixed (powers, taus) pair.
AllocationResult evaluate_allocation(std::vector<double> powers_w, std::vector<double> taus,
                                     std::span<const ChannelGain> gains, const SystemParams &params);

} // namespace pinching

// SPDX-License-Identifier: Apache-2.0

#include "pinching/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

namespace pinching
{

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial)
{
    std::uint64_t z = master_seed + (trial + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::vector<UserLocation> sample_users(std::uint64_t seed, const SystemParams &params)
{
    std::mt19937_64 rng(seed);
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

    std::vector<UserLocation> users(params.num_users);
    for (auto &u : users)
    {
        u.x = params.area_x_m * unit();
        u.y = params.area_y_m * (unit() - 0.5);
    }
    return users;
}

const SchemeRecord *TrialRecord::find(Scheme scheme) const
{
    for (const auto &r : schemes)
        if (r.scheme == scheme)
            return &r;
    return nullptr;
}

TrialRecord run_trial(const Scenario &scenario, std::span<const Scheme> schemes, const SolverOptions &options)
{
    TrialRecord out;
    std::optional<std::vector<ChannelGain>> pinching_gains, ula_gains;
    std::string pinching_error, ula_error;

    auto gains_for = [&](Scheme s) -> const std::vector<ChannelGain> *
    {
        auto &cache = s == Scheme::conventional ? ula_gains : pinching_gains;
        auto &error = s == Scheme::conventional ? ula_error : pinching_error;
        if (!cache && error.empty())
        {
            try
            {
                cache = scheme_gains(s, scenario);
            }
            catch (const std::exception &e)
            {
                error = e.what();
            }
        }
        return cache ? &*cache : nullptr;
    };

    for (Scheme s : schemes)
    {
        SchemeRecord rec;
        rec.scheme = s;
        const auto *gains = gains_for(s);
        if (!gains)
        {
            rec.error = s == Scheme::conventional ? ula_error : pinching_error;
            out.schemes.push_back(std::move(rec));
            continue;
        }

        SchemeOutcome outcome = solve_scheme_with_gains(s, *gains, scenario.params, options);
        rec.error = std::move(outcome.error);
        if (outcome.allocation)
        {
            rec.feasible = true;
            rec.ee = outcome.allocation->ee;
            rec.sum_rate = outcome.allocation->sum_rate();
            rec.total_power_w = outcome.allocation->total_power(scenario.params.p_fixed_w);
        }
        out.schemes.push_back(std::move(rec));
    }
    return out;
}

std::string_view policy_name(AccountingPolicy policy)
{
    return policy == AccountingPolicy::exclude_infeasible ? "exclude_infeasible" : "zero_infeasible";
}

AccountingPolicy parse_policy(std::string_view name)
{
    if (name == "exclude_infeasible")
        return AccountingPolicy::exclude_infeasible;
    if (name == "zero_infeasible")
        return AccountingPolicy::zero_infeasible;
    throw std::invalid_argument("unknown accounting policy '" + std::string(name) + "'");
}

std::vector<SchemeSummary> aggregate(std::span<const TrialRecord> records, std::span<const Scheme> schemes,
                                     AccountingPolicy policy)
{
    if (records.empty())
        throw std::invalid_argument("aggregate: no trial records");

    std::vector<SchemeSummary> out;
    for (Scheme s : schemes)
    {
        std::vector<double> samples;
        std::size_t feasible = 0;
        for (const auto &rec : records)
        {
            const SchemeRecord *r = rec.find(s);
            if (r && r->feasible && r->ee)
            {
                ++feasible;
                samples.push_back(*r->ee);
            }
            else if (policy == AccountingPolicy::zero_infeasible)
            {
                samples.push_back(0.0);
            }
        }

        SchemeSummary sum;
        sum.scheme = s;
        sum.n_trials = records.size();
        sum.feasibility_rate = static_cast<double>(feasible) / static_cast<double>(records.size());
        if (!samples.empty())
        {
            const double n = static_cast<double>(samples.size());
            double mean = 0.0;
            for (double v : samples)
                mean += v;
            mean /= n;
            sum.mean_ee = mean;
            if (samples.size() > 1)
            {
                double ss = 0.0;
                for (double v : samples)
                    ss += (v - mean) * (v - mean);
                sum.stderr_ee = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
            }
        }
        out.push_back(sum);
    }
    return out;
}

std::string_view axis_name(SweepAxis axis)
{
    switch (axis)
    {
    case SweepAxis::p_max_dbm:
        return "p_max_dbm";
    case SweepAxis::r_min:
        return "r_min";
    case SweepAxis::n_antennas:
        return "n_antennas";
    }
    throw std::invalid_argument("unknown sweep axis");
}

SweepAxis parse_axis(std::string_view name)
{
    for (SweepAxis a : {SweepAxis::p_max_dbm, SweepAxis::r_min, SweepAxis::n_antennas})
        if (axis_name(a) == name)
            return a;
    throw std::invalid_argument("unknown sweep axis '" + std::string(name) + "'");
}

SystemParams apply_axis(const SystemParams &params, SweepAxis axis, double value)
{
    if (!std::isfinite(value))
        throw std::invalid_argument("sweep value must be finite");
    SystemParams out = params;
    switch (axis)
    {
    case SweepAxis::p_max_dbm:
        out.p_max_w = dbm_to_watts(value);
        break;
    case SweepAxis::r_min:
        if (value < 0.0)
            throw std::invalid_argument("r_min sweep value must be non-negative");
        out.r_min = value;
        break;
    case SweepAxis::n_antennas:
        if (value < 1.0 || value != std::floor(value))
            throw std::invalid_argument("n_antennas sweep value must be a positive integer");
        out.num_antennas = static_cast<std::size_t>(value);
        break;
    }
    return out;
}

std::vector<std::vector<TrialRecord>> run_sweep_records(SweepAxis axis, std::span<const double> values,
                                                        const SystemParams &params, const SweepOptions &options)
{
    if (values.empty())
        throw std::invalid_argument("run_sweep: no axis values");
    if (options.n_trials == 0)
        throw std::invalid_argument("run_sweep: n_trials must be at least 1");

    std::vector<SystemParams> per_value;
    for (double v : values)
    {
        per_value.push_back(apply_axis(params, axis, v));
        per_value.back().validate();
    }

    // Paired drops: one user set per trial, shared by every axis value.
    std::vector<std::vector<UserLocation>> drops(options.n_trials);
    for (std::size_t t = 0; t < options.n_trials; ++t)
        drops[t] = sample_users(trial_seed(options.master_seed, t), params);

    const std::size_t jobs = values.size() * options.n_trials;
    std::vector<std::vector<TrialRecord>> out(values.size(), std::vector<TrialRecord>(options.n_trials));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]
    {
        for (std::size_t job = next++; job < jobs; job = next++)
        {
            const std::size_t v = job / options.n_trials, t = job % options.n_trials;
            try
            {
                Scenario scenario{per_value[v], drops[t]};
                TrialRecord rec = run_trial(scenario, options.schemes, options.solver);
                rec.index = t;
                rec.seed = trial_seed(options.master_seed, t);
                out[v][t] = std::move(rec);
            }
            catch (...)
            {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        }
    };

    std::size_t threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, jobs);
    {
        std::vector<std::jthread> pool;
        for (std::size_t i = 1; i < threads; ++i)
            pool.emplace_back(worker);
        worker();
    }
    if (failure)
        std::rethrow_exception(failure);
    return out;
}

SweepResult run_sweep(SweepAxis axis, std::span<const double> values, const SystemParams &params,
                      const SweepOptions &options)
{
    const auto records = run_sweep_records(axis, values, params, options);

    SweepResult out;
    out.axis = axis;
    out.values.assign(values.begin(), values.end());
    out.schemes = options.schemes;
    out.n_trials = options.n_trials;
    out.master_seed = options.master_seed;
    out.policy = options.policy;
    for (const auto &per_value : records)
        out.points.push_back(aggregate(per_value, options.schemes, options.policy));
    return out;
}

} // namespace pinching

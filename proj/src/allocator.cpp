// SPDX-License-Identifier: Apache-2.0

#include "pinching/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pinching
{

namespace
{

constexpr double ln2 = 0.69314718055994530942;

// Relative slack when comparing the QoS power floor against P_max; the two
// coincide up to rounding when tau equals tau_min.
constexpr double floor_slack = 1e-10;

// Absolute slack on sum_k tau_k <= 1 in the time step.
constexpr double time_slack = 1e-12;

void require_same_size(std::size_t a, std::size_t b, const char *what)
{
    if (a != b)
        throw std::invalid_argument(what);
}

} // namespace

double min_time(ChannelGain gain, const SystemParams &params)
{
    if (params.r_min == 0.0)
        return 0.0;
    const double unit_rate = std::log2(1.0 + params.p_max_w * gain.value);
    if (!(unit_rate > 0.0))
        throw InfeasibleError("min_time: user cannot carry any rate at P_max");
    return params.r_min / unit_rate;
}

Feasibility check_feasibility(std::span<const ChannelGain> gains, const SystemParams &params)
{
    Feasibility out;
    out.tau_mins.reserve(gains.size());
    double total = 0.0;
    for (const auto &g : gains)
    {
        double t = std::numeric_limits<double>::infinity();
        try
        {
            t = min_time(g, params);
        }
        catch (const InfeasibleError &)
        {
        }
        out.tau_mins.push_back(t);
        total += t;
    }
    out.slack = 1.0 - total;
    out.feasible = out.slack >= 0.0;
    return out;
}

double power_clamped(double tau, ChannelGain gain, double beta, const SystemParams &params)
{
    const double r_min = params.r_min;
    if (!(tau > 0.0) || !(gain.value > 0.0))
    {
        if (r_min == 0.0)
            return 0.0;
        throw InfeasibleError("power_clamped: rate constraint with zero time or zero gain");
    }

    double floor_w = std::expm1(r_min / tau * ln2) / gain.value;
    if (floor_w > params.p_max_w)
    {
        if (floor_w > params.p_max_w * (1.0 + floor_slack))
            throw InfeasibleError("power_clamped: QoS power floor exceeds P_max (tau below tau_min)");
        floor_w = params.p_max_w;
    }

    const double stationary = beta > 0.0 ? tau / (beta * ln2) - 1.0 / gain.value
                                          : std::numeric_limits<double>::infinity();
    return std::clamp(stationary, floor_w, params.p_max_w);
}

DinkelbachResult dinkelbach_power(std::span<const double> taus, std::span<const ChannelGain> gains,
                                  const SystemParams &params, const SolverOptions &options)
{
    require_same_size(taus.size(), gains.size(), "dinkelbach_power: taus and gains must have equal length");
    const std::size_t users = gains.size();

    // beta^(0): every user at P_max.
    const std::vector<double> full(users, params.p_max_w);
    double beta = ee_objective(taus, full, gains, params.p_fixed_w);

    DinkelbachResult out;
    out.betas.push_back(beta);
    out.beta = -std::numeric_limits<double>::infinity();

    std::vector<double> powers(users);
    for (std::size_t it = 1; it <= options.dinkelbach_max_iterations; ++it)
    {
        for (std::size_t k = 0; k < users; ++k)
            powers[k] = power_clamped(taus[k], gains[k], beta, params);
        const double next = ee_objective(taus, powers, gains, params.p_fixed_w);
        out.betas.push_back(next);
        out.iterations = it;
        if (next > out.beta)
        {
            out.beta = next;
            out.powers_w = powers;
        }
        const double gain = next - beta;
        beta = next;
        if (gain < options.dinkelbach_tolerance)
        {
            out.converged = true;
            break;
        }
    }
    return out;
}

std::size_t best_rate_user(std::span<const double> powers_w, std::span<const ChannelGain> gains)
{
    require_same_size(powers_w.size(), gains.size(), "best_rate_user: powers and gains must have equal length");
    std::size_t best = 0;
    double best_rate = -1.0;
    for (std::size_t k = 0; k < gains.size(); ++k)
    {
        const double r = std::log2(1.0 + powers_w[k] * gains[k].value);
        if (r > best_rate)
        {
            best_rate = r;
            best = k;
        }
    }
    return best;
}

std::vector<double> time_allocate(std::span<const double> powers_w, std::span<const ChannelGain> gains,
                                  const SystemParams &params)
{
    const std::size_t users = gains.size();
    if (users == 0)
        return {};
    const std::size_t best = best_rate_user(powers_w, gains);

    std::vector<double> taus(users, 0.0);
    double used = 0.0;
    for (std::size_t k = 0; k < users; ++k)
    {
        if (k == best || params.r_min == 0.0)
            continue;
        const double r = std::log2(1.0 + powers_w[k] * gains[k].value);
        if (!(r > 0.0))
            throw InfeasibleError("time_allocate: user with zero rate under a positive rate requirement");
        taus[k] = params.r_min / r;
        used += taus[k];
    }

    const double remainder = 1.0 - used;
    const double best_unit_rate = std::log2(1.0 + powers_w[best] * gains[best].value);
    const double best_needs = params.r_min == 0.0 ? 0.0 : params.r_min / best_unit_rate;
    if (!(remainder >= best_needs - time_slack))
        throw InfeasibleError("time_allocate: powers cannot meet every rate requirement within unit time");
    taus[best] = remainder;
    return taus;
}

double AllocationResult::sum_rate() const
{
    return std::accumulate(rates.begin(), rates.end(), 0.0);
}

double AllocationResult::total_power(double p_fixed_w) const
{
    return std::accumulate(powers_w.begin(), powers_w.end(), p_fixed_w);
}

AllocationResult evaluate_allocation(std::vector<double> powers_w, std::vector<double> taus,
                                     std::span<const ChannelGain> gains, const SystemParams &params)
{
    require_same_size(powers_w.size(), gains.size(), "evaluate_allocation: powers and gains must have equal length");
    require_same_size(taus.size(), gains.size(), "evaluate_allocation: taus and gains must have equal length");

    AllocationResult out;
    out.ee = ee_objective(taus, powers_w, gains, params.p_fixed_w);
    out.rates.resize(gains.size());
    for (std::size_t k = 0; k < gains.size(); ++k)
        out.rates[k] = user_rate(taus[k], powers_w[k], gains[k]);
    out.powers_w = std::move(powers_w);
    out.taus = std::move(taus);
    out.converged = true;
    return out;
}

AllocationResult bcd_solve(std::span<const ChannelGain> gains, const SystemParams &params,
                           const SolverOptions &options)
{
    const Feasibility feas = check_feasibility(gains, params);
    if (!feas.feasible)
        throw InfeasibleError("bcd_solve: minimum-rate requirements exceed the frame at P_max");

    const std::size_t users = gains.size();
    std::vector<double> taus(users);
    for (std::size_t k = 0; k < users; ++k)
        taus[k] = feas.tau_mins[k] + feas.slack / static_cast<double>(users);

    std::vector<double> powers;
    std::vector<double> trace;
    double previous = -std::numeric_limits<double>::infinity();
    bool converged = false;
    std::size_t iterations = 0;

    for (std::size_t it = 1; it <= options.bcd_max_iterations; ++it)
    {
        iterations = it;
        DinkelbachResult step = dinkelbach_power(taus, gains, params, options);
        // The previous powers remain feasible for the current taus, so never
        // accept a power step that a stopped-early Dinkelbach left worse off.
        if (powers.empty() || step.beta >= ee_objective(taus, powers, gains, params.p_fixed_w))
            powers = std::move(step.powers_w);

        taus = time_allocate(powers, gains, params);
        const double ee = ee_objective(taus, powers, gains, params.p_fixed_w);
        trace.push_back(ee);
        if (ee - previous < options.bcd_tolerance)
        {
            converged = true;
            break;
        }
        previous = ee;
    }

    AllocationResult out = evaluate_allocation(std::move(powers), std::move(taus), gains, params);
    out.trace = std::move(trace);
    out.converged = converged;
    out.iterations = iterations;
    return out;
}

} // namespace pinching

// SPDX-License-Identifier: Apache-2.0

#include "pinching/schemes.hpp"
#include "pinching/placement.hpp"

#include <algorithm>
#include <stdexcept>

namespace pinching
{

std::string_view scheme_name(Scheme scheme)
{
    switch (scheme)
    {
    case Scheme::prop:
        return "prop";
    case Scheme::equal_time:
        return "equal_time";
    case Scheme::max_se:
        return "max_se";
    case Scheme::conventional:
        return "conventional";
    }
    throw std::invalid_argument("unknown scheme");
}

std::string_view scheme_label(Scheme scheme)
{
    switch (scheme)
    {
    case Scheme::prop:
        return "Prop";
    case Scheme::equal_time:
        return "Equal Time";
    case Scheme::max_se:
        return "MaxSE";
    case Scheme::conventional:
        return "Conventional";
    }
    throw std::invalid_argument("unknown scheme");
}

Scheme parse_scheme(std::string_view name)
{
    for (Scheme s : all_schemes)
        if (scheme_name(s) == name)
            return s;
    throw std::invalid_argument("unknown scheme '" + std::string(name) + "'");
}

void Scenario::validate() const
{
    params.validate();
    if (users.size() != params.num_users)
        throw std::invalid_argument("scenario: number of users does not match K");
    for (const auto &u : users)
        if (!inside_service_area(u, params))
            throw std::invalid_argument("scenario: user outside the service area");
}

std::vector<ChannelGain> scheme_gains(Scheme scheme, const Scenario &scenario)
{
    if (scheme == Scheme::conventional)
        return place_fixed_ula(scenario.users, scenario.params).gains;
    return place_pinching(scenario.users, scenario.params).gains;
}

namespace
{

AllocationResult solve_equal_time(std::span<const ChannelGain> gains, const SystemParams &params,
                                  const SolverOptions &options)
{
    const std::vector<double> taus(gains.size(), 1.0 / static_cast<double>(gains.size()));
    DinkelbachResult power = dinkelbach_power(taus, gains, params, options);
    AllocationResult out = evaluate_allocation(std::move(power.powers_w), taus, gains, params);
    out.trace = {out.ee};
    out.converged = power.converged;
    out.iterations = power.iterations;
    return out;
}

AllocationResult solve_max_se(std::span<const ChannelGain> gains, const SystemParams &params)
{
    std::vector<double> powers(gains.size(), params.p_max_w);
    std::vector<double> taus = time_allocate(powers, gains, params);
    AllocationResult out = evaluate_allocation(std::move(powers), std::move(taus), gains, params);
    out.trace = {out.ee};
    out.iterations = 1;
    return out;
}

} // namespace

SchemeOutcome solve_scheme_with_gains(Scheme scheme, std::span<const ChannelGain> gains, const SystemParams &params,
                                      const SolverOptions &options)
{
    SchemeOutcome out;
    out.scheme = scheme;
    out.feasibility = check_feasibility(gains, params);

    if (scheme == Scheme::equal_time)
    {
        // Feasible iff every user meets R_min inside its 1/K share at P_max.
        const double share = 1.0 / static_cast<double>(gains.size());
        double slack = share;
        for (double t : out.feasibility.tau_mins)
            slack = std::min(slack, share - t);
        out.feasibility.slack = slack;
        out.feasibility.feasible = slack >= 0.0;
    }
    if (!out.feasibility.feasible)
        return out;

    try
    {
        switch (scheme)
        {
        case Scheme::prop:
        case Scheme::conventional:
            out.allocation = bcd_solve(gains, params, options);
            break;
        case Scheme::equal_time:
            out.allocation = solve_equal_time(gains, params, options);
            break;
        case Scheme::max_se:
            out.allocation = solve_max_se(gains, params);
            break;
        }
    }
    catch (const std::exception &e)
    {
        out.error = e.what();
    }
    return out;
}

SchemeOutcome solve_scheme(Scheme scheme, const Scenario &scenario, const SolverOptions &options)
{
    scenario.validate();
    const auto gains = scheme_gains(scheme, scenario);
    return solve_scheme_with_gains(scheme, gains, scenario.params, options);
}

} // namespace pinching

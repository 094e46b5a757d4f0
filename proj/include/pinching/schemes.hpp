// SPDX-License-Identifier: Apache-2.0
//
// The proposed scheme and its three benchmarks behind one interface:
//
//   prop          pinching placement, BCD over power and time
//   equal_time    pinching placement, tau_k = 1/K, EE-optimal powers
//   max_se        pinching placement, P_k = P_max, sum-rate-optimal time split
//   conventional  fixed half-wavelength ULA at the feed point, BCD as prop

#pragma once

#include "pinching/allocator.hpp"
#include "pinching/core_model.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pinching
{

enum class Scheme
{
    prop,
    equal_time,
    max_se,
    conventional
};

inline constexpr std::array<Scheme, 4> all_schemes{Scheme::prop, Scheme::equal_time, Scheme::max_se,
                                                   Scheme::conventional};

// Machine name used in CSV and on the command line: prop, equal_time, max_se, conventional.
std::string_view scheme_name(Scheme scheme);
// Legend label: Prop, Equal Time, MaxSE, Conventional.
std::string_view scheme_label(Scheme scheme);
// Throws std::invalid_argument on an unknown name.
Scheme parse_scheme(std::string_view name);

// One user drop.
struct Scenario
{
    SystemParams params;
    std::vector<UserLocation> users;

    // Throws std::invalid_argument unless params validate, users.size() == K
    // and every user lies inside the service area.
    void validate() const;
};

struct SchemeOutcome
{
    Scheme scheme = Scheme::prop;
    Feasibility feasibility;                   // against the scheme's own constraint set
    std::optional<AllocationResult> allocation; // present iff feasible and solved
    std::string error;                         // non-empty if the solver threw
};

// Gains the scheme sees on this drop: phase-aligned pinching placement for
// every scheme except conventional, which uses the fixed ULA.
std::vector<ChannelGain> scheme_gains(Scheme scheme, const Scenario &scenario);

// Solve with gains already computed by scheme_gains.
SchemeOutcome solve_scheme_with_gains(Scheme scheme, std::span<const ChannelGain> gains, const SystemParams &params,
                                      const SolverOptions &options = {});

SchemeOutcome solve_scheme(Scheme scheme, const Scenario &scenario, const SolverOptions &options = {});

} // namespace pinching

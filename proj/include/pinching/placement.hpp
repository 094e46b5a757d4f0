// SPDX-License-Identifier: Apache-2.0
//
// Per-user pinching-antenna placement. Under TDMA each user is served alone,
// so the antennas are moved next to the user being served and shifted so that
// every antenna's total phase (waveguide + free space) is a multiple of 2 pi.

#pragma once

#include "pinching/core_model.hpp"

#include <span>
#include <vector>

namespace pinching
{

// Bisection stops once the phase residual is below this (rad).
inline constexpr double phase_tolerance_rad = 1e-10;

// Distance from phi to the nearest multiple of 2 pi, in [0, pi].
double phase_residual(double phi);

// Spacing of the nominal cluster: Delta_min + lambda_g. The extra lambda_g
// absorbs the per-antenna alignment shifts of at most lambda_g / 2.
double cluster_spacing(const SystemParams &params);

// N positions centered on the user's x with cluster_spacing() gaps,
// translated minimally into [0, L]. Throws std::invalid_argument when the
// cluster cannot fit (N * spacing > L).
AntennaPositions nominal_positions(const UserLocation &user, const SystemParams &params);

// Closest x in [0, L] to x_nominal where total_phase is congruent to 0 mod 2 pi.
// total_phase is strictly increasing in x because n_eff > 1.
double phase_align(double x_nominal, const UserLocation &user, const SystemParams &params);

struct UserPlacement
{
    AntennaPositions positions;
    ChannelGain gain; // effective_gain_exact on positions
};

// Nominal cluster, per-antenna phase alignment, and a repair pass that moves
// an antenna to the next aligned point whenever a gap would fall below
// Delta_min. Throws std::runtime_error if no valid aligned layout exists.
UserPlacement place_for_user(const UserLocation &user, const SystemParams &params);

// Conventional fixed uniform linear array: x_n = n * lambda / 2 from the feed
// point, identical for every user. Throws std::invalid_argument if it does not
// fit on the waveguide.
AntennaPositions fixed_ula_positions(const SystemParams &params);

struct PlacementSolution
{
    std::vector<AntennaPositions> per_user;
    std::vector<ChannelGain> gains;
};

PlacementSolution place_pinching(std::span<const UserLocation> users, const SystemParams &params);
PlacementSolution place_fixed_ula(std::span<const UserLocation> users, const SystemParams &params);

} // namespace pinching

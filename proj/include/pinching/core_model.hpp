// SPDX-License-Identifier: Apache-2.0
//
// Physical constants, geometry and effective channel gains of a downlink
// pinching-antenna system: one dielectric waveguide along the x-axis at
// height d, fed at x = 0, radiating through N movable pinching antennas.
// All quantities are in linear SI units (W, Hz, m); dBm only appears at
// the I/O boundary through dbm_to_watts / watts_to_dbm.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pinching
{

inline constexpr double speed_of_light = 299792458.0; // m/s
inline constexpr double pi = 3.14159265358979323846;

double dbm_to_watts(double p_dbm);
double watts_to_dbm(double p_w);

struct WaveConstants
{
    double wavelength;        // lambda = c / f_c (m)
    double guided_wavelength; // lambda_g = lambda / n_eff (m)
    double eta;               // c^2 / (16 pi^2 f_c^2) (m^2)
};

// Requires f_c > 0 and n_eff > 1, throws std::invalid_argument otherwise.
WaveConstants derive_constants(double carrier_frequency_hz, double refractive_index);

// All physical and protocol constants of one system configuration.
// Noise power and minimum rate are common to every user.
struct SystemParams
{
    double carrier_frequency_hz = 28e9;
    double refractive_index = 1.4;   // n_eff of the waveguide dielectric
    double waveguide_height_m = 3.0; // d
    double waveguide_length_m = 60.0;
    double area_x_m = 60.0;          // users in [0, D_x] x [-D_y/2, D_y/2]
    double area_y_m = 20.0;
    std::size_t num_antennas = 4;
    std::size_t num_users = 5;
    double p_max_w = 0.0;            // per-user transmit power limit
    double p_fixed_w = 0.0;          // circuit power
    double noise_power_w = 0.0;      // sigma^2
    double r_min = 0.5;              // bps/Hz
    double min_spacing_m = 0.0;      // Delta_min

    // Simulation defaults: 15 dBm power limit and circuit power, 28 GHz,
    // K = 5, 60 m x 20 m area, L = D_x, R_min = 0.5, sigma^2 = -90 dBm,
    // d = 3 m, n_eff = 1.4, N = 4, Delta_min = lambda / 2.
    static SystemParams defaults();

    double wavelength() const;
    double guided_wavelength() const;
    double eta() const;

    // Throws std::invalid_argument naming the first violated constraint.
    void validate() const;
};

struct UserLocation
{
    double x = 0.0; // m, in [0, D_x]
    double y = 0.0; // m, in [-D_y/2, D_y/2]
};

bool inside_service_area(const UserLocation &user, const SystemParams &params);

// Pinching-antenna x-coordinates on the waveguide (y = 0, z = d implicit).
struct AntennaPositions
{
    std::vector<double> xs;

    std::size_t size() const { return xs.size(); }

    // Every x in [0, length], strictly increasing, consecutive gaps >= min_gap.
    bool valid(double length, double min_gap) const;
    double min_gap() const;
};

// Noise-normalized effective gain (SNR per watt, 1/W).
struct ChannelGain
{
    double value = 0.0;
};

// Euclidean distance from the antenna at x on the waveguide to the user.
double antenna_user_distance(double x, const UserLocation &user, double height);

// Total phase seen by the user from an antenna at x: free-space phase
// (2 pi / lambda) D(x) plus in-waveguide phase (2 pi / lambda_g) x.
double total_phase(double x, const UserLocation &user, const SystemParams &params);

// Exact coherent sum over the antennas, including both phase terms:
// (1 / (N sigma^2)) |sum_n sqrt(eta) / D_n exp(-j phi_n)|^2.
ChannelGain effective_gain_exact(const UserLocation &user, const AntennaPositions &pins, const SystemParams &params);

// Phase-aligned gain: (1 / (N sigma^2)) (sum_n sqrt(eta) / D_n)^2.
ChannelGain effective_gain_aligned(const UserLocation &user, const AntennaPositions &pins, const SystemParams &params);

// Equal-distance approximation with all antennas at the closest waveguide
// point: eta N / ((y^2 + d^2) sigma^2).
ChannelGain effective_gain_approx(const UserLocation &user, const SystemParams &params);

// tau * log2(1 + P h) in bps/Hz.
double user_rate(double tau, double power_w, ChannelGain gain);

// Sum rate over total consumed power (P_f + sum P). Throws
// std::invalid_argument on length mismatch or non-positive denominator.
double ee_objective(std::span<const double> taus, std::span<const double> powers_w,
                    std::span<const ChannelGain> gains, double p_fixed_w);

} // namespace pinching

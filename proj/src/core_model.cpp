// SPDX-License-Identifier: Apache-2.0

#include "pinching/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace pinching
{

double dbm_to_watts(double p_dbm)
{
    return std::pow(10.0, (p_dbm - 30.0) / 10.0);
}

double watts_to_dbm(double p_w)
{
    return 10.0 * std::log10(p_w) + 30.0;
}

WaveConstants derive_constants(double carrier_frequency_hz, double refractive_index)
{
    if (!(carrier_frequency_hz > 0.0) || !std::isfinite(carrier_frequency_hz))
        throw std::invalid_argument("carrier frequency must be positive and finite");
    if (!(refractive_index > 1.0) || !std::isfinite(refractive_index))
        throw std::invalid_argument("effective refractive index must exceed 1");

    WaveConstants out;
    out.wavelength = speed_of_light / carrier_frequency_hz;
    out.guided_wavelength = out.wavelength / refractive_index;
    out.eta = out.wavelength * out.wavelength / (16.0 * pi * pi);
    return out;
}

SystemParams SystemParams::defaults()
{
    SystemParams p;
    p.p_max_w = dbm_to_watts(15.0);
    p.p_fixed_w = dbm_to_watts(15.0);
    p.noise_power_w = dbm_to_watts(-90.0);
    p.min_spacing_m = 0.5 * p.wavelength();
    return p;
}

double SystemParams::wavelength() const
{
    return speed_of_light / carrier_frequency_hz;
}

double SystemParams::guided_wavelength() const
{
    return wavelength() / refractive_index;
}

double SystemParams::eta() const
{
    const double lambda = wavelength();
    return lambda * lambda / (16.0 * pi * pi);
}

void SystemParams::validate() const
{
    auto require = [](bool ok, const char *what)
    {
        if (!ok)
            throw std::invalid_argument(std::string("invalid system parameter: ") + what);
    };
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };

    require(positive(carrier_frequency_hz), "f_c must be positive");
    require(std::isfinite(refractive_index) && refractive_index > 1.0, "n_eff must exceed 1");
    require(positive(waveguide_height_m), "d must be positive");
    require(positive(waveguide_length_m), "L must be positive");
    require(positive(area_x_m), "D_x must be positive");
    require(positive(area_y_m), "D_y must be positive");
    require(num_antennas >= 1, "N must be at least 1");
    require(num_users >= 1, "K must be at least 1");
    require(std::isfinite(p_max_w) && p_max_w >= 0.0, "P_max must be non-negative");
    require(positive(p_fixed_w), "P_f must be positive");
    require(positive(noise_power_w), "sigma2 must be positive");
    require(std::isfinite(r_min) && r_min >= 0.0, "R_min must be non-negative");
    require(positive(min_spacing_m), "delta_min must be positive");
    require(static_cast<double>(num_antennas) * min_spacing_m <= waveguide_length_m, "N * delta_min must not exceed L");
}

bool inside_service_area(const UserLocation &user, const SystemParams &params)
{
    return user.x >= 0.0 && user.x <= params.area_x_m && std::abs(user.y) <= 0.5 * params.area_y_m;
}

bool AntennaPositions::valid(double length, double min_gap) const
{
    if (xs.empty())
        return false;
    for (std::size_t n = 0; n < xs.size(); ++n)
    {
        if (!(xs[n] >= 0.0 && xs[n] <= length))
            return false;
        if (n > 0 && xs[n] - xs[n - 1] < min_gap)
            return false;
    }
    return true;
}

double AntennaPositions::min_gap() const
{
    double gap = INFINITY;
    for (std::size_t n = 1; n < xs.size(); ++n)
        gap = std::min(gap, xs[n] - xs[n - 1]);
    return gap;
}

double antenna_user_distance(double x, const UserLocation &user, double height)
{
    const double dx = x - user.x;
    return std::sqrt(dx * dx + user.y * user.y + height * height);
}

double total_phase(double x, const UserLocation &user, const SystemParams &params)
{
    const double free_space = 2.0 * pi / params.wavelength() * antenna_user_distance(x, user, params.waveguide_height_m);
    const double guided = 2.0 * pi / params.guided_wavelength() * x;
    return free_space + guided;
}

ChannelGain effective_gain_exact(const UserLocation &user, const AntennaPositions &pins, const SystemParams &params)
{
    const double amp = std::sqrt(params.eta());
    std::complex<double> sum{0.0, 0.0};
    for (double x : pins.xs)
    {
        const double dist = antenna_user_distance(x, user, params.waveguide_height_m);
        sum += std::polar(amp / dist, -total_phase(x, user, params));
    }
    const double n = static_cast<double>(pins.size());
    return {std::norm(sum) / (n * params.noise_power_w)};
}

ChannelGain effective_gain_aligned(const UserLocation &user, const AntennaPositions &pins, const SystemParams &params)
{
    const double amp = std::sqrt(params.eta());
    double sum = 0.0;
    for (double x : pins.xs)
        sum += amp / antenna_user_distance(x, user, params.waveguide_height_m);
    const double n = static_cast<double>(pins.size());
    return {sum * sum / (n * params.noise_power_w)};
}

ChannelGain effective_gain_approx(const UserLocation &user, const SystemParams &params)
{
    const double d = params.waveguide_height_m;
    const double dist2 = user.y * user.y + d * d;
    return {params.eta() * static_cast<double>(params.num_antennas) / (dist2 * params.noise_power_w)};
}

double user_rate(double tau, double power_w, ChannelGain gain)
{
    return tau * std::log2(1.0 + power_w * gain.value);
}

double ee_objective(std::span<const double> taus, std::span<const double> powers_w,
                    std::span<const ChannelGain> gains, double p_fixed_w)
{
    if (taus.size() != powers_w.size() || taus.size() != gains.size())
        throw std::invalid_argument("ee_objective: taus, powers and gains must have equal length");

    double sum_rate = 0.0, total_power = p_fixed_w;
    for (std::size_t k = 0; k < taus.size(); ++k)
    {
        sum_rate += user_rate(taus[k], powers_w[k], gains[k]);
        total_power += powers_w[k];
    }
    if (!(total_power > 0.0))
        throw std::invalid_argument("ee_objective: total power consumption must be positive");
    return sum_rate / total_power;
}

} // namespace pinching

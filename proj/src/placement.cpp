// SPDX-License-Identifier: Apache-2.0

#include "pinching/placement.hpp"
#include "pinching/root_finding.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace pinching
{

namespace
{

constexpr double two_pi = 2.0 * pi;

enum class Direction
{
    down,
    up
};

// Nearest aligned point from x_from in one direction, restricted to [lo_limit, hi_limit].
// Brackets grow in steps of lambda_g / 2; roots are roughly lambda_g apart.
std::optional<double> aligned_point(double x_from, Direction dir, const UserLocation &user,
                                    const SystemParams &params, double lo_limit, double hi_limit)
{
    const double phi0 = total_phase(x_from, user, params);
    if (phase_residual(phi0) < phase_tolerance_rad)
        return x_from;

    const double level = two_pi * (dir == Direction::up ? std::ceil(phi0 / two_pi) : std::floor(phi0 / two_pi));
    auto f = [&](double x) { return total_phase(x, user, params) - level; };
    const double step = 0.5 * params.guided_wavelength();

    double lo = x_from, hi = x_from;
    if (dir == Direction::up)
    {
        do
        {
            if (hi >= hi_limit)
                return std::nullopt;
            hi = std::min(hi + step, hi_limit);
        } while (f(hi) < 0.0);
    }
    else
    {
        do
        {
            if (lo <= lo_limit)
                return std::nullopt;
            lo = std::max(lo - step, lo_limit);
        } while (f(lo) > 0.0);
    }
    return bisect_increasing(f, lo, hi, phase_tolerance_rad).x;
}

// Returns false if an antenna would have to leave [0, L].
bool repair_forward(std::vector<double> &xs, const UserLocation &user, const SystemParams &params)
{
    const double length = params.waveguide_length_m;
    for (std::size_t n = 1; n < xs.size(); ++n)
    {
        if (xs[n] - xs[n - 1] >= params.min_spacing_m)
            continue;
        const double from = xs[n - 1] + params.min_spacing_m;
        if (from > length)
            return false;
        auto x = aligned_point(from, Direction::up, user, params, 0.0, length);
        if (!x)
            return false;
        xs[n] = *x;
    }
    return true;
}

bool repair_backward(std::vector<double> &xs, const UserLocation &user, const SystemParams &params)
{
    for (std::size_t n = xs.size() - 1; n-- > 0;)
    {
        if (xs[n + 1] - xs[n] >= params.min_spacing_m)
            continue;
        const double from = xs[n + 1] - params.min_spacing_m;
        if (from < 0.0)
            return false;
        auto x = aligned_point(from, Direction::down, user, params, 0.0, params.waveguide_length_m);
        if (!x)
            return false;
        xs[n] = *x;
    }
    return true;
}

} // namespace

double phase_residual(double phi)
{
    const double r = std::fmod(std::abs(phi), two_pi);
    return std::min(r, two_pi - r);
}

double cluster_spacing(const SystemParams &params)
{
    return params.min_spacing_m + params.guided_wavelength();
}

AntennaPositions nominal_positions(const UserLocation &user, const SystemParams &params)
{
    const std::size_t count = params.num_antennas;
    const double spacing = cluster_spacing(params);
    const double length = params.waveguide_length_m;
    if (static_cast<double>(count) * spacing > length)
        throw std::invalid_argument("nominal_positions: antenna cluster does not fit on the waveguide");

    AntennaPositions out;
    out.xs.resize(count);
    const double center = 0.5 * (static_cast<double>(count) + 1.0);
    for (std::size_t n = 0; n < count; ++n)
        out.xs[n] = user.x + (static_cast<double>(n + 1) - center) * spacing;

    double shift = 0.0;
    if (out.xs.front() < 0.0)
        shift = -out.xs.front();
    else if (out.xs.back() > length)
        shift = length - out.xs.back();
    if (shift != 0.0)
    {
        for (double &x : out.xs)
            x += shift;
        // Pin the boundary exactly; the shifted sum can land one ulp outside.
        if (shift > 0.0)
            out.xs.front() = 0.0;
        else
            out.xs.back() = length;
    }
    return out;
}

double phase_align(double x_nominal, const UserLocation &user, const SystemParams &params)
{
    const double length = params.waveguide_length_m;
    if (!(x_nominal >= 0.0 && x_nominal <= length))
        throw std::invalid_argument("phase_align: nominal position lies outside the waveguide");

    const auto below = aligned_point(x_nominal, Direction::down, user, params, 0.0, length);
    const auto above = aligned_point(x_nominal, Direction::up, user, params, 0.0, length);
    if (below && above)
        return (x_nominal - *below <= *above - x_nominal) ? *below : *above;
    if (below)
        return *below;
    if (above)
        return *above;
    throw std::runtime_error("phase_align: no phase-aligned point on the waveguide");
}

UserPlacement place_for_user(const UserLocation &user, const SystemParams &params)
{
    const AntennaPositions nominal = nominal_positions(user, params);

    std::vector<double> aligned(nominal.xs.size());
    for (std::size_t n = 0; n < aligned.size(); ++n)
        aligned[n] = phase_align(nominal.xs[n], user, params);

    AntennaPositions out;
    out.xs = aligned;
    if (!repair_forward(out.xs, user, params))
    {
        out.xs = aligned;
        if (!repair_backward(out.xs, user, params))
            throw std::runtime_error("place_for_user: cannot satisfy the minimum antenna spacing");
    }
    if (!out.valid(params.waveguide_length_m, params.min_spacing_m))
        throw std::runtime_error("place_for_user: aligned layout violates waveguide constraints");

    const ChannelGain gain = effective_gain_exact(user, out, params);
    return {std::move(out), gain};
}

AntennaPositions fixed_ula_positions(const SystemParams &params)
{
    const double half_wavelength = 0.5 * params.wavelength();
    const std::size_t count = params.num_antennas;
    if (count == 0 || static_cast<double>(count - 1) * half_wavelength > params.waveguide_length_m)
        throw std::invalid_argument("fixed_ula_positions: array longer than the waveguide");

    AntennaPositions out;
    out.xs.resize(count);
    for (std::size_t n = 0; n < count; ++n)
        out.xs[n] = static_cast<double>(n) * half_wavelength;
    return out;
}

PlacementSolution place_pinching(std::span<const UserLocation> users, const SystemParams &params)
{
    PlacementSolution out;
    out.per_user.reserve(users.size());
    out.gains.reserve(users.size());
    for (const auto &user : users)
    {
        auto placed = place_for_user(user, params);
        out.per_user.push_back(std::move(placed.positions));
        out.gains.push_back(placed.gain);
    }
    return out;
}

PlacementSolution place_fixed_ula(std::span<const UserLocation> users, const SystemParams &params)
{
    const AntennaPositions ula = fixed_ula_positions(params);
    PlacementSolution out;
    for (const auto &user : users)
    {
        out.per_user.push_back(ula);
        out.gains.push_back(effective_gain_exact(user, ula, params));
    }
    return out;
}

} // namespace pinching

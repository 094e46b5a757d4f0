// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pinching/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

using namespace pinching;

namespace
{

SystemParams unit_noise_params(std::size_t antennas)
{
    SystemParams p = SystemParams::defaults();
    p.noise_power_w = 1e-12;
    p.num_antennas = antennas;
    return p;
}

// Hand-evaluated at 28 GHz with c = 299792458 m/s.
constexpr double lambda_28ghz = 1.07068735e-2;
constexpr double eta_28ghz = 7.259481705540117e-7;

} // namespace

TEST_CASE("dbm_to_watts")
{
    CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(dbm_to_watts(15.0) - 0.0316228) < 1e-7);
    CHECK(dbm_to_watts(-90.0) == doctest::Approx(1e-12).epsilon(1e-12));
    for (double dbm : {-120.0, -3.3, 0.0, 17.0, 42.5})
        CHECK(watts_to_dbm(dbm_to_watts(dbm)) == doctest::Approx(dbm).epsilon(1e-9));
}

TEST_CASE("derive_constants at 28 GHz")
{
    const auto c = derive_constants(28e9, 1.4);
    CHECK(c.wavelength == doctest::Approx(lambda_28ghz).epsilon(1e-9));
    CHECK(c.eta == doctest::Approx(eta_28ghz).epsilon(1e-9));
    CHECK(c.guided_wavelength == doctest::Approx(7.6478e-3).epsilon(1e-4));
    CHECK(c.guided_wavelength < c.wavelength);

    CHECK_THROWS_AS(derive_constants(0.0, 1.4), std::invalid_argument);
    CHECK_THROWS_AS(derive_constants(28e9, 1.0), std::invalid_argument);
}

TEST_CASE("SystemParams derived quantities match derive_constants")
{
    const auto p = SystemParams::defaults();
    const auto c = derive_constants(p.carrier_frequency_hz, p.refractive_index);
    CHECK(std::abs(p.wavelength() / c.wavelength - 1.0) < 1e-12);
    CHECK(std::abs(p.guided_wavelength() / c.guided_wavelength - 1.0) < 1e-12);
    CHECK(std::abs(p.eta() / c.eta - 1.0) < 1e-12);
    CHECK(p.min_spacing_m == doctest::Approx(0.5 * c.wavelength));
    CHECK_NOTHROW(p.validate());
}

TEST_CASE("SystemParams::validate rejects bad values")
{
    auto bad = [](auto mutate)
    {
        SystemParams p = SystemParams::defaults();
        mutate(p);
        return p;
    };
    CHECK_THROWS_AS(bad([](SystemParams &p) { p.num_users = 0; }).validate(), std::invalid_argument);
    CHECK_THROWS_AS(bad([](SystemParams &p) { p.num_antennas = 0; }).validate(), std::invalid_argument);
    CHECK_THROWS_AS(bad([](SystemParams &p) { p.refractive_index = 0.9; }).validate(), std::invalid_argument);
    CHECK_THROWS_AS(bad([](SystemParams &p) { p.noise_power_w = 0.0; }).validate(), std::invalid_argument);
    CHECK_THROWS_AS(bad([](SystemParams &p) { p.p_max_w = -1.0; }).validate(), std::invalid_argument);
    CHECK_THROWS_AS(bad([](SystemParams &p) { p.min_spacing_m = 30.0; }).validate(), std::invalid_argument);
    CHECK_NOTHROW(bad([](SystemParams &p) { p.waveguide_length_m = 40.0; }).validate());
}

TEST_CASE("effective_gain_exact single antenna above the user")
{
    const auto p = unit_noise_params(1);
    const UserLocation user{30.0, 0.0};
    const auto h = effective_gain_exact(user, {{30.0}}, p);
    CHECK(h.value == doctest::Approx(eta_28ghz / 9e-12).epsilon(1e-9));
    CHECK(h.value == doctest::Approx(8.067e4).epsilon(1e-3));
    CHECK(effective_gain_aligned(user, {{30.0}}, p).value == doctest::Approx(h.value).epsilon(1e-12));
}

TEST_CASE("effective_gain_exact coherent pair")
{
    // Two antennas mirrored about the user share D; choosing the spacing so the
    // guided phase difference is a multiple of 2 pi makes the sum coherent.
    auto p = unit_noise_params(2);
    const UserLocation user{20.0, 4.0};
    const double half_gap = 0.5 * p.guided_wavelength() * 3.0;
    const AntennaPositions pins{{user.x - half_gap, user.x + half_gap}};
    const double dist = std::sqrt(half_gap * half_gap + 16.0 + 9.0);
    const double expected = 2.0 * p.eta() / (dist * dist * p.noise_power_w);
    CHECK(effective_gain_exact(user, pins, p).value == doctest::Approx(expected).epsilon(1e-9));
    CHECK(effective_gain_aligned(user, pins, p).value == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("exact gain never exceeds the coherent bound")
{
    const auto p = unit_noise_params(4);
    const UserLocation user{20.0, 5.0};
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> pos(18.0, 22.0);
    for (int trial = 0; trial < 200; ++trial)
    {
        std::vector<double> xs(4);
        for (auto &x : xs)
            x = pos(rng);
        std::sort(xs.begin(), xs.end());

        // Reference: explicit complex sum with cos/sin.
        double re = 0.0, im = 0.0, bound = 0.0;
        for (double x : xs)
        {
            const double dist = std::sqrt((x - user.x) * (x - user.x) + 25.0 + 9.0);
            const double phi = 2.0 * pi * dist / p.wavelength() + 2.0 * pi * x / p.guided_wavelength();
            re += std::sqrt(p.eta()) / dist * std::cos(phi);
            im -= std::sqrt(p.eta()) / dist * std::sin(phi);
            bound += std::sqrt(p.eta()) / dist;
        }
        const double ref = (re * re + im * im) / (4.0 * p.noise_power_w);
        const double exact = effective_gain_exact(user, {xs}, p).value;
        CHECK(exact == doctest::Approx(ref).epsilon(1e-9));
        CHECK(exact <= effective_gain_aligned(user, {xs}, p).value * (1.0 + 1e-12));
        CHECK(effective_gain_aligned(user, {xs}, p).value ==
              doctest::Approx(bound * bound / (4.0 * p.noise_power_w)).epsilon(1e-12));
    }
}

TEST_CASE("effective_gain_approx")
{
    auto p = unit_noise_params(1);
    CHECK(effective_gain_approx({30.0, 0.0}, p).value == doctest::Approx(8.067e4).epsilon(1e-3));

    p.num_antennas = 4;
    const double four = effective_gain_approx({10.0, 10.0}, p).value;
    CHECK(four == doctest::Approx(eta_28ghz * 4.0 / (109.0 * 1e-12)).epsilon(1e-12));
    CHECK(four == doctest::Approx(2.664e4).epsilon(1e-3));
    p.num_antennas = 8;
    CHECK(effective_gain_approx({10.0, 10.0}, p).value == doctest::Approx(2.0 * four).epsilon(1e-12));
}

TEST_CASE("gain scales as 1 / sigma^2")
{
    auto p = unit_noise_params(3);
    const UserLocation user{12.0, -7.0};
    const AntennaPositions pins{{11.9, 12.0, 12.1}};
    const double h1 = effective_gain_exact(user, pins, p).value;
    p.noise_power_w *= 4.0;
    CHECK(effective_gain_exact(user, pins, p).value == doctest::Approx(h1 / 4.0).epsilon(1e-12));
}

TEST_CASE("user_rate")
{
    CHECK(user_rate(1.0, 0.0, {123.0}) == 0.0);
    CHECK(user_rate(0.5, 3.0, {1.0}) == doctest::Approx(1.0));
    CHECK(user_rate(0.25, 15.0, {1.0}) == doctest::Approx(1.0));
}

TEST_CASE("ee_objective")
{
    const std::vector<ChannelGain> g1{{1.0}};
    CHECK(ee_objective(std::vector{1.0}, std::vector{1.0}, g1, 1.0) == doctest::Approx(0.5));
    CHECK(ee_objective(std::vector{0.5, 0.5}, std::vector{0.0, 0.0}, std::vector<ChannelGain>{{1.0}, {2.0}}, 1.0) ==
          0.0);

    // P h = (3, 15) with P = (0.1, 0.2): h = (30, 75).
    const std::vector<ChannelGain> g2{{30.0}, {75.0}};
    CHECK(ee_objective(std::vector{0.5, 0.5}, std::vector{0.1, 0.2}, g2, 0.7) == doctest::Approx(3.0));

    // Permuting users leaves EE unchanged.
    const std::vector<ChannelGain> g2r{{75.0}, {30.0}};
    CHECK(ee_objective(std::vector{0.5, 0.5}, std::vector{0.2, 0.1}, g2r, 0.7) == doctest::Approx(3.0));

    CHECK_THROWS_AS(ee_objective(std::vector{1.0}, std::vector{1.0}, g1, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(ee_objective(std::vector{1.0, 0.0}, std::vector{1.0}, g1, 1.0), std::invalid_argument);
}

TEST_CASE("gains positive across the service area")
{
    const auto p = SystemParams::defaults();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ux(0.0, p.area_x_m), uy(-0.5 * p.area_y_m, 0.5 * p.area_y_m);
    for (int i = 0; i < 500; ++i)
    {
        const UserLocation u{ux(rng), uy(rng)};
        CHECK(inside_service_area(u, p));
        CHECK(effective_gain_approx(u, p).value > 0.0);
        CHECK(effective_gain_aligned(u, {{0.0, 0.01, 0.02, 0.03}}, p).value > 0.0);
    }
    CHECK_FALSE(inside_service_area({-0.1, 0.0}, p));
    CHECK_FALSE(inside_service_area({1.0, 10.5}, p));
}

TEST_CASE("AntennaPositions::valid")
{
    CHECK(AntennaPositions{{0.0, 1.0, 2.0}}.valid(2.0, 1.0));
    CHECK_FALSE(AntennaPositions{{0.0, 0.5, 2.0}}.valid(2.0, 1.0));
    CHECK_FALSE(AntennaPositions{{0.0, 1.0, 2.5}}.valid(2.0, 1.0));
    CHECK_FALSE(AntennaPositions{{1.0, 0.0}}.valid(2.0, 0.1));
    CHECK_FALSE(AntennaPositions{}.valid(2.0, 0.1));
}

// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pinching/simulation.hpp"

#include <cmath>

using namespace pinching;

TEST_CASE("trial_seed")
{
    CHECK(trial_seed(1, 0) == trial_seed(1, 0));
    CHECK(trial_seed(1, 0) != trial_seed(1, 1));
    CHECK(trial_seed(1, 0) != trial_seed(2, 0));
    // SplitMix64 reference stream: seed 0, first output.
    CHECK(trial_seed(0, 0) == 0xE220A8397B1DCDAFull);
}

TEST_CASE("sample_users")
{
    const SystemParams p = SystemParams::defaults();
    const auto a = sample_users(42, p);
    const auto b = sample_users(42, p);
    REQUIRE(a.size() == p.num_users);
    for (std::size_t k = 0; k < a.size(); ++k)
    {
        CHECK(a[k].x == b[k].x);
        CHECK(a[k].y == b[k].y);
    }
    CHECK(sample_users(43, p)[0].x != a[0].x);

    // Mean of x over 1e5 users: sd of the mean is 60 / sqrt(12e5) ~ 0.055.
    double sum_x = 0.0, sum_y = 0.0;
    std::size_t n = 0;
    for (std::uint64_t s = 0; s < 20000; ++s)
    {
        for (const auto &u : sample_users(trial_seed(9, s), p))
        {
            CHECK(inside_service_area(u, p));
            sum_x += u.x;
            sum_y += u.y;
            ++n;
        }
    }
    const double sd_x = p.area_x_m / std::sqrt(12.0 * static_cast<double>(n));
    const double sd_y = p.area_y_m / std::sqrt(12.0 * static_cast<double>(n));
    CHECK(std::abs(sum_x / static_cast<double>(n) - 30.0) < 3.0 * sd_x);
    CHECK(std::abs(sum_y / static_cast<double>(n)) < 3.0 * sd_y);
}

TEST_CASE("run_trial matches the per-scheme solver")
{
    SystemParams p = SystemParams::defaults();
    p.num_users = 1;
    const Scenario s{p, sample_users(5, p)};
    const auto rec = run_trial(s, all_schemes);
    REQUIRE(rec.schemes.size() == 4);
    const auto *prop = rec.find(Scheme::prop);
    REQUIRE(prop);
    REQUIRE(prop->feasible);

    const auto gains = scheme_gains(Scheme::prop, s);
    const auto direct = bcd_solve(gains, p);
    CHECK(*prop->ee == direct.ee);
    CHECK(prop->sum_rate == doctest::Approx(direct.sum_rate()));
    CHECK(prop->total_power_w == doctest::Approx(direct.total_power(p.p_fixed_w)));
}

TEST_CASE("run_trial records infeasibility without throwing")
{
    SystemParams p = SystemParams::defaults();
    p.p_max_w = dbm_to_watts(0.0);
    int infeasible = 0;
    for (std::uint64_t t = 0; t < 200; ++t)
    {
        const Scenario s{p, sample_users(trial_seed(3, t), p)};
        const auto rec = run_trial(s, all_schemes);
        const auto *conv = rec.find(Scheme::conventional);
        REQUIRE(conv);
        if (!conv->feasible)
        {
            ++infeasible;
            CHECK_FALSE(conv->ee.has_value());
        }
    }
    CHECK(infeasible > 0);
}

TEST_CASE("Prop dominates Equal Time per trial")
{
    const SystemParams p = SystemParams::defaults();
    const std::vector<Scheme> two{Scheme::prop, Scheme::equal_time};
    for (std::uint64_t t = 0; t < 500; ++t)
    {
        const auto rec = run_trial({p, sample_users(trial_seed(4, t), p)}, two);
        const auto *a = rec.find(Scheme::prop);
        const auto *b = rec.find(Scheme::equal_time);
        if (a->ee && b->ee)
            CHECK(*a->ee >= *b->ee - 1e-9);
    }
}

TEST_CASE("aggregate")
{
    auto trial = [](std::optional<double> ee)
    {
        TrialRecord r;
        r.schemes.push_back({Scheme::prop, ee.has_value(), ee, 0.0, 0.0, {}});
        return r;
    };
    const std::vector<Scheme> prop{Scheme::prop};

    const std::vector<TrialRecord> mixed{trial(1.0), trial(3.0), trial({}), trial({})};
    const auto ex = aggregate(mixed, prop, AccountingPolicy::exclude_infeasible);
    REQUIRE(ex.size() == 1);
    CHECK(*ex[0].mean_ee == doctest::Approx(2.0));
    CHECK(ex[0].feasibility_rate == 0.5);
    CHECK(ex[0].n_trials == 4);
    CHECK(ex[0].stderr_ee == doctest::Approx(std::sqrt(2.0) / std::sqrt(2.0)));

    const auto zero = aggregate(mixed, prop, AccountingPolicy::zero_infeasible);
    CHECK(*zero[0].mean_ee == doctest::Approx(1.0));
    CHECK(zero[0].feasibility_rate == 0.5);

    const std::vector<TrialRecord> all{trial(1.0), trial(2.0), trial(6.0)};
    const auto a = aggregate(all, prop, AccountingPolicy::exclude_infeasible);
    const auto b = aggregate(all, prop, AccountingPolicy::zero_infeasible);
    CHECK(*a[0].mean_ee == *b[0].mean_ee);
    CHECK(a[0].stderr_ee == b[0].stderr_ee);
    CHECK(a[0].feasibility_rate == 1.0);

    const std::vector<TrialRecord> none{trial({}), trial({})};
    CHECK_FALSE(aggregate(none, prop).front().mean_ee.has_value());
    CHECK(*aggregate(none, prop, AccountingPolicy::zero_infeasible).front().mean_ee == 0.0);

    const std::vector<TrialRecord> one{trial(5.0)};
    CHECK(aggregate(one, prop)[0].stderr_ee == 0.0);

    CHECK_THROWS_AS(aggregate(std::vector<TrialRecord>{}, prop), std::invalid_argument);
}

TEST_CASE("policy and axis names")
{
    CHECK(parse_policy(policy_name(AccountingPolicy::zero_infeasible)) == AccountingPolicy::zero_infeasible);
    CHECK(parse_policy(policy_name(AccountingPolicy::exclude_infeasible)) == AccountingPolicy::exclude_infeasible);
    CHECK_THROWS_AS(parse_policy("drop"), std::invalid_argument);
    for (SweepAxis a : {SweepAxis::p_max_dbm, SweepAxis::r_min, SweepAxis::n_antennas})
        CHECK(parse_axis(axis_name(a)) == a);
    CHECK_THROWS_AS(parse_axis("K"), std::invalid_argument);
}

TEST_CASE("apply_axis")
{
    const SystemParams p = SystemParams::defaults();
    CHECK(apply_axis(p, SweepAxis::p_max_dbm, 30.0).p_max_w == doctest::Approx(1.0));
    CHECK(apply_axis(p, SweepAxis::r_min, 1.25).r_min == 1.25);
    CHECK(apply_axis(p, SweepAxis::n_antennas, 8.0).num_antennas == 8);
    CHECK_THROWS_AS(apply_axis(p, SweepAxis::n_antennas, 2.5), std::invalid_argument);
    CHECK_THROWS_AS(apply_axis(p, SweepAxis::n_antennas, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(apply_axis(p, SweepAxis::r_min, -1.0), std::invalid_argument);
}

TEST_CASE("run_sweep with one trial reproduces run_trial")
{
    const SystemParams p = SystemParams::defaults();
    SweepOptions opt;
    opt.n_trials = 1;
    opt.master_seed = 77;
    const std::vector<double> values{10.0};
    const auto sweep = run_sweep(SweepAxis::p_max_dbm, values, p, opt);
    REQUIRE(sweep.points.size() == 1);
    REQUIRE(sweep.points[0].size() == 4);

    const SystemParams q = apply_axis(p, SweepAxis::p_max_dbm, 10.0);
    const auto rec = run_trial({q, sample_users(trial_seed(77, 0), q)}, all_schemes);
    for (std::size_t i = 0; i < 4; ++i)
    {
        const auto &sum = sweep.points[0][i];
        CHECK(sum.scheme == all_schemes[i]);
        CHECK(sum.n_trials == 1);
        if (rec.schemes[i].ee)
            CHECK(*sum.mean_ee == *rec.schemes[i].ee);
        else
            CHECK_FALSE(sum.mean_ee.has_value());
    }
}

TEST_CASE("drops are paired across axis values")
{
    const SystemParams p = SystemParams::defaults();
    SweepOptions opt;
    opt.n_trials = 20;
    opt.schemes = {Scheme::prop};
    const std::vector<double> values{0.25, 1.0};
    const auto recs = run_sweep_records(SweepAxis::r_min, values, p, opt);
    REQUIRE(recs.size() == 2);
    for (std::size_t t = 0; t < 20; ++t)
    {
        CHECK(recs[0][t].seed == recs[1][t].seed);
        CHECK(recs[0][t].index == t);
        const auto *lo = recs[0][t].find(Scheme::prop);
        const auto *hi = recs[1][t].find(Scheme::prop);
        if (lo->ee && hi->ee)
            CHECK(*lo->ee >= *hi->ee - 1e-6 * *lo->ee);
    }
}

TEST_CASE("run_sweep is independent of the thread count")
{
    const SystemParams p = SystemParams::defaults();
    SweepOptions opt;
    opt.n_trials = 64;
    opt.master_seed = 5;
    const std::vector<double> values{1.0, 4.0};
    opt.threads = 1;
    const auto a = run_sweep(SweepAxis::n_antennas, values, p, opt);
    opt.threads = 7;
    const auto b = run_sweep(SweepAxis::n_antennas, values, p, opt);
    for (std::size_t v = 0; v < values.size(); ++v)
    {
        for (std::size_t s = 0; s < 4; ++s)
        {
            CHECK(a.points[v][s].mean_ee == b.points[v][s].mean_ee);
            CHECK(a.points[v][s].stderr_ee == b.points[v][s].stderr_ee);
            CHECK(a.points[v][s].feasibility_rate == b.points[v][s].feasibility_rate);
        }
    }
}

TEST_CASE("run_sweep rejects bad input")
{
    const SystemParams p = SystemParams::defaults();
    SweepOptions opt;
    opt.n_trials = 2;
    CHECK_THROWS_AS(run_sweep(SweepAxis::n_antennas, std::vector{4.0, 1.5}, p, opt), std::invalid_argument);
    CHECK_THROWS_AS(run_sweep(SweepAxis::p_max_dbm, std::vector<double>{}, p, opt), std::invalid_argument);
    opt.n_trials = 0;
    CHECK_THROWS_AS(run_sweep(SweepAxis::p_max_dbm, std::vector{1.0}, p, opt), std::invalid_argument);
}

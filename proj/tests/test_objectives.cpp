#include <doctest.h>

#include <set>

#include "fixtures.hpp"
#include "hems/error.hpp"
#include "hems/objectives.hpp"

using namespace hems;
using testing::for_each_vertex;
using testing::random_case;
using testing::random_schedule;

namespace {

CaseConfig flat_case(std::size_t h) {
    CaseConfig c;
    c.tariff.rate = HorizonSeries::constant(h, 1.0, Unit::dollars_per_kwh);
    c.non_shiftable = HorizonSeries::constant(h, 1.0, Unit::kilowatt);
    c.misc = HorizonSeries::constant(h, 0.0, Unit::kilowatt);
    c.desired_demand = HorizonSeries::constant(h, 1.0, Unit::kilowatt);
    c.outdoor_temp = HorizonSeries::constant(h, 30.0, Unit::celsius);
    c.occupancy = UncertainParam::with_fraction(HorizonSeries::constant(h, 0.5, Unit::persons), 0.1);
    c.demand_deviation.assign(h, 0.1);
    c.arx = ArxModel::zeros({1});
    c.ac_warmup = {0.0};
    return c;
}

Schedule idle(const CaseConfig& c) {
    Schedule s;
    s.on.assign(c.appliances.size(), std::vector<std::uint8_t>(c.horizon(), 0));
    s.setpoints = HorizonSeries::constant(c.horizon(), c.desired_temp, Unit::celsius);
    return s;
}

}  // namespace

TEST_CASE("derive_demand basics") {
    CaseConfig c = flat_case(4);
    auto d = derive_demand(idle(c), c);
    for (double v : d.total) CHECK(v == 1.0);

    c.appliances.push_back({"washer", 1.5, 1, 1, 4, 3});
    Schedule s = idle(c);
    const auto before = derive_demand(s, c).total;
    s.on[0][2] = 1;
    const auto after = derive_demand(s, c).total;
    for (std::size_t h = 0; h < 4; ++h) CHECK(after[h] - before[h] == (h == 2 ? 1.5 : 0.0));

    c.ac_warmup.clear();
    CHECK_THROWS_AS(derive_demand(s, c), MissingHistoryError);
}

TEST_CASE("raising a setpoint lowers the AC load when its coefficient is negative") {
    const CaseConfig c = testing::bundled_case();
    REQUIRE(c.arx.beta_of(0, Exogenous::setpoint) < 0.0);
    Schedule s = baseline_schedule(c);
    auto prev = derive_demand(s, c).ac;
    for (int step = 1; step <= 5; ++step) {
        std::vector<double> sp(c.horizon(), c.desired_temp);
        sp[3] = c.desired_temp + step;
        s.setpoints = HorizonSeries(sp, Unit::celsius);
        const auto ac = derive_demand(s, c).ac;
        CHECK(ac[3] < prev[3]);
        for (std::size_t h = 4; h < c.horizon(); ++h) CHECK(ac[h] <= prev[h]);
        prev = ac;
    }
}

TEST_CASE("case a cost") {
    Tariff t{HorizonSeries({1, 1}, Unit::dollars_per_kwh), 0};
    CHECK(cost_case_a(HorizonSeries({2, 3}, Unit::kilowatt), t) == 5.0);
    CHECK(cost_case_a(HorizonSeries({0, 0}, Unit::kilowatt), t) == 0.0);
    CHECK_THROWS_AS(cost_case_a(HorizonSeries({1}, Unit::kilowatt), t), ValidationError);
}

TEST_CASE("case c objectives by hand") {
    CaseConfig c = flat_case(1);
    c.tariff.penalty_reward = 1.0;
    c.desired_demand = HorizonSeries({2.0}, Unit::kilowatt);
    Schedule s = idle(c);
    c.non_shiftable = HorizonSeries({3.0}, Unit::kilowatt);
    CHECK(objectives_case_c(s, c).o3 == doctest::Approx(4.0));
    c.non_shiftable = HorizonSeries({1.0}, Unit::kilowatt);
    CHECK(objectives_case_c(s, c).o3 == doctest::Approx(0.0));
    CHECK(objectives_case_c(s, c).o2 == 0.0);

    c = flat_case(2);
    c.non_shiftable = HorizonSeries({1.0, 5.0}, Unit::kilowatt);
    c.desired_demand = HorizonSeries({2.0, 2.0}, Unit::kilowatt);
    CHECK(objectives_case_c(idle(c), c).o1 == doctest::Approx(3.0));

    c.occupancy.nominal = HorizonSeries({0.5, 2.0}, Unit::persons);
    Schedule warm = idle(c);
    warm.setpoints = HorizonSeries({c.desired_temp + 1.0, c.desired_temp + 2.0}, Unit::celsius);
    CHECK(objectives_case_c(warm, c).o2 == doctest::Approx(4.5));
}

TEST_CASE("objectives are non-negative on feasible schedules") {
    Rng rng(31);
    for (int i = 0; i < 50; ++i) {
        const auto c = random_case(rng);
        const auto s = random_schedule(c, rng);
        REQUIRE(check_ac_constraints(s.setpoints, c).feasible);
        const auto o = objectives_case_c(s, c);
        CHECK(o.o1 >= 0.0);
        CHECK(o.o2 >= 0.0);
    }
}

TEST_CASE("robust case b") {
    Rng rng(41);
    SUBCASE("zero budgets equal case a") {
        for (int i = 0; i < 20; ++i) {
            const auto c = random_case(rng);
            const auto rc = robust_cost_case_b(c, 0, 0);
            CHECK(rc.total == cost_case_a(derive_demand(baseline_schedule(c), c).total, c.tariff));
        }
    }
    SUBCASE("full budgets without occupancy coupling cost 1.1x") {
        for (int i = 0; i < 20; ++i) {
            const auto c = random_case(rng, {.occupancy_coupling = false});
            const double a = cost_case_a(derive_demand(baseline_schedule(c), c).total, c.tariff);
            CHECK(robust_cost_case_b(c, 12, 12).total == doctest::Approx(1.1 * a).epsilon(1e-14));
        }
    }
    SUBCASE("purchased power is the binding robust demand") {
        for (int i = 0; i < 20; ++i) {
            const auto c = random_case(rng);
            const double g = rng.uniform(0, 12), go = rng.uniform(0, 12);
            const auto rc = robust_cost_case_b(c, g, go);
            CHECK(cost_case_a(rc.purchased, c.tariff) == doctest::Approx(rc.total).epsilon(1e-12));
            const auto nominal = derive_demand(baseline_schedule(c), c).total;
            for (std::size_t h = 0; h < c.horizon(); ++h) CHECK(rc.purchased[h] >= nominal[h] - 1e-12);
        }
    }
    SUBCASE("matches the vertex maximum of the perturbed bill") {
        // Without AR feedback the bill is linear in the occupancy and demand
        // perturbations, so the worst case is a polytope vertex.
        for (int i = 0; i < 5; ++i) {
            const auto c = random_case(rng, {.horizon = 6, .autoregressive = false});
            const Schedule base = baseline_schedule(c);
            const auto nominal = derive_demand(base, c).total;
            std::vector<std::vector<double>> occ_vertices, dem_vertices;
            for_each_vertex(6, 3, [&](const std::vector<double>& z) { occ_vertices.push_back(z); });
            dem_vertices = occ_vertices;
            double best = -INFINITY;
            for (const auto& zo : occ_vertices) {
                std::vector<double> occ(6);
                for (std::size_t h = 0; h < 6; ++h)
                    occ[h] = c.occupancy.nominal[h] + zo[h] * c.occupancy.deviation[h];
                const auto perturbed = derive_demand(base, c, occ).total;
                for (const auto& zd : dem_vertices) {
                    double bill = 0.0;
                    for (std::size_t h = 0; h < 6; ++h)
                        bill += c.tariff.rate[h] * (perturbed[h] + zd[h] * 0.1 * nominal[h]);
                    best = std::max(best, bill);
                }
            }
            CHECK(std::abs(robust_cost_case_b(c, 3, 3).total - best) < 1e-6);
        }
    }
    CHECK_THROWS_AS(robust_cost_case_b(random_case(rng), 13, 0), ValidationError);
    CHECK_THROWS_AS(robust_cost_case_b(random_case(rng), 0, -1), ValidationError);
}

TEST_CASE("robust case d") {
    Rng rng(51);
    SUBCASE("zero budgets equal case c") {
        for (int i = 0; i < 20; ++i) {
            const auto c = random_case(rng);
            const auto s = random_schedule(c, rng);
            CHECK(objectives_case_d(s, c, 0, 0) == objectives_case_c(s, c));
        }
    }
    SUBCASE("desired setpoints leave no comfort penalty") {
        const auto c = random_case(rng);
        Schedule s = baseline_schedule(c);
        for (double g : {0.0, 3.5, 12.0}) CHECK(objectives_case_d(s, c, g, g).o2 == 0.0);
    }
    SUBCASE("monotone in each budget") {
        for (int i = 0; i < 10; ++i) {
            const auto c = random_case(rng);
            const auto s = random_schedule(c, rng);
            auto prev = objectives_case_d(s, c, 0, 0);
            for (int g = 1; g <= 12; ++g) {
                const auto o = objectives_case_d(s, c, g, g);
                CHECK(o.o1 >= prev.o1);
                CHECK(o.o2 >= prev.o2);
                CHECK(o.o3 >= prev.o3);
                prev = o;
            }
        }
    }
    SUBCASE("matches the vertex maximum of the perturbed objectives") {
        // Demand at or above target keeps the floored demand objective linear.
        for (int i = 0; i < 5; ++i) {
            const auto c = random_case(rng, {.horizon = 6, .desired_demand_scale = 0.2});
            const auto s = random_schedule(c, rng);
            const auto p = derive_demand(s, c).total;
            for (std::size_t h = 0; h < 6; ++h) REQUIRE(p[h] >= c.desired_demand[h]);
            std::array<double, 3> best{-INFINITY, -INFINITY, -INFINITY};
            for_each_vertex(6, 2, [&](const std::vector<double>& z) {
                double o1 = 0, o2 = 0, o3 = 0;
                for (std::size_t h = 0; h < 6; ++h) {
                    const double ph = p[h] * (1.0 + 0.1 * z[h]);
                    const double occ = c.occupancy.nominal[h] + z[h] * c.occupancy.deviation[h];
                    o1 += std::max(ph - c.desired_demand[h], 0.0);
                    o2 += (s.setpoints[h] - c.desired_temp) * occ;
                    o3 += c.tariff.rate[h] * ph + c.tariff.penalty_reward * (ph - c.desired_demand[h]);
                }
                best = {std::max(best[0], o1), std::max(best[1], o2), std::max(best[2], o3)};
            });
            const auto o = objectives_case_d(s, c, 2, 2);
            CHECK(std::abs(o.o1 - best[0]) < 1e-6);
            CHECK(std::abs(o.o2 - best[1]) < 1e-6);
            CHECK(std::abs(o.o3 - best[2]) < 1e-6);
        }
    }
}

TEST_CASE("shift constraints") {
    const std::vector<ApplianceSpec> one{{"a", 1.0, 2, 2, 3, 2}};
    CHECK(check_shift_constraints({{0, 1, 1, 0}}, one).feasible);

    const std::vector<ApplianceSpec> wide{{"a", 1.0, 2, 1, 4, 1}};
    const auto split = check_shift_constraints({{1, 0, 1, 0}}, wide);
    CHECK_FALSE(split.feasible);
    REQUIRE(!split.violations.empty());
    CHECK(split.violations[0].constraint == "contiguity");

    const auto short_run = check_shift_constraints({{0, 1, 0, 0}}, wide);
    CHECK_FALSE(short_run.feasible);
    bool saw_len = false;
    for (const auto& v : short_run.violations) saw_len |= v.constraint == "cycle_length";
    CHECK(saw_len);

    // all 16 vectors: exactly the 3 contiguous placements are feasible
    int feasible = 0;
    for (int bits = 0; bits < 16; ++bits) {
        std::vector<std::uint8_t> row(4);
        for (int h = 0; h < 4; ++h) row[h] = (bits >> h) & 1;
        feasible += check_shift_constraints({row}, wide).feasible;
    }
    CHECK(feasible == 3);

    const auto out = check_shift_constraints({{1, 1, 0, 0}}, one);
    CHECK_FALSE(out.feasible);
    CHECK(out.violations[0].constraint == "before_window");
    CHECK(check_shift_constraints({{0, 0, 1, 1}}, one).violations[0].constraint == "after_window");
    CHECK(check_shift_constraints({{0, 2, 1, 0}}, one).violations[0].constraint == "binary");
}

TEST_CASE("shift constraints agree with enumeration on small instances") {
    Rng rng(61);
    for (int trial = 0; trial < 40; ++trial) {
        const int apps = static_cast<int>(rng.uniform_int(1, 3));
        const auto h = static_cast<std::size_t>(12 / apps);
        std::vector<ApplianceSpec> specs;
        for (int a = 0; a < apps; ++a) {
            ApplianceSpec s;
            s.cycle_len = static_cast<int>(rng.uniform_int(1, static_cast<long>(h)));
            s.window_start = static_cast<int>(rng.uniform_int(1, static_cast<long>(h) - s.cycle_len + 1));
            s.window_end = static_cast<int>(rng.uniform_int(s.window_start + s.cycle_len - 1, static_cast<long>(h)));
            s.preferred_start = s.window_start;
            specs.push_back(s);
        }
        const std::size_t bits = h * static_cast<std::size_t>(apps);
        for (std::uint32_t m = 0; m < (1u << bits); ++m) {
            std::vector<std::vector<std::uint8_t>> on(apps, std::vector<std::uint8_t>(h));
            bool expect = true;
            for (int a = 0; a < apps; ++a) {
                for (std::size_t k = 0; k < h; ++k) on[a][k] = (m >> (a * h + k)) & 1u;
                expect = expect && testing::shift_row_feasible(on[a], specs[a]);
            }
            REQUIRE(check_shift_constraints(on, specs).feasible == expect);
        }
    }
}

TEST_CASE("AC constraints") {
    CaseConfig c = flat_case(12);
    std::vector<double> sp(12, c.desired_temp);
    CHECK(check_ac_constraints(HorizonSeries(sp, Unit::celsius), c).feasible);

    auto one = sp;
    one[5] += 6.0;
    auto v = check_ac_constraints(HorizonSeries(one, Unit::celsius), c);
    CHECK_FALSE(v.feasible);
    CHECK(v.violations[0].constraint == "per_hour_deviation");
    CHECK(v.violations[0].hour == 6);

    auto edge = sp;
    edge[0] = 28.55;
    CHECK(check_ac_constraints(HorizonSeries(edge, Unit::celsius), c).feasible);

    auto four = sp;
    for (int h = 0; h < 4; ++h) four[h] += 5.0;
    v = check_ac_constraints(HorizonSeries(four, Unit::celsius), c);
    CHECK_FALSE(v.feasible);
    CHECK(v.violations.back().constraint == "total_deviation");

    auto cold = sp;
    cold[2] -= 0.5;
    v = check_ac_constraints(HorizonSeries(cold, Unit::celsius), c);
    CHECK_FALSE(v.feasible);
    CHECK(v.violations[0].constraint == "overcooling");
}

TEST_CASE("case configuration validation names the field") {
    CaseConfig c = flat_case(4);
    c.misc = HorizonSeries::constant(3, 0.0, Unit::kilowatt);
    try {
        c.validate();
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("misc") != std::string::npos);
    }
}

#include <doctest.h>

#include <numeric>

#include "fixtures.hpp"
#include "hems/error.hpp"
#include "hems/robust.hpp"

using namespace hems;
using testing::lp_penalty;
using testing::vertex_penalty;

TEST_CASE("robust penalty small cases") {
    const std::vector<double> d{1, 2, 3};
    CHECK(robust_penalty(d, 0) == 0.0);
    CHECK(robust_penalty(d, 3) == doctest::Approx(6));
    CHECK(robust_penalty(d, 1) == doctest::Approx(3));
    CHECK(robust_penalty(d, 1.5) == doctest::Approx(4));
    CHECK(robust_penalty(std::vector<double>{-1, 2, -3}, 2) == doctest::Approx(5));
    CHECK(robust_penalty(std::vector<double>{}, 0) == 0.0);

    CHECK_THROWS_AS(robust_penalty(d, -0.5), ValidationError);
    CHECK_THROWS_AS(robust_penalty(d, 3.01), ValidationError);
    CHECK_THROWS_AS(robust_penalty(std::vector<double>{1, std::nan("")}, 1), ValidationError);
}

TEST_CASE("explicit split") {
    auto s = robust_penalty_dual(std::vector<double>{5}, 1);
    CHECK(s.z == std::vector<double>{0});
    CHECK(s.w == std::vector<double>{5});
    CHECK(s.value == doctest::Approx(5));

    CHECK(robust_penalty_dual(std::vector<double>{0, 0}, 0).value == 0.0);
    CHECK(robust_penalty_dual(std::vector<double>{0, 0}, 1.3).value == 0.0);
    CHECK(robust_penalty_dual(std::vector<double>{0, 0}, 2).value == 0.0);

    Rng rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const auto d = testing::uniform_vector(rng, 20, -4.0, 4.0);
        const double g = rng.uniform(0.0, 20.0);
        const auto split = robust_penalty_dual(d, g);
        double zs = 0.0, wm = 0.0;
        for (std::size_t l = 0; l < d.size(); ++l) {
            CHECK(split.z[l] + split.w[l] == d[l]);
            zs += std::abs(split.z[l]);
            wm = std::max(wm, std::abs(split.w[l]));
        }
        CHECK(split.value == doctest::Approx(zs + g * wm).epsilon(1e-12));
        CHECK(std::abs(split.value - robust_penalty(d, g)) < 1e-9);
    }
}

TEST_CASE("closed form equals the split LP and the polytope vertices") {
    Rng rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        const auto n = static_cast<std::size_t>(rng.uniform_int(1, 10));
        const auto d = testing::uniform_vector(rng, n, -3.0, 3.0);
        const double g = trial % 3 == 0 ? static_cast<double>(rng.uniform_int(0, static_cast<long>(n)))
                                        : rng.uniform(0.0, static_cast<double>(n));
        const double p = robust_penalty(d, g);
        CHECK(std::abs(p - lp_penalty(d, g)) < 1e-8);
        CHECK(std::abs(p - vertex_penalty(d, g)) < 1e-8);
    }
}

TEST_CASE("penalty is monotone, concave in the budget and positively homogeneous") {
    Rng rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const auto d = testing::uniform_vector(rng, 12, -2.0, 2.0);
        double prev = 0.0, prev_step = INFINITY;
        for (int i = 1; i <= 48; ++i) {
            const double v = robust_penalty(d, i * 0.25);
            const double step = v - prev;
            CHECK(step >= -1e-15);
            CHECK(step <= prev_step + 1e-12);
            prev = v;
            prev_step = step;
        }
        double total = 0.0;
        for (double x : d) total += std::abs(x);
        CHECK(robust_penalty(d, 12) == doctest::Approx(total).epsilon(1e-14));

        const double a = rng.uniform(0.0, 5.0);
        std::vector<double> scaled;
        for (double x : d) scaled.push_back(a * x);
        const double g = rng.uniform(0.0, 12.0);
        CHECK(robust_penalty(scaled, g) == doctest::Approx(a * robust_penalty(d, g)).epsilon(1e-12));
    }
}

TEST_CASE("worst-case perturbation attains the penalty") {
    Rng rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        const auto d = testing::uniform_vector(rng, 9, -3.0, 3.0);
        const double g = rng.uniform(0.0, 9.0);
        const auto z = worst_case_perturbation(d, g);
        double dot = 0.0, l1 = 0.0;
        for (std::size_t l = 0; l < d.size(); ++l) {
            CHECK(std::abs(z[l]) <= 1.0);
            dot += d[l] * z[l];
            l1 += std::abs(z[l]);
        }
        CHECK(l1 <= g + 1e-12);
        CHECK(dot == doctest::Approx(robust_penalty(d, g)).epsilon(1e-12));
    }
    // ties go to the lower index
    CHECK(worst_case_perturbation(std::vector<double>{1, -1, 1}, 1) == std::vector<double>{1, 0, 0});
}

TEST_CASE("absolute value linearization") {
    CHECK(linearize_abs(0.0) == 0.0);
    CHECK(linearize_abs(-3.2) == 3.2);
    Rng rng(10);
    for (int i = 0; i < 100; ++i) {
        const double x = rng.uniform(-10, 10);
        const double b = linearize_abs(x);
        CHECK(-b <= x);
        CHECK(x <= b);
        // any smaller bound is infeasible
        const double smaller = std::nextafter(b, 0.0);
        if (b > 0.0) CHECK(!(-smaller <= x && x <= smaller));
    }
}

TEST_CASE("worst-case perturbation of an uncertain parameter") {
    auto p = UncertainParam::with_fraction(HorizonSeries({1, 2}, Unit::kilowatt), 0.1);
    const auto w = perturb_worst_case(p);
    CHECK(w[0] == doctest::Approx(1.1));
    CHECK(w[1] == doctest::Approx(2.2));
    p = UncertainParam::with_fraction(HorizonSeries({1, 2}, Unit::kilowatt), 0.0);
    CHECK(perturb_worst_case(p) == p.nominal);

    // full budget penalty of a linear cost = cost(worst case) - cost(nominal)
    Rng rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        const auto nominal = testing::uniform_vector(rng, 12, 0.0, 3.0);
        const auto c = testing::uniform_vector(rng, 12, 0.05, 0.4);
        auto q = UncertainParam::with_fraction(HorizonSeries(nominal, Unit::kilowatt), 0.1, 12);
        std::vector<double> dev;
        for (std::size_t h = 0; h < 12; ++h) dev.push_back(c[h] * q.deviation[h]);
        const auto worst = perturb_worst_case(q);
        double nom_cost = 0.0, worst_cost = 0.0;
        for (std::size_t h = 0; h < 12; ++h) {
            nom_cost += c[h] * nominal[h];
            worst_cost += c[h] * worst[h];
        }
        CHECK(std::abs(robust_penalty(dev, 12) - (worst_cost - nom_cost)) < 1e-12);
    }
}

TEST_CASE("uncertain parameter validation") {
    auto p = UncertainParam::with_fraction(HorizonSeries({1, 2}, Unit::kilowatt), 0.1, 2);
    CHECK_NOTHROW(p.validate());
    p.budget = 2.5;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p.budget = 1;
    p.deviation = {0.1};
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p.deviation = {0.1, -0.1};
    CHECK_THROWS_AS(p.validate(), ValidationError);
}

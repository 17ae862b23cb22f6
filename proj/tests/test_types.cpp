#include <doctest.h>

#include <cmath>
#include <limits>

#include "hems/error.hpp"
#include "hems/load.hpp"
#include "hems/types.hpp"

using namespace hems;

TEST_CASE("horizon series enforces finiteness and sign by unit") {
    CHECK_NOTHROW(HorizonSeries({0.0, 1.5}, Unit::kilowatt));
    CHECK_THROWS_AS(HorizonSeries({-0.1}, Unit::kilowatt), DomainError);
    CHECK_THROWS_AS(HorizonSeries({-1.0}, Unit::persons), DomainError);
    CHECK_NOTHROW(HorizonSeries({-5.0}, Unit::celsius));
    CHECK_THROWS_AS(HorizonSeries({std::nan("")}, Unit::celsius), DomainError);
    CHECK_THROWS_AS(HorizonSeries({std::numeric_limits<double>::infinity()}, Unit::dollars_per_kwh), DomainError);

    const auto s = HorizonSeries::constant(kDefaultHorizon, 2.0, Unit::kilowatt);
    CHECK(s.horizon() == 12);
    CHECK(s.sum() == doctest::Approx(24.0));
    CHECK(s.unit() == Unit::kilowatt);
}

TEST_CASE("appliance windows must hold the cycle and fit the horizon") {
    ApplianceSpec a{"washer", 1.5, 2, 2, 3, 2};
    CHECK_NOTHROW(a.validate(4));
    CHECK(a.latest_start() == 2);

    auto bad = a;
    bad.cycle_len = 3;
    CHECK_THROWS_AS(bad.validate(4), ValidationError);
    bad = a;
    bad.window_end = 5;
    CHECK_THROWS_AS(bad.validate(4), ValidationError);
    bad = a;
    bad.window_start = 0;
    CHECK_THROWS_AS(bad.validate(4), ValidationError);
    bad = a;
    bad.preferred_start = 3;  // block would run past the window
    CHECK_THROWS_AS(bad.validate(4), ValidationError);
    bad = a;
    bad.power_kw = -1.0;
    CHECK_THROWS_AS(bad.validate(4), ValidationError);
}

TEST_CASE("tariff rates strictly positive, penalty non-negative") {
    Tariff t{HorizonSeries({0.1, 0.2}, Unit::dollars_per_kwh), 0.0};
    CHECK_NOTHROW(t.validate());
    t.penalty_reward = -0.01;
    CHECK_THROWS_AS(t.validate(), ValidationError);
    t = Tariff{HorizonSeries({0.1, 0.0}, Unit::dollars_per_kwh), 0.0};
    CHECK_THROWS_AS(t.validate(), ValidationError);
}

TEST_CASE("load decomposition") {
    CHECK(decompose_load(0, 0, 0, 0).total == 0.0);
    const auto d = decompose_load(0.5, 1.0, 0.2, 1.3);
    CHECK(d.total == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(d.non_ac == doctest::Approx(1.7).epsilon(1e-15));
    CHECK(d.total - 1.3 == doctest::Approx(d.non_ac));
    CHECK_THROWS_AS(decompose_load(-0.1, 0, 0, 0), DomainError);
    CHECK_THROWS_AS(decompose_load(0, 0, 0, -1e-9), DomainError);

    // order of the three non-AC parts does not matter
    CHECK(decompose_load(0.2, 0.5, 1.0, 1.3).total == doctest::Approx(d.total).epsilon(1e-15));
    CHECK(decompose_load(1.0, 0.2, 0.5, 1.3).non_ac == doctest::Approx(d.non_ac).epsilon(1e-15));
}

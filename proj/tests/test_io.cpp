#include <doctest.h>

#include <filesystem>
#include <functional>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "hems/config.hpp"
#include "hems/csv.hpp"
#include "hems/error.hpp"
#include "hems/scenario.hpp"
#include "hems/synth.hpp"

using namespace hems;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
    const auto dir = fs::temp_directory_path() / "hems_io_tests";
    fs::create_directories(dir);
    return dir;
}

void put(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

template <class E>
std::string message_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const E& e) {
        return e.what();
    }
    return "<no error>";
}

std::string hourly_rows(int n, int start_hour = 0) {
    std::ostringstream os;
    os << "timestamp,demand_kw,occupancy\n";
    for (int i = 0; i < n; ++i)
        os << format_hour_stamp(parse_hour_stamp("2024-07-01T00:00") + start_hour + i) << "," << 1.0 + 0.1 * i << ","
           << i % 4 << "\n";
    return os.str();
}

}  // namespace

TEST_CASE("number formatting round-trips") {
    Rng rng(101);
    for (int i = 0; i < 1000; ++i) {
        const double v = rng.normal(0, 1e3) * std::pow(10.0, rng.uniform_int(-8, 8));
        CHECK(parse_double(format_double(v)) == v);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(2.0) == "2");
    CHECK(parse_double(" 1.5 ") == 1.5);
    CHECK_THROWS_AS(parse_double("1.5x"), ValidationError);
    CHECK_THROWS_AS(parse_double(""), ValidationError);
}

TEST_CASE("hour stamps") {
    CHECK(parse_hour_stamp("1970-01-01T00:00") == 0);
    CHECK(parse_hour_stamp("1970-01-02 03:00:00") == 27);
    CHECK(format_hour_stamp(parse_hour_stamp("2024-07-01T13:00")) == "2024-07-01T13:00:00");
    CHECK(parse_hour_stamp("2024-03-01T00:00") - parse_hour_stamp("2024-02-28T00:00") == 48);  // leap year
    CHECK_THROWS_AS(parse_hour_stamp("2024-07-01T13:30"), ValidationError);
    CHECK_THROWS_AS(parse_hour_stamp("2024-13-01T00:00"), ValidationError);
    CHECK_THROWS_AS(parse_hour_stamp("yesterday"), ValidationError);
}

TEST_CASE("time series CSV") {
    const auto dir = scratch_dir();
    const std::vector<std::string> cols{"demand_kw", "occupancy"};

    put(dir / "ok.csv", hourly_rows(12));
    auto t = load_timeseries_csv(dir / "ok.csv", cols);
    CHECK(t.size() == 12);
    CHECK(t.column("demand_kw")[11] == 1.0 + 0.1 * 11);
    CHECK(t.gaps.empty());
    CHECK_NOTHROW(t.require_contiguous());

    write_timeseries_csv(dir / "copy.csv", t);
    const auto back = load_timeseries_csv(dir / "copy.csv", cols);
    CHECK(back.columns == t.columns);
    CHECK(back.timestamps == t.timestamps);
    write_timeseries_csv(dir / "copy2.csv", back);
    CHECK(slurp(dir / "copy.csv") == slurp(dir / "copy2.csv"));

    std::string dup = hourly_rows(5);
    dup += format_hour_stamp(parse_hour_stamp("2024-07-01T04:00")) + ",2,1\n";
    put(dir / "dup.csv", dup);
    const auto msg = message_of<ParseError>([&] { load_timeseries_csv(dir / "dup.csv", cols); });
    CHECK(msg.find("row 6") != std::string::npos);

    std::string gap = hourly_rows(3);
    gap += format_hour_stamp(parse_hour_stamp("2024-07-01T06:00")) + ",2,1\n";
    put(dir / "gap.csv", gap);
    t = load_timeseries_csv(dir / "gap.csv", cols);
    REQUIRE(t.gaps.size() == 1);
    CHECK(t.gaps[0].row == 4);
    CHECK(t.gaps[0].missing_hours == 3);
    CHECK_THROWS_AS(t.require_contiguous(), InsufficientDataError);

    put(dir / "hdr.csv", "timestamp,occupancy,demand_kw\n2024-07-01T00:00,1,1\n");
    CHECK_THROWS_AS(load_timeseries_csv(dir / "hdr.csv", cols), ValidationError);
    put(dir / "ragged.csv", "timestamp,demand_kw,occupancy\n2024-07-01T00:00,1\n");
    try {
        load_timeseries_csv(dir / "ragged.csv", cols);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    put(dir / "junk.csv", "timestamp,demand_kw,occupancy\n2024-07-01T00:00,1,abc\n");
    CHECK_THROWS_AS(load_timeseries_csv(dir / "junk.csv", cols), ValidationError);
    CHECK_THROWS_AS(load_timeseries_csv(dir / "absent.csv", cols), PathError);
}

TEST_CASE("config defaults and validation") {
    const RunConfig minimal = parse_config("{}");
    CHECK(minimal.horizon == 12);
    CHECK(minimal.uncertainty.demand_deviation == 0.1);
    CHECK(minimal.uncertainty.occupancy_deviation == 0.1);
    CHECK(minimal.uncertainty.budgets == default_budgets(12));
    CHECK(minimal.desired_temp == 23.33);
    CHECK(minimal.dev_cap == 5.22);
    CHECK(minimal.total_dev_cap == 19.44);

    auto msg = message_of<ValidationError>([] { parse_config(R"({"horizon": 0})"); });
    CHECK(msg.find("horizon") != std::string::npos);

    msg = message_of<ValidationError>([] { parse_config(R"({"tariff": {"rate": [0.1, 0.2]}})"); });
    CHECK(msg.find("tariff.rate") != std::string::npos);

    msg = message_of<ValidationError>([] { parse_config(R"({"comfort": {"desired": 24}})"); });
    CHECK(msg.find("comfort.desired") != std::string::npos);

    msg = message_of<ValidationError>([] { parse_config(R"({"ga": {"pop_size": 5}})"); });
    CHECK(msg.rfind("ga", 0) == 0);

    try {
        parse_config("{\n  \"horizon\": 12,\n  oops\n}");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }

    try {
        parse_config(R"({"tariff": {"file": "no_such_tariff.csv"}})", scratch_dir());
        FAIL("expected a path error");
    } catch (const PathError& e) {
        CHECK(e.path().find("no_such_tariff.csv") != std::string::npos);
        CHECK(std::string(e.what()).find("no_such_tariff.csv") != std::string::npos);
    }
    CHECK_THROWS_AS(load_config(scratch_dir() / "nope.json"), PathError);
    CHECK_THROWS_AS(parse_config("{}").case_config(), ValidationError);
}

TEST_CASE("tariff files and the bundled fixture") {
    const auto dir = scratch_dir();
    std::string csv = "hour,rate\n";
    for (int h = 1; h <= 12; ++h) csv += std::to_string(h) + "," + format_double(0.1 + 0.01 * h) + "\n";
    put(dir / "tariff.csv", csv);
    const auto cfg = parse_config(R"({"tariff": {"file": "tariff.csv"}})", dir);
    REQUIRE(cfg.tariff_rate.size() == 12);
    CHECK(cfg.tariff_rate[11] == 0.1 + 0.01 * 12);

    const RunConfig fixture = load_config(testing::data_path("summer_fixture.json"));
    const CaseConfig c = fixture.case_config();
    CHECK(c.horizon() == 12);
    CHECK(c.appliances.size() == 2);
    CHECK(c.first_clock_hour == fixture.first_clock_hour);

    // the echoed configuration parses back to the same effective settings
    const RunConfig echoed = parse_config(fixture.to_json(), fixture.base_dir);
    CHECK(echoed.to_json() == fixture.to_json());
    CHECK(echoed.case_config().arx == c.arx);
}

TEST_CASE("synthetic data") {
    const auto a = generate_synthetic(7);
    const auto b = generate_synthetic(7);
    const auto other = generate_synthetic(8);
    CHECK(a.history.columns == b.history.columns);
    CHECK(a.history.columns != other.history.columns);
    CHECK(a.history.size() == 56 * 24);

    const auto dir = scratch_dir();
    write_synthetic(dir / "s1", a);
    write_synthetic(dir / "s2", b);
    for (const char* f : {"history.csv", "weather.csv", "ac_log.csv"})
        CHECK(slurp(dir / "s1" / f) == slurp(dir / "s2" / f));

    const auto& occ = a.history.column("occupancy");
    const auto& dem = a.history.column("demand_kw");
    int present = 0;
    for (double o : occ) {
        CHECK(o == std::round(o));
        CHECK(o >= 0);
        CHECK(o <= kSynthHouseholdSize);
        present += o > 0;
    }
    CHECK(present >= 0.8 * static_cast<double>(occ.size()));

    const double n = static_cast<double>(occ.size());
    double mo = 0, md = 0;
    for (std::size_t i = 0; i < occ.size(); ++i) {
        mo += occ[i] / n;
        md += dem[i] / n;
    }
    double sod = 0, soo = 0, sdd = 0;
    for (std::size_t i = 0; i < occ.size(); ++i) {
        sod += (occ[i] - mo) * (dem[i] - md);
        soo += (occ[i] - mo) * (occ[i] - mo);
        sdd += (dem[i] - md) * (dem[i] - md);
    }
    CHECK(sod / std::sqrt(soo * sdd) >= 0.6);

    // afternoon temperature peak on every day
    const auto& temp = a.weather.column("outdoor_temp_c");
    for (std::size_t day = 0; day < 56; ++day) {
        std::size_t best = 0;
        for (std::size_t h = 1; h < 24; ++h)
            if (temp[day * 24 + h] > temp[day * 24 + best]) best = h;
        CHECK(best >= 12);
        CHECK(best <= 18);
    }

    const auto fit = fit_arx_from_log(dir / "s1" / "ac_log.csv", {1});
    CHECK(std::abs(fit.alpha[0] - a.true_arx.alpha[0]) < 0.05);
    for (std::size_t m = 0; m < kExogenousCount; ++m) CHECK(std::abs(fit.beta[0][m] - a.true_arx.beta[0][m]) < 0.05);
}

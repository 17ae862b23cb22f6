#include "hems/synth.hpp"

#include <algorithm>
#include <cmath>

#include "hems/error.hpp"
#include "hems/rng.hpp"

namespace hems {

namespace {

// Start of the generated period: 2024-07-01T00:00.
constexpr std::int64_t kStartHour = 19905LL * 24;

int draw_occupancy(Rng& rng, int hour_of_day) {
    const bool workday_hours = hour_of_day >= 9 && hour_of_day <= 16;
    const double p_empty = workday_hours ? 0.30 : 0.02;
    if (rng.bernoulli(p_empty)) return 0;
    const double u = rng.uniform();
    if (workday_hours) return u < 0.40 ? 1 : (u < 0.75 ? 2 : 3);
    return u < 0.10 ? 2 : (u < 0.85 ? 3 : 4);
}

}  // namespace

SyntheticData generate_synthetic(std::uint64_t seed, SynthProfile profile, int days) {
    if (profile != SynthProfile::summer_weekday) throw ValidationError("synth: unknown profile");
    if (days < 1) throw ValidationError("synth: days must be >= 1");
    Rng rng(seed);
    const auto n = static_cast<std::size_t>(days) * 24;

    SyntheticData d;
    d.true_arx = ArxModel::zeros({1});
    d.true_arx.alpha[0] = -0.55;
    d.true_arx.beta_of(0, Exogenous::outdoor_temp) = 0.06;
    d.true_arx.beta_of(0, Exogenous::occupancy) = 0.5;
    d.true_arx.beta_of(0, Exogenous::setpoint) = -0.05;

    std::vector<double> occ(n), occ_norm(n), temp(n), setp(n), ac(n), demand(n);
    double prev_ac = 0.8;
    for (std::size_t t = 0; t < n; ++t) {
        const int hod = static_cast<int>(t % 24);
        occ[t] = draw_occupancy(rng, hod);
        occ_norm[t] = occ[t] / kSynthHouseholdSize;
        temp[t] = 27.0 + 7.0 * std::sin(2.0 * M_PI * (hod - 9) / 24.0) + rng.normal(0.0, 0.8);
        setp[t] = 23.33 + 0.5 * static_cast<double>(rng.uniform_int(0, 4));
        const auto& a = d.true_arx;
        double p = -a.alpha[0] * prev_ac + a.beta_of(0, Exogenous::outdoor_temp) * temp[t] +
                   a.beta_of(0, Exogenous::occupancy) * occ_norm[t] + a.beta_of(0, Exogenous::setpoint) * setp[t] +
                   rng.normal(0.0, 0.05);
        ac[t] = std::max(0.0, p);
        prev_ac = ac[t];
        demand[t] = std::max(0.05, 0.25 + 0.55 * occ[t] + 0.5 * ac[t] + rng.normal(0.0, 0.15));
    }

    std::vector<std::string> stamps;
    for (std::size_t t = 0; t < n; ++t) stamps.push_back(format_hour_stamp(kStartHour + static_cast<std::int64_t>(t)));

    d.history = {stamps, {"demand_kw", "occupancy"}, {demand, occ}, {}};
    d.weather = {stamps, {"outdoor_temp_c"}, {temp}, {}};
    d.ac_log = {stamps, {"ac_kw", "outdoor_temp_c", "occupancy", "setpoint_c"}, {ac, temp, occ_norm, setp}, {}};
    return d;
}

void write_synthetic(const std::filesystem::path& dir, const SyntheticData& data) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw PathError("cannot create '" + dir.string() + "': " + ec.message(), dir.string());
    write_timeseries_csv(dir / "history.csv", data.history);
    write_timeseries_csv(dir / "weather.csv", data.weather);
    write_timeseries_csv(dir / "ac_log.csv", data.ac_log);
}

}  // namespace hems

// Shared builders and brute-force oracles for the unit and acceptance tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "hems/config.hpp"
#include "hems/moga.hpp"
#include "hems/objectives.hpp"
#include "hems/rng.hpp"

namespace hems::testing {

inline std::string data_path(const std::string& name) { return std::string(HEMS_DATA_DIR) + "/" + name; }

inline CaseConfig bundled_case() { return load_config(data_path("summer_fixture.json")).case_config(); }

inline std::vector<double> uniform_vector(Rng& rng, std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(lo, hi);
    return v;
}

struct RandomCaseOptions {
    std::size_t horizon = 12;
    int appliances = 2;
    bool occupancy_coupling = true;  // beta_occ != 0
    bool autoregressive = true;      // alpha != 0
    double desired_demand_scale = 1.0;
};

/// Random but well-conditioned case: AC load stays positive, so the ARX
/// clamp never binds and every coupling is linear.
inline CaseConfig random_case(Rng& rng, const RandomCaseOptions& o = {}) {
    const std::size_t h = o.horizon;
    CaseConfig c;
    c.tariff.rate = HorizonSeries(uniform_vector(rng, h, 0.05, 0.35), Unit::dollars_per_kwh);
    c.tariff.penalty_reward = rng.uniform(0.0, 0.1);
    for (int a = 0; a < o.appliances; ++a) {
        ApplianceSpec s;
        s.name = "app" + std::to_string(a);
        s.power_kw = rng.uniform(0.3, 2.0);
        s.cycle_len = static_cast<int>(rng.uniform_int(1, std::min<long>(3, static_cast<long>(h))));
        s.window_start = static_cast<int>(rng.uniform_int(1, static_cast<long>(h) - s.cycle_len + 1));
        s.window_end = static_cast<int>(rng.uniform_int(s.window_start + s.cycle_len - 1, static_cast<long>(h)));
        s.preferred_start = static_cast<int>(rng.uniform_int(s.window_start, s.latest_start()));
        c.appliances.push_back(s);
    }
    c.non_shiftable = HorizonSeries(uniform_vector(rng, h, 0.2, 0.8), Unit::kilowatt);
    c.misc = HorizonSeries(uniform_vector(rng, h, 0.1, 0.5), Unit::kilowatt);
    c.desired_demand =
        HorizonSeries(uniform_vector(rng, h, 1.5 * o.desired_demand_scale, 3.5 * o.desired_demand_scale), Unit::kilowatt);
    c.outdoor_temp = HorizonSeries(uniform_vector(rng, h, 26.0, 36.0), Unit::celsius);
    c.occupancy = UncertainParam::with_fraction(HorizonSeries(uniform_vector(rng, h, 0.0, 1.0), Unit::persons), 0.1);
    c.demand_deviation.assign(h, 0.1);
    c.arx = ArxModel::zeros({1});
    c.arx.alpha[0] = o.autoregressive ? -rng.uniform(0.2, 0.6) : 0.0;
    c.arx.beta_of(0, Exogenous::outdoor_temp) = rng.uniform(0.08, 0.12);
    c.arx.beta_of(0, Exogenous::occupancy) = o.occupancy_coupling ? rng.uniform(0.2, 0.8) : 0.0;
    c.arx.beta_of(0, Exogenous::setpoint) = -rng.uniform(0.02, 0.06);
    c.ac_warmup = {rng.uniform(0.5, 2.0)};
    return c;
}

inline Chromosome random_chromosome(const CaseConfig& c, Rng& rng) {
    Chromosome ch;
    for (const auto& a : c.appliances)
        ch.starts.push_back(static_cast<int>(rng.uniform_int(a.window_start, a.latest_start())));
    for (std::size_t h = 0; h < c.horizon(); ++h)
        ch.setpoints.push_back(c.desired_temp + rng.uniform(0.0, c.dev_cap));
    return ch;
}

inline Schedule random_schedule(const CaseConfig& c, Rng& rng) { return decode(random_chromosome(c, rng), c); }

// ---- robust penalty oracles -------------------------------------------------

/// LP value of min_{z+w=d} sum|z| + g max|w|. For a fixed t = max|w| the best
/// z is the overflow beyond t, and the piecewise-linear objective in t has its
/// minimum at t = 0 or at one of the magnitudes.
inline double lp_penalty(const std::vector<double>& d, double g) {
    std::vector<double> cand{0.0};
    for (double x : d) cand.push_back(std::abs(x));
    double best = INFINITY;
    for (double t : cand) {
        double v = g * t;
        for (double x : d) v += std::max(std::abs(x) - t, 0.0);
        best = std::min(best, v);
    }
    return best;
}

/// Calls f(zeta) for every extreme point of {|zeta_l| <= 1, sum|zeta_l| <= g}:
/// floor(g) entries at +-1 plus, for fractional g, one more at +-(g - floor(g)).
inline void for_each_vertex(std::size_t n, double g, const std::function<void(const std::vector<double>&)>& f) {
    const auto whole = static_cast<std::size_t>(std::min<double>(std::floor(g), static_cast<double>(n)));
    const double frac = g - std::floor(g);
    std::vector<double> z(n, 0.0);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t from, std::size_t left) {
        if (left == 0) {
            if (frac > 0.0 && whole < n) {
                for (std::size_t j = 0; j < n; ++j) {
                    if (z[j] != 0.0) continue;
                    for (double s : {frac, -frac}) {
                        z[j] = s;
                        f(z);
                    }
                    z[j] = 0.0;
                }
            } else {
                f(z);
            }
            return;
        }
        for (std::size_t i = from; i + left <= n; ++i) {
            for (double s : {1.0, -1.0}) {
                z[i] = s;
                rec(i + 1, left - 1);
            }
            z[i] = 0.0;
        }
    };
    rec(0, whole);
}

inline double vertex_penalty(const std::vector<double>& d, double g) {
    double best = 0.0;
    for_each_vertex(d.size(), g, [&](const std::vector<double>& z) {
        double v = 0.0;
        for (std::size_t l = 0; l < d.size(); ++l) v += d[l] * z[l];
        best = std::max(best, v);
    });
    return best;
}

// ---- shift-constraint oracle -------------------------------------------------

/// Feasible iff exactly one contiguous run of cycle_len ones lying inside the window.
inline bool shift_row_feasible(const std::vector<std::uint8_t>& row, const ApplianceSpec& a) {
    int first = -1, last = -1, count = 0;
    for (std::size_t h = 0; h < row.size(); ++h)
        if (row[h]) {
            if (first < 0) first = static_cast<int>(h) + 1;
            last = static_cast<int>(h) + 1;
            ++count;
        }
    if (count != a.cycle_len) return false;
    if (count == 0) return true;
    return last - first + 1 == count && first >= a.window_start && last <= a.window_end;
}

inline bool nearly(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

}  // namespace hems::testing

// Small enumerable instance for checking the GA against an exhaustive front.
#pragma once

#include <array>
#include <set>
#include <vector>

#include "hems/moga.hpp"

namespace hems::testing {

inline CaseConfig toy_case() {
    CaseConfig c;
    c.tariff.rate = HorizonSeries({0.10, 0.30, 0.25, 0.08}, Unit::dollars_per_kwh);
    c.tariff.penalty_reward = 0.05;
    c.appliances = {{"dishwasher", 1.0, 2, 1, 4, 1}, {"kettle", 0.8, 1, 2, 4, 2}};
    c.non_shiftable = HorizonSeries({0.4, 0.5, 0.5, 0.4}, Unit::kilowatt);
    c.misc = HorizonSeries({0.2, 0.2, 0.2, 0.2}, Unit::kilowatt);
    c.desired_demand = HorizonSeries({2.0, 1.6, 1.6, 2.2}, Unit::kilowatt);
    c.outdoor_temp = HorizonSeries({31, 34, 35, 32}, Unit::celsius);
    c.occupancy = UncertainParam::with_fraction(HorizonSeries({0.0, 1.0, 0.5, 0.0}, Unit::persons), 0.1);
    c.demand_deviation.assign(4, 0.1);
    c.arx = ArxModel::zeros({1});
    c.arx.alpha[0] = -0.4;
    c.arx.beta[0] = {0.06, 0.5, -0.05};
    c.ac_warmup = {1.2};
    return c;
}

inline const std::vector<double>& toy_levels() {
    static const std::vector<double> levels{0.0, 1.0, 2.0};
    return levels;
}

inline GaParams toy_params(std::uint64_t seed) {
    GaParams p;
    p.pop_size = 200;
    p.generations = 200;
    p.seed = seed;
    p.setpoint_levels = toy_levels();
    return p;
}

/// Objective vectors of the true Pareto front, by brute force over every
/// start placement and setpoint level combination.
inline std::set<std::array<double, 3>> enumerate_toy_front(const CaseConfig& c) {
    const auto& levels = toy_levels();
    const std::size_t h = c.horizon();
    std::vector<ObjectiveVector> all;
    Chromosome ch;
    ch.starts.resize(c.appliances.size());
    ch.setpoints.resize(h);
    auto a0 = c.appliances[0], a1 = c.appliances[1];
    std::size_t combos = 1;
    for (std::size_t i = 0; i < h; ++i) combos *= levels.size();
    for (int s0 = a0.window_start; s0 <= a0.latest_start(); ++s0)
        for (int s1 = a1.window_start; s1 <= a1.latest_start(); ++s1)
            for (std::size_t m = 0; m < combos; ++m) {
                ch.starts = {s0, s1};
                std::size_t code = m;
                for (std::size_t i = 0; i < h; ++i) {
                    ch.setpoints[i] = c.desired_temp + levels[code % levels.size()];
                    code /= levels.size();
                }
                all.push_back(evaluate(decode(ch, c), c, CaseKind::c, {}));
            }
    std::set<std::array<double, 3>> front;
    for (std::size_t i = 0; i < all.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < all.size() && !dominated; ++j) dominated = dominates(all[j], all[i]);
        if (!dominated) front.insert(all[i].as_array());
    }
    return front;
}

}  // namespace hems::testing

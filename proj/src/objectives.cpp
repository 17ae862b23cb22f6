#include "hems/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hems/error.hpp"
#include "hems/load.hpp"

namespace hems {

namespace {

void require_len(std::size_t got, std::size_t want, const char* field) {
    if (got != want) {
        std::ostringstream os;
        os << field << " has " << got << " hours, expected " << want;
        throw ValidationError(os.str());
    }
}

void check_budget_range(double gamma, std::size_t horizon, const char* name) {
    if (!(gamma >= 0.0) || gamma > static_cast<double>(horizon)) {
        std::ostringstream os;
        os << name << " budget " << gamma << " outside [0, " << horizon << "]";
        throw ValidationError(os.str());
    }
}

}  // namespace

void CaseConfig::validate() const {
    const std::size_t h = horizon();
    if (h == 0) throw ValidationError("tariff: horizon must be at least 1 hour");
    tariff.validate();
    require_len(non_shiftable.horizon(), h, "non_shiftable");
    require_len(misc.horizon(), h, "misc");
    require_len(desired_demand.horizon(), h, "desired_demand");
    require_len(outdoor_temp.horizon(), h, "outdoor_temp");
    require_len(occupancy.nominal.horizon(), h, "occupancy");
    require_len(demand_deviation.size(), h, "demand_deviation");
    occupancy.validate();
    for (double f : demand_deviation)
        if (!(f >= 0.0) || !(f < 1.0))
            throw ValidationError("demand_deviation: fractions must lie in [0, 1)");
    if (!(dev_cap > 0.0)) throw ValidationError("dev_cap must be positive");
    if (!(total_dev_cap > 0.0)) throw ValidationError("total_dev_cap must be positive");
    if (!std::isfinite(desired_temp)) throw ValidationError("desired_temp must be finite");
    for (const auto& a : appliances) a.validate(h);
    arx.validate();
    for (double v : ac_warmup)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ValidationError("ac_warmup: values must be non-negative");
}

Schedule baseline_schedule(const CaseConfig& cfg) {
    const std::size_t h = cfg.horizon();
    Schedule s;
    s.on.assign(cfg.appliances.size(), std::vector<std::uint8_t>(h, 0));
    for (std::size_t a = 0; a < cfg.appliances.size(); ++a) {
        const auto& app = cfg.appliances[a];
        for (int i = 0; i < app.cycle_len; ++i)
            s.on[a][static_cast<std::size_t>(app.preferred_start - 1 + i)] = 1;
    }
    s.setpoints = HorizonSeries::constant(h, cfg.desired_temp, Unit::celsius);
    return s;
}

DemandProfile derive_demand(const Schedule& schedule, const CaseConfig& cfg) {
    return derive_demand(schedule, cfg, cfg.occupancy.nominal.values());
}

DemandProfile derive_demand(const Schedule& schedule, const CaseConfig& cfg,
                            std::span<const double> occupancy) {
    const std::size_t h_len = cfg.horizon();
    if (schedule.horizon() != h_len || schedule.on.size() != cfg.appliances.size())
        throw ValidationError("schedule dimensions do not match the case configuration");
    require_len(occupancy.size(), h_len, "occupancy");

    const auto warm = static_cast<std::size_t>(cfg.arx.max_lag());
    if (cfg.ac_warmup.empty() && warm > 0)
        throw MissingHistoryError("ac_warmup is empty; the ARX model needs " +
                                  std::to_string(warm) + " hour(s) of AC history");

    // Aligned buffers: index warm + h is horizon hour h. Warm-up exogenous
    // slots repeat the first horizon hour.
    std::vector<double> ac(warm + h_len, 0.0);
    for (std::size_t i = 0; i < warm; ++i) {
        const std::size_t back = warm - i;  // hours before the horizon
        const std::size_t n = cfg.ac_warmup.size();
        ac[i] = back <= n ? cfg.ac_warmup[n - back] : cfg.ac_warmup.front();
    }
    std::array<std::vector<double>, kExogenousCount> x;
    const std::span<const double> sources[kExogenousCount] = {
        cfg.outdoor_temp.values(), occupancy, schedule.setpoints.values()};
    for (std::size_t m = 0; m < kExogenousCount; ++m) {
        x[m].assign(warm + h_len, sources[m].empty() ? 0.0 : sources[m][0]);
        std::copy(sources[m].begin(), sources[m].end(), x[m].begin() + static_cast<long>(warm));
    }
    const ExogenousInputs exog{x[0], x[1], x[2]};

    DemandProfile out;
    out.shift.assign(h_len, 0.0);
    out.ac.assign(h_len, 0.0);
    out.non_ac.assign(h_len, 0.0);
    std::vector<double> total(h_len, 0.0);
    for (std::size_t h = 0; h < h_len; ++h) {
        double shift = 0.0;
        for (std::size_t a = 0; a < cfg.appliances.size(); ++a)
            if (schedule.on[a][h]) shift += cfg.appliances[a].power_kw;
        const std::size_t t = warm + h;
        ac[t] = arx_predict(cfg.arx, std::span<const double>(ac.data(), t), exog, t);
        const auto split = decompose_load(shift, cfg.non_shiftable[h], cfg.misc[h], ac[t]);
        out.shift[h] = shift;
        out.ac[h] = ac[t];
        out.non_ac[h] = split.non_ac;
        total[h] = split.total;
    }
    out.total = HorizonSeries(std::move(total), Unit::kilowatt);
    return out;
}

double cost_case_a(const HorizonSeries& demand, const Tariff& tariff) {
    require_len(demand.horizon(), tariff.rate.horizon(), "demand");
    double cost = 0.0;
    for (std::size_t h = 0; h < demand.horizon(); ++h) cost += tariff.rate[h] * demand[h];
    return cost;
}

RobustCost robust_cost_case_b(const CaseConfig& cfg, double gamma_demand, double gamma_occ) {
    return robust_cost(baseline_schedule(cfg), cfg, gamma_demand, gamma_occ);
}

RobustCost robust_cost(const Schedule& schedule, const CaseConfig& cfg, double gamma_demand,
                       double gamma_occ) {
    const std::size_t h_len = cfg.horizon();
    check_budget_range(gamma_demand, h_len, "demand");
    check_budget_range(gamma_occ, h_len, "occupancy");

    const DemandProfile demand = derive_demand(schedule, cfg);
    const auto& rate = cfg.tariff.rate;

    std::vector<double> demand_dev(h_len), demand_delta(h_len);
    for (std::size_t h = 0; h < h_len; ++h) {
        demand_delta[h] = cfg.demand_deviation[h] * demand.total[h];
        demand_dev[h] = rate[h] * demand_delta[h];
    }

    // Occupancy deviation at hour j moves the AC load at hours j + k - 1.
    std::vector<double> occ_dev(h_len, 0.0);
    for (std::size_t j = 0; j < h_len; ++j) {
        double weight = 0.0;
        for (std::size_t i = 0; i < cfg.arx.lags.size(); ++i) {
            const std::size_t h = j + static_cast<std::size_t>(cfg.arx.lags[i]) - 1;
            if (h < h_len) weight += cfg.arx.beta_of(i, Exogenous::occupancy) * rate[h];
        }
        occ_dev[j] = cfg.occupancy.deviation[j] * weight;
    }

    RobustCost out;
    out.nominal = cost_case_a(demand.total, cfg.tariff);
    out.demand_penalty = robust_penalty(demand_dev, gamma_demand);
    out.occupancy_penalty = robust_penalty(occ_dev, gamma_occ);
    out.total = out.nominal + out.demand_penalty + out.occupancy_penalty;

    const auto zeta_d = worst_case_perturbation(demand_dev, gamma_demand);
    const auto zeta_o = worst_case_perturbation(occ_dev, gamma_occ);
    std::vector<double> purchased(h_len);
    for (std::size_t h = 0; h < h_len; ++h) {
        double p = demand.total[h] + zeta_d[h] * demand_delta[h];
        for (std::size_t i = 0; i < cfg.arx.lags.size(); ++i) {
            const auto k = static_cast<std::size_t>(cfg.arx.lags[i]);
            if (h + 1 < k) continue;  // occupancy before the horizon is certain
            const std::size_t j = h + 1 - k;
            p += cfg.arx.beta_of(i, Exogenous::occupancy) * zeta_o[j] * cfg.occupancy.deviation[j];
        }
        purchased[h] = std::max(0.0, p);
    }
    out.purchased = HorizonSeries(std::move(purchased), Unit::kilowatt);
    return out;
}

ObjectiveVector objectives_case_c(const Schedule& schedule, const CaseConfig& cfg) {
    return objectives_case_c(derive_demand(schedule, cfg), schedule, cfg);
}

ObjectiveVector objectives_case_c(const DemandProfile& demand, const Schedule& schedule,
                                  const CaseConfig& cfg) {
    ObjectiveVector o;
    const auto& occ = cfg.occupancy.nominal;
    for (std::size_t h = 0; h < cfg.horizon(); ++h) {
        const double p = demand.total[h];
        const double target = cfg.desired_demand[h];
        o.o1 += std::max(p - target, 0.0);
        o.o2 += (schedule.setpoints[h] - cfg.desired_temp) * occ[h];
        o.o3 += cfg.tariff.rate[h] * p + cfg.tariff.penalty_reward * (p - target);
    }
    return o;
}

ObjectiveVector objectives_case_d(const Schedule& schedule, const CaseConfig& cfg,
                                  double gamma_demand, double gamma_occ) {
    const std::size_t h_len = cfg.horizon();
    check_budget_range(gamma_demand, h_len, "demand");
    check_budget_range(gamma_occ, h_len, "occupancy");

    const DemandProfile demand = derive_demand(schedule, cfg);
    ObjectiveVector o = objectives_case_c(demand, schedule, cfg);

    std::vector<double> dev_demand(h_len), dev_comfort(h_len), dev_cost(h_len);
    for (std::size_t h = 0; h < h_len; ++h) {
        const double dp = cfg.demand_deviation[h] * demand.total[h];
        dev_demand[h] = dp;
        dev_comfort[h] = cfg.occupancy.deviation[h] * (schedule.setpoints[h] - cfg.desired_temp);
        dev_cost[h] = (cfg.tariff.rate[h] + cfg.tariff.penalty_reward) * dp;
    }
    o.o1 += robust_penalty(dev_demand, gamma_demand);
    o.o2 += robust_penalty(dev_comfort, gamma_occ);
    o.o3 += robust_penalty(dev_cost, gamma_demand);
    return o;
}

Verdict check_shift_constraints(const std::vector<std::vector<std::uint8_t>>& on,
                                const std::vector<ApplianceSpec>& appliances) {
    if (on.size() != appliances.size())
        throw ValidationError("on/off matrix has a different appliance count");
    Verdict v;
    auto flag = [&](std::string c, int a, int hour, std::string msg) {
        v.feasible = false;
        v.violations.push_back({std::move(c), a, hour, std::move(msg)});
    };
    for (std::size_t a = 0; a < appliances.size(); ++a) {
        const auto& app = appliances[a];
        const auto& row = on[a];
        const int ai = static_cast<int>(a);
        const int n_s = app.cycle_len;
        const int h_len = static_cast<int>(row.size());

        int count = 0;
        for (int h = 1; h <= h_len; ++h) {
            const int u = row[static_cast<std::size_t>(h - 1)];
            if (u != 0 && u != 1) flag("binary", ai, h, app.name + ": flag is not 0/1");
            count += u;
            if (u && h < app.window_start)
                flag("before_window", ai, h, app.name + ": on before its window opens");
            if (u && h > app.window_end)
                flag("after_window", ai, h, app.name + ": on after its window closes");
        }
        if (count != n_s)
            flag("cycle_length", ai, 0,
                 app.name + ": " + std::to_string(count) + " on-hours, cycle needs " +
                     std::to_string(n_s));

        // u[h+1] >= u[h] / N * (N - sum_{tau<=h} u[tau]); u past the horizon is 0.
        int running = 0;
        for (int h = 1; h <= h_len; ++h) {
            const int u = row[static_cast<std::size_t>(h - 1)];
            running += u;
            const int next = h < h_len ? row[static_cast<std::size_t>(h)] : 0;
            if (static_cast<long>(next) * n_s < static_cast<long>(u) * (n_s - running))
                flag("contiguity", ai, h, app.name + ": cycle interrupted after hour " +
                                              std::to_string(h));
        }
    }
    return v;
}

Verdict check_ac_constraints(const HorizonSeries& setpoints, const CaseConfig& cfg) {
    Verdict v;
    double total = 0.0;
    for (std::size_t h = 0; h < setpoints.horizon(); ++h) {
        const double dev = setpoints[h] - cfg.desired_temp;
        const int hour = static_cast<int>(h) + 1;
        if (std::abs(dev) > cfg.dev_cap + kConstraintSlack) {
            v.feasible = false;
            v.violations.push_back({"per_hour_deviation", -1, hour,
                                    "setpoint deviates more than the per-hour cap"});
        }
        if (dev < -kConstraintSlack) {
            v.feasible = false;
            v.violations.push_back({"overcooling", -1, hour, "setpoint below desired temperature"});
        }
        total += std::abs(dev);
    }
    if (total > cfg.total_dev_cap + kConstraintSlack) {
        v.feasible = false;
        std::ostringstream os;
        os << "total setpoint deviation " << total << " exceeds " << cfg.total_dev_cap;
        v.violations.push_back({"total_deviation", -1, 0, os.str()});
    }
    return v;
}

}  // namespace hems

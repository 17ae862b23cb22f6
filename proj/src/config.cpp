#include "hems/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hems/csv.hpp"
#include "hems/error.hpp"

namespace hems {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& field, const std::string& what) {
    throw ValidationError(field + ": " + what);
}

void allow_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) bad(where.empty() ? "config" : where, "expected an object");
    const std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [k, v] : obj.items())
        if (!ok.count(k)) bad(where.empty() ? k : where + "." + k, "unknown field");
}

std::string join(const std::string& where, const char* key) { return where.empty() ? key : where + "." + key; }

double num(const json& v, const std::string& field) {
    if (!v.is_number()) bad(field, "expected a number");
    return v.get<double>();
}

long integer(const json& v, const std::string& field) {
    if (!v.is_number_integer()) bad(field, "expected an integer");
    return v.get<long>();
}

std::vector<double> numbers(const json& v, const std::string& field) {
    if (!v.is_array()) bad(field, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(num(v[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

std::string text(const json& v, const std::string& field) {
    if (!v.is_string()) bad(field, "expected a string");
    return v.get<std::string>();
}

std::uint64_t seed(const json& v, const std::string& field) {
    if (!v.is_number_unsigned()) bad(field, "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

template <class F>
void opt(const json& obj, const char* key, F&& f) {
    if (auto it = obj.find(key); it != obj.end()) f(*it);
}

void require_file(const std::filesystem::path& p, const std::string& field) {
    if (!std::filesystem::is_regular_file(p))
        throw PathError(field + ": file not found: '" + p.string() + "'", p.string());
}

void check_len(const std::vector<double>& v, std::size_t h, const char* field) {
    if (!v.empty() && v.size() != h)
        bad(field, "has " + std::to_string(v.size()) + " entries, horizon is " + std::to_string(h));
}

std::size_t line_of(const std::string& s, std::size_t byte) {
    byte = std::min(byte, s.size());
    return 1 + static_cast<std::size_t>(std::count(s.begin(), s.begin() + static_cast<long>(byte), '\n'));
}

std::vector<double> load_tariff_file(const std::filesystem::path& p) {
    const CsvTable t = read_csv(p);
    const auto hours = t.numeric_column("hour");
    for (std::size_t i = 0; i < hours.size(); ++i)
        if (hours[i] != static_cast<double>(i + 1))
            throw ParseError(p.string() + ": hour column must count 1, 2, ... (row " + std::to_string(i + 1) + ")",
                             i + 2);
    return t.numeric_column("rate");
}

}  // namespace

std::filesystem::path RunConfig::resolve(const std::filesystem::path& p) const {
    if (p.empty() || p.is_absolute()) return p;
    return base_dir / p;
}

void RunConfig::validate() const {
    if (horizon < 1) bad("horizon", "must be at least 1");
    const std::size_t h = horizon;
    check_len(tariff_rate, h, "tariff.rate");
    for (double r : tariff_rate)
        if (!(r > 0.0)) bad("tariff.rate", "rates must be positive");
    if (!(penalty_reward >= 0.0)) bad("penalty_reward", "must be non-negative");
    check_len(non_shiftable_kw, h, "non_shiftable_kw");
    check_len(misc_kw, h, "misc_kw");
    check_len(desired_demand_kw, h, "desired_demand_kw");
    check_len(outdoor_temp_c, h, "outdoor_temp_c");
    check_len(occupancy, h, "occupancy");
    for (std::size_t i = 0; i < appliances.size(); ++i) {
        try {
            appliances[i].validate(h);
        } catch (const ValidationError& e) {
            bad("appliances[" + std::to_string(i) + "]", e.what());
        }
    }
    if (!(dev_cap > 0.0)) bad("comfort.dev_cap", "must be positive");
    if (!(total_dev_cap > 0.0)) bad("comfort.total_dev_cap", "must be positive");
    const auto& u = uncertainty;
    if (!(u.demand_deviation >= 0.0 && u.demand_deviation < 1.0))
        bad("uncertainty.demand_deviation", "must lie in [0, 1)");
    if (!(u.occupancy_deviation >= 0.0 && u.occupancy_deviation < 1.0))
        bad("uncertainty.occupancy_deviation", "must lie in [0, 1)");
    for (double g : u.budgets)
        if (!(g >= 0.0) || g > static_cast<double>(h)) bad("uncertainty.budgets", "values must lie in [0, horizon]");
    if (arx) {
        try {
            arx->validate();
        } catch (const ValidationError& e) {
            bad("arx", e.what());
        }
    } else {
        ArxModel probe = ArxModel::zeros(arx_lags);
        try {
            probe.validate();
        } catch (const ValidationError& e) {
            bad("arx.lags", e.what());
        }
    }
    try {
        ga.validate();
    } catch (const ValidationError& e) {
        bad("ga", e.what());
    }
    if (!tariff_file.empty()) require_file(resolve(tariff_file), "tariff.file");
    if (!arx_training_file.empty()) require_file(resolve(arx_training_file), "arx.training_file");
    if (!history_file.empty()) require_file(resolve(history_file), "paths.history");
}

ArxModel fit_arx_from_log(const std::filesystem::path& path, const std::vector<int>& lags) {
    const auto t = load_timeseries_csv(path, {"ac_kw", "outdoor_temp_c", "occupancy", "setpoint_c"});
    t.require_contiguous();
    const ExogenousInputs exog{t.column("outdoor_temp_c"), t.column("occupancy"), t.column("setpoint_c")};
    return arx_fit(t.column("ac_kw"), exog, lags);
}

CaseConfig RunConfig::case_config() const {
    auto need = [](const std::vector<double>& v, const char* field) {
        if (v.empty()) bad(field, "required to build a case");
    };
    need(tariff_rate, "tariff");
    need(non_shiftable_kw, "non_shiftable_kw");
    need(misc_kw, "misc_kw");
    need(desired_demand_kw, "desired_demand_kw");
    need(outdoor_temp_c, "outdoor_temp_c");
    need(occupancy, "occupancy");

    CaseConfig c;
    c.tariff.rate = HorizonSeries(tariff_rate, Unit::dollars_per_kwh);
    c.tariff.penalty_reward = penalty_reward;
    c.appliances = appliances;
    c.non_shiftable = HorizonSeries(non_shiftable_kw, Unit::kilowatt);
    c.misc = HorizonSeries(misc_kw, Unit::kilowatt);
    c.desired_demand = HorizonSeries(desired_demand_kw, Unit::kilowatt);
    c.outdoor_temp = HorizonSeries(outdoor_temp_c, Unit::celsius);
    c.desired_temp = desired_temp;
    c.dev_cap = dev_cap;
    c.total_dev_cap = total_dev_cap;
    c.occupancy = UncertainParam::with_fraction(HorizonSeries(occupancy, Unit::persons),
                                                uncertainty.occupancy_deviation);
    c.demand_deviation.assign(horizon, uncertainty.demand_deviation);
    if (arx) {
        c.arx = *arx;
    } else if (!arx_training_file.empty()) {
        c.arx = fit_arx_from_log(resolve(arx_training_file), arx_lags);
    } else {
        bad("arx", "give coefficients or a training_file");
    }
    if (ac_warmup_kw.empty() && c.arx.max_lag() > 0) bad("ac_warmup_kw", "required by the ARX lags");
    c.ac_warmup = ac_warmup_kw;
    c.first_clock_hour = first_clock_hour;
    c.validate();
    return c;
}

RunConfig parse_config(const std::string& text_in, const std::filesystem::path& base_dir) {
    json j;
    try {
        j = json::parse(text_in);
    } catch (const json::parse_error& e) {
        const std::size_t line = line_of(text_in, e.byte == 0 ? 0 : e.byte - 1);
        throw ParseError("config line " + std::to_string(line) + ": " + e.what(), line);
    }
    allow_keys(j, "", {"description", "notes", "horizon", "first_clock_hour", "tariff", "penalty_reward",
                       "appliances", "non_shiftable_kw", "misc_kw", "desired_demand_kw", "outdoor_temp_c",
                       "occupancy", "ac_warmup_kw", "comfort", "uncertainty", "arx", "ga", "seeds", "paths"});
    RunConfig c;
    c.base_dir = base_dir;
    opt(j, "horizon", [&](const json& v) {
        const long h = integer(v, "horizon");
        if (h < 1) bad("horizon", "must be at least 1");
        c.horizon = static_cast<std::size_t>(h);
    });
    opt(j, "first_clock_hour", [&](const json& v) { c.first_clock_hour = static_cast<int>(integer(v, "first_clock_hour")); });
    opt(j, "tariff", [&](const json& v) {
        allow_keys(v, "tariff", {"rate", "file"});
        if (v.contains("rate") == v.contains("file")) bad("tariff", "give exactly one of rate or file");
        opt(v, "rate", [&](const json& r) { c.tariff_rate = numbers(r, "tariff.rate"); });
        opt(v, "file", [&](const json& f) { c.tariff_file = text(f, "tariff.file"); });
    });
    opt(j, "penalty_reward", [&](const json& v) { c.penalty_reward = num(v, "penalty_reward"); });
    opt(j, "appliances", [&](const json& v) {
        if (!v.is_array()) bad("appliances", "expected an array");
        for (std::size_t i = 0; i < v.size(); ++i) {
            const std::string w = "appliances[" + std::to_string(i) + "]";
            const json& a = v[i];
            allow_keys(a, w, {"name", "power_kw", "cycle_len", "window", "preferred_start"});
            for (const char* k : {"name", "power_kw", "cycle_len", "window", "preferred_start"})
                if (!a.contains(k)) bad(join(w, k), "required");
            ApplianceSpec s;
            s.name = text(a["name"], join(w, "name"));
            s.power_kw = num(a["power_kw"], join(w, "power_kw"));
            s.cycle_len = static_cast<int>(integer(a["cycle_len"], join(w, "cycle_len")));
            const json& win = a["window"];
            if (!win.is_array() || win.size() != 2) bad(join(w, "window"), "expected [first_hour, last_hour]");
            s.window_start = static_cast<int>(integer(win[0], join(w, "window")));
            s.window_end = static_cast<int>(integer(win[1], join(w, "window")));
            s.preferred_start = static_cast<int>(integer(a["preferred_start"], join(w, "preferred_start")));
            c.appliances.push_back(std::move(s));
        }
    });
    opt(j, "non_shiftable_kw", [&](const json& v) { c.non_shiftable_kw = numbers(v, "non_shiftable_kw"); });
    opt(j, "misc_kw", [&](const json& v) { c.misc_kw = numbers(v, "misc_kw"); });
    opt(j, "desired_demand_kw", [&](const json& v) { c.desired_demand_kw = numbers(v, "desired_demand_kw"); });
    opt(j, "outdoor_temp_c", [&](const json& v) { c.outdoor_temp_c = numbers(v, "outdoor_temp_c"); });
    opt(j, "occupancy", [&](const json& v) { c.occupancy = numbers(v, "occupancy"); });
    opt(j, "ac_warmup_kw", [&](const json& v) { c.ac_warmup_kw = numbers(v, "ac_warmup_kw"); });
    opt(j, "comfort", [&](const json& v) {
        allow_keys(v, "comfort", {"desired_temp", "dev_cap", "total_dev_cap"});
        opt(v, "desired_temp", [&](const json& x) { c.desired_temp = num(x, "comfort.desired_temp"); });
        opt(v, "dev_cap", [&](const json& x) { c.dev_cap = num(x, "comfort.dev_cap"); });
        opt(v, "total_dev_cap", [&](const json& x) { c.total_dev_cap = num(x, "comfort.total_dev_cap"); });
    });
    bool budgets_given = false;
    opt(j, "uncertainty", [&](const json& v) {
        allow_keys(v, "uncertainty", {"demand_deviation", "occupancy_deviation", "budgets"});
        opt(v, "demand_deviation", [&](const json& x) {
            c.uncertainty.demand_deviation = num(x, "uncertainty.demand_deviation");
        });
        opt(v, "occupancy_deviation", [&](const json& x) {
            c.uncertainty.occupancy_deviation = num(x, "uncertainty.occupancy_deviation");
        });
        opt(v, "budgets", [&](const json& x) {
            c.uncertainty.budgets = numbers(x, "uncertainty.budgets");
            budgets_given = true;
        });
    });
    if (!budgets_given) {
        c.uncertainty.budgets.clear();
        for (std::size_t g = 0; g <= c.horizon; ++g) c.uncertainty.budgets.push_back(static_cast<double>(g));
    }
    opt(j, "arx", [&](const json& v) {
        allow_keys(v, "arx", {"lags", "alpha", "beta", "training_file"});
        opt(v, "lags", [&](const json& x) {
            if (!x.is_array()) bad("arx.lags", "expected an array of integers");
            c.arx_lags.clear();
            for (const auto& k : x) c.arx_lags.push_back(static_cast<int>(integer(k, "arx.lags")));
        });
        const bool inline_coef = v.contains("alpha") || v.contains("beta");
        if (inline_coef && v.contains("training_file")) bad("arx", "give coefficients or a training_file, not both");
        if (inline_coef) {
            if (!v.contains("alpha") || !v.contains("beta")) bad("arx", "alpha and beta must be given together");
            ArxModel m;
            m.lags = c.arx_lags;
            m.alpha = numbers(v["alpha"], "arx.alpha");
            const json& b = v["beta"];
            if (!b.is_array()) bad("arx.beta", "expected one [temp, occupancy, setpoint] row per lag");
            for (std::size_t i = 0; i < b.size(); ++i) {
                const auto row = numbers(b[i], "arx.beta[" + std::to_string(i) + "]");
                if (row.size() != kExogenousCount)
                    bad("arx.beta[" + std::to_string(i) + "]", "expected [temp, occupancy, setpoint]");
                m.beta.push_back({row[0], row[1], row[2]});
            }
            c.arx = std::move(m);
        }
        opt(v, "training_file", [&](const json& x) { c.arx_training_file = text(x, "arx.training_file"); });
    });
    opt(j, "ga", [&](const json& v) {
        allow_keys(v, "ga", {"pop_size", "generations", "crossover_rate", "mutation_rate", "seed", "blend_alpha",
                             "mutation_sigma", "setpoint_levels", "exec"});
        opt(v, "pop_size", [&](const json& x) { c.ga.pop_size = static_cast<int>(integer(x, "ga.pop_size")); });
        opt(v, "generations", [&](const json& x) { c.ga.generations = static_cast<int>(integer(x, "ga.generations")); });
        opt(v, "crossover_rate", [&](const json& x) { c.ga.crossover_rate = num(x, "ga.crossover_rate"); });
        opt(v, "mutation_rate", [&](const json& x) { c.ga.mutation_rate = num(x, "ga.mutation_rate"); });
        opt(v, "seed", [&](const json& x) { c.ga.seed = seed(x, "ga.seed"); });
        opt(v, "blend_alpha", [&](const json& x) { c.ga.blend_alpha = num(x, "ga.blend_alpha"); });
        opt(v, "mutation_sigma", [&](const json& x) { c.ga.mutation_sigma = num(x, "ga.mutation_sigma"); });
        opt(v, "setpoint_levels", [&](const json& x) { c.ga.setpoint_levels = numbers(x, "ga.setpoint_levels"); });
        opt(v, "exec", [&](const json& x) {
            const auto e = text(x, "ga.exec");
            if (e == "serial") c.ga.exec = Exec::serial;
            else if (e == "parallel") c.ga.exec = Exec::parallel;
            else bad("ga.exec", "expected \"serial\" or \"parallel\"");
        });
    });
    opt(j, "seeds", [&](const json& v) {
        allow_keys(v, "seeds", {"forecast", "synth"});
        opt(v, "forecast", [&](const json& x) { c.forecast_seed = seed(x, "seeds.forecast"); });
        opt(v, "synth", [&](const json& x) { c.synth_seed = seed(x, "seeds.synth"); });
    });
    opt(j, "paths", [&](const json& v) {
        allow_keys(v, "paths", {"history"});
        opt(v, "history", [&](const json& x) { c.history_file = text(x, "paths.history"); });
    });

    if (!c.tariff_file.empty()) {
        const auto p = c.resolve(c.tariff_file);
        require_file(p, "tariff.file");
        c.tariff_rate = load_tariff_file(p);
    }
    c.validate();
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PathError("cannot open config '" + path.string() + "'", path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

std::string RunConfig::to_json() const {
    ordered_json j;
    j["horizon"] = horizon;
    j["first_clock_hour"] = first_clock_hour;
    j["tariff"] = {{"rate", tariff_rate}};
    if (!tariff_file.empty()) j["tariff"]["file"] = tariff_file.string();
    j["penalty_reward"] = penalty_reward;
    ordered_json apps = ordered_json::array();
    for (const auto& a : appliances)
        apps.push_back({{"name", a.name},
                        {"power_kw", a.power_kw},
                        {"cycle_len", a.cycle_len},
                        {"window", {a.window_start, a.window_end}},
                        {"preferred_start", a.preferred_start}});
    j["appliances"] = apps;
    j["non_shiftable_kw"] = non_shiftable_kw;
    j["misc_kw"] = misc_kw;
    j["desired_demand_kw"] = desired_demand_kw;
    j["outdoor_temp_c"] = outdoor_temp_c;
    j["occupancy"] = occupancy;
    j["ac_warmup_kw"] = ac_warmup_kw;
    j["comfort"] = {{"desired_temp", desired_temp}, {"dev_cap", dev_cap}, {"total_dev_cap", total_dev_cap}};
    j["uncertainty"] = {{"demand_deviation", uncertainty.demand_deviation},
                        {"occupancy_deviation", uncertainty.occupancy_deviation},
                        {"budgets", uncertainty.budgets}};
    j["arx"] = {{"lags", arx_lags}};
    if (arx) {
        j["arx"]["alpha"] = arx->alpha;
        ordered_json beta = ordered_json::array();
        for (const auto& b : arx->beta) beta.push_back({b[0], b[1], b[2]});
        j["arx"]["beta"] = beta;
    }
    if (!arx_training_file.empty()) j["arx"]["training_file"] = arx_training_file.string();
    j["ga"] = {{"pop_size", ga.pop_size},
               {"generations", ga.generations},
               {"crossover_rate", ga.crossover_rate},
               {"mutation_rate", ga.mutation_rate},
               {"seed", ga.seed},
               {"blend_alpha", ga.blend_alpha},
               {"mutation_sigma", ga.mutation_sigma},
               {"setpoint_levels", ga.setpoint_levels}};
    j["seeds"] = {{"forecast", forecast_seed}, {"synth", synth_seed}};
    if (!history_file.empty()) j["paths"] = {{"history", history_file.string()}};
    return j.dump(2);
}

}  // namespace hems

#include "hems/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include <json.hpp>

#include "hems/csv.hpp"
#include "hems/error.hpp"

namespace hems {

namespace {

std::vector<int> on_hours(const std::vector<std::uint8_t>& row) {
    std::vector<int> hours;
    for (std::size_t h = 0; h < row.size(); ++h)
        if (row[h]) hours.push_back(static_cast<int>(h) + 1);
    return hours;
}

void check_case(const CaseConfig& cfg, const Schedule& s, CaseReport& r) {
    r.shift_verdict = check_shift_constraints(s.on, cfg.appliances);
    r.ac_verdict = check_ac_constraints(s.setpoints, cfg);
}

int to_int(const std::string& cell, std::size_t row) {
    const double v = parse_double(cell);
    if (v != static_cast<double>(static_cast<int>(v)))
        throw ParseError("row " + std::to_string(row) + ": expected an integer, got '" + cell + "'", row + 1);
    return static_cast<int>(v);
}

}  // namespace

double TransferReport::transferred_kw(const std::string& appliance) const {
    double s = 0.0;
    for (const auto& r : rows)
        if (r.appliance == appliance) s += r.kw;
    return s;
}

TransferReport compare_schedules(const Schedule& baseline, const Schedule& optimized,
                                 const std::vector<ApplianceSpec>& appliances, int first_clock_hour) {
    if (baseline.on.size() != appliances.size() || optimized.on.size() != appliances.size())
        throw ValidationError("compare_schedules: appliance count mismatch");
    TransferReport rep;
    for (std::size_t a = 0; a < appliances.size(); ++a) {
        const auto from = on_hours(baseline.on[a]);
        const auto to = on_hours(optimized.on[a]);
        if (from.size() != to.size())
            throw ValidationError("compare_schedules: " + appliances[a].name + " has " +
                                  std::to_string(from.size()) + " vs " + std::to_string(to.size()) +
                                  " on-hours");
        for (std::size_t i = 0; i < from.size(); ++i)
            if (from[i] != to[i])
                rep.rows.push_back({appliances[a].name, first_clock_hour + from[i] - 1,
                                    first_clock_hour + to[i] - 1, appliances[a].power_kw});
    }
    return rep;
}

CaseReport run_case(CaseKind kind, const CaseConfig& cfg, const Budgets& budgets, const GaParams& ga) {
    cfg.validate();
    CaseReport r;
    r.kind = kind;
    const Schedule base = baseline_schedule(cfg);
    switch (kind) {
        case CaseKind::a:
            r.schedule = base;
            r.demand = derive_demand(base, cfg);
            r.cost = cost_case_a(r.demand.total, cfg.tariff);
            r.objectives = objectives_case_c(r.demand, base, cfg);
            break;
        case CaseKind::b:
            r.budgets = budgets;
            r.schedule = base;
            r.demand = derive_demand(base, cfg);
            r.robust = robust_cost_case_b(cfg, budgets.demand, budgets.occupancy);
            r.cost = r.robust->total;
            r.objectives = objectives_case_c(r.demand, base, cfg);
            break;
        case CaseKind::c:
        case CaseKind::d: {
            if (kind == CaseKind::d) r.budgets = budgets;
            r.ga = evolve(cfg, kind, r.budgets, ga);
            const auto& best = r.ga->front[select_solution(r.ga->front)];
            r.schedule = decode(best.genes, cfg);
            r.demand = derive_demand(r.schedule, cfg);
            r.objectives = best.objectives;
            if (kind == CaseKind::c) {
                r.cost = cost_case_a(r.demand.total, cfg.tariff);
            } else {
                r.robust = robust_cost(r.schedule, cfg, budgets.demand, budgets.occupancy);
                r.cost = r.robust->total;
            }
            break;
        }
    }
    r.transfers = compare_schedules(base, r.schedule, cfg.appliances, cfg.first_clock_hour);
    check_case(cfg, r.schedule, r);
    return r;
}

std::optional<std::size_t> SweepResult::first_decrease() const {
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].cost < rows[i - 1].cost) return i;
    return std::nullopt;
}

SweepResult budget_sweep(const CaseConfig& cfg, CaseKind kind, const std::vector<double>& gammas,
                         const GaParams& ga) {
    if (kind != CaseKind::b && kind != CaseKind::d)
        throw ValidationError("budget sweep is defined for cases b and d only");
    const auto h = static_cast<double>(cfg.horizon());
    for (double g : gammas)
        if (!(g >= 0.0) || g > h) throw ValidationError("sweep budget " + format_double(g) + " outside [0, H]");
    SweepResult out;
    out.kind = kind;
    for (double g : gammas) {
        const CaseReport r = run_case(kind, cfg, Budgets{g, g}, ga);
        out.rows.push_back({g, r.cost, r.schedule, r.objectives});
    }
    return out;
}

std::vector<double> default_budgets(std::size_t horizon) {
    std::vector<double> g;
    for (std::size_t i = 0; i <= horizon; ++i) g.push_back(static_cast<double>(i));
    return g;
}

char case_label(CaseKind kind) noexcept { return static_cast<char>('a' + static_cast<int>(kind)); }

CaseKind parse_case(std::string_view text) {
    const char c = text.size() == 1 ? static_cast<char>(std::tolower(static_cast<unsigned char>(text[0]))) : '\0';
    if (c >= 'a' && c <= 'd') return static_cast<CaseKind>(c - 'a');
    throw ValidationError("case must be one of a, b, c, d (got '" + std::string(text) + "')");
}

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& sweep) {
    CsvTable t{{"gamma", "cost"}, {}};
    for (const auto& r : sweep.rows) t.rows.push_back({format_double(r.gamma), format_double(r.cost)});
    write_csv(path, t);
}

std::vector<SweepPoint> read_sweep_csv(const std::filesystem::path& path) {
    const CsvTable t = read_csv(path);
    const auto g = t.numeric_column("gamma");
    const auto c = t.numeric_column("cost");
    std::vector<SweepPoint> out;
    for (std::size_t i = 0; i < g.size(); ++i) out.push_back({g[i], c[i]});
    return out;
}

void write_convergence_csv(const std::filesystem::path& path, const std::vector<GenerationStats>& history) {
    CsvTable t{{"generation", "best_o1", "best_o2", "best_o3", "hypervolume"}, {}};
    for (const auto& s : history)
        t.rows.push_back({std::to_string(s.generation), format_double(s.best_o1), format_double(s.best_o2),
                          format_double(s.best_o3), format_double(s.hypervolume)});
    write_csv(path, t);
}

std::vector<GenerationStats> read_convergence_csv(const std::filesystem::path& path) {
    const CsvTable t = read_csv(path);
    const auto o1 = t.numeric_column("best_o1");
    const auto o2 = t.numeric_column("best_o2");
    const auto o3 = t.numeric_column("best_o3");
    const auto hv = t.numeric_column("hypervolume");
    const std::size_t gc = t.column_index("generation");
    std::vector<GenerationStats> out;
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        out.push_back({to_int(t.rows[i][gc], i + 1), o1[i], o2[i], o3[i], hv[i]});
    return out;
}

std::vector<SetpointRow> setpoint_rows(const Schedule& case_c, const Schedule& case_d, int first_clock_hour) {
    if (case_c.horizon() != case_d.horizon()) throw ValidationError("setpoint_rows: horizon mismatch");
    std::vector<SetpointRow> out;
    for (std::size_t h = 0; h < case_c.horizon(); ++h)
        out.push_back({first_clock_hour + static_cast<int>(h), case_c.setpoints[h], case_d.setpoints[h]});
    return out;
}

void write_setpoints_csv(const std::filesystem::path& path, const std::vector<SetpointRow>& rows) {
    CsvTable t{{"hour", "setpoint_c", "setpoint_d"}, {}};
    for (const auto& r : rows)
        t.rows.push_back({std::to_string(r.hour), format_double(r.setpoint_c), format_double(r.setpoint_d)});
    write_csv(path, t);
}

std::vector<SetpointRow> read_setpoints_csv(const std::filesystem::path& path) {
    const CsvTable t = read_csv(path);
    const auto c = t.numeric_column("setpoint_c");
    const auto d = t.numeric_column("setpoint_d");
    const std::size_t hc = t.column_index("hour");
    std::vector<SetpointRow> out;
    for (std::size_t i = 0; i < t.rows.size(); ++i) out.push_back({to_int(t.rows[i][hc], i + 1), c[i], d[i]});
    return out;
}

void write_transfers_csv(const std::filesystem::path& path, const TransferReport& report) {
    CsvTable t{{"appliance", "from_hour", "to_hour", "kw"}, {}};
    for (const auto& r : report.rows)
        t.rows.push_back({r.appliance, std::to_string(r.from_hour), std::to_string(r.to_hour), format_double(r.kw)});
    write_csv(path, t);
}

TransferReport read_transfers_csv(const std::filesystem::path& path) {
    const CsvTable t = read_csv(path);
    const std::size_t ac = t.column_index("appliance");
    const std::size_t fc = t.column_index("from_hour");
    const std::size_t tc = t.column_index("to_hour");
    const auto kw = t.numeric_column("kw");
    TransferReport rep;
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        rep.rows.push_back({t.rows[i][ac], to_int(t.rows[i][fc], i + 1), to_int(t.rows[i][tc], i + 1), kw[i]});
    return rep;
}

void write_schedule_csv(const std::filesystem::path& path, const Schedule& schedule, const CaseConfig& cfg) {
    CsvTable t{{"hour", "setpoint_c"}, {}};
    for (const auto& a : cfg.appliances) t.header.push_back(a.name);
    for (std::size_t h = 0; h < schedule.horizon(); ++h) {
        std::vector<std::string> row{std::to_string(cfg.first_clock_hour + static_cast<int>(h)),
                                     format_double(schedule.setpoints[h])};
        for (const auto& on : schedule.on) row.push_back(on[h] ? "1" : "0");
        t.rows.push_back(std::move(row));
    }
    write_csv(path, t);
}

std::string summary_json(const std::vector<CaseReport>& reports, const std::string& config_echo_json) {
    using nlohmann::ordered_json;
    ordered_json root;
    root["cases"] = ordered_json::array();
    for (const auto& r : reports) {
        ordered_json c;
        c["case"] = std::string(1, case_label(r.kind));
        c["gamma_demand"] = r.budgets.demand;
        c["gamma_occupancy"] = r.budgets.occupancy;
        c["cost"] = r.cost;
        c["objectives"] = {{"o1", r.objectives.o1}, {"o2", r.objectives.o2}, {"o3", r.objectives.o3}};
        if (r.robust)
            c["robust"] = {{"nominal", r.robust->nominal},
                           {"demand_penalty", r.robust->demand_penalty},
                           {"occupancy_penalty", r.robust->occupancy_penalty},
                           {"total", r.robust->total}};
        c["setpoints"] = std::vector<double>(r.schedule.setpoints.begin(), r.schedule.setpoints.end());
        c["demand_kw"] = std::vector<double>(r.demand.total.begin(), r.demand.total.end());
        ordered_json on = ordered_json::array();
        for (const auto& row : r.schedule.on) on.push_back(std::vector<int>(row.begin(), row.end()));
        c["on"] = on;
        ordered_json tr = ordered_json::array();
        for (const auto& t : r.transfers.rows)
            tr.push_back({{"appliance", t.appliance}, {"from_hour", t.from_hour}, {"to_hour", t.to_hour}, {"kw", t.kw}});
        c["transfers"] = tr;
        c["feasible"] = r.feasible();
        if (r.ga) {
            c["pareto_front_size"] = r.ga->front.size();
            c["evaluations"] = r.ga->evaluations;
            if (!r.ga->history.empty()) c["final_hypervolume"] = r.ga->history.back().hypervolume;
        }
        root["cases"].push_back(std::move(c));
    }
    root["config"] = config_echo_json.empty() ? ordered_json::object() : ordered_json::parse(config_echo_json);
    return root.dump(2) + "\n";
}

}  // namespace hems

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hems/config.hpp"
#include "hems/csv.hpp"
#include "hems/error.hpp"
#include "hems/forecast/model.hpp"
#include "hems/scenario.hpp"
#include "hems/synth.hpp"

namespace fs = std::filesystem;
using namespace hems;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitDegenerate = 2;

fs::path prepare_out(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw PathError("cannot create output directory '" + dir.string() + "': " + ec.message(), dir.string());
    return dir;
}

void write_text(const fs::path& p, const std::string& s) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw PathError("cannot write '" + p.string() + "'", p.string());
    out << s;
}

std::string arx_json(const ArxModel& m) {
    nlohmann::ordered_json j;
    j["lags"] = m.lags;
    j["alpha"] = m.alpha;
    nlohmann::ordered_json beta = nlohmann::ordered_json::array();
    for (const auto& b : m.beta) beta.push_back({b[0], b[1], b[2]});
    j["beta"] = beta;
    return j.dump(2) + "\n";
}

int report_feasibility(const std::vector<CaseReport>& reports) {
    int rc = 0;
    for (const auto& r : reports) {
        if (r.feasible()) continue;
        std::cerr << "case " << case_label(r.kind) << ": emitted schedule violates constraints:\n";
        for (const auto* v : {&r.shift_verdict, &r.ac_verdict})
            for (const auto& x : v->violations) std::cerr << "  " << x.constraint << ": " << x.message << "\n";
        rc = kExitDegenerate;
    }
    return rc;
}

void print_case(const CaseReport& r) {
    std::cout << "case " << case_label(r.kind) << ": cost " << format_double(r.cost) << "  o1 "
              << format_double(r.objectives.o1) << "  o2 " << format_double(r.objectives.o2) << "  o3 "
              << format_double(r.objectives.o3) << (r.feasible() ? "" : "  INFEASIBLE") << "\n";
}

std::vector<int> parse_lags(const std::string& s) {
    std::vector<int> lags;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const double v = parse_double(item);
        if (v != static_cast<double>(static_cast<int>(v))) throw ValidationError("--lags: not an integer: " + item);
        lags.push_back(static_cast<int>(v));
    }
    if (lags.empty()) throw ValidationError("--lags: empty list");
    return lags;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Home energy scheduling under demand response and uncertainty"};
    app.require_subcommand(1);
    std::string out_dir = "out";

    // synth-data
    auto* synth = app.add_subcommand("synth-data", "Generate a synthetic summer household dataset");
    std::uint64_t synth_seed = 7;
    int synth_days = 56;
    synth->add_option("--seed", synth_seed, "Random seed")->capture_default_str();
    synth->add_option("--days", synth_days, "Number of days")->capture_default_str();
    synth->add_option("--out", out_dir, "Output directory")->capture_default_str();

    // forecast
    auto* fc = app.add_subcommand("forecast", "Fit occupancy regressors and forecast the next hours");
    std::string history, report_path;
    std::string models = "all";
    int lags = 13, trees = 400, mlp_iter = 4000;
    std::size_t fc_horizon = 12;
    double test_fraction = 0.2;
    std::uint64_t fc_seed = 0;
    fc->add_option("--input", history, "CSV with timestamp,demand_kw,occupancy")->required();
    fc->add_option("--model", models, "rf, gbm, mlp or all")
        ->check(CLI::IsMember({"rf", "gbm", "mlp", "all"}))
        ->capture_default_str();
    fc->add_option("--report", report_path, "Metrics JSON (default: <out>/report.json)");
    fc->add_option("--lags", lags, "Demand lags per sample")->capture_default_str();
    fc->add_option("--horizon", fc_horizon, "Hours to forecast")->capture_default_str();
    fc->add_option("--test-fraction", test_fraction, "Chronological test share")->capture_default_str();
    fc->add_option("--trees", trees, "Trees for rf and gbm")->capture_default_str();
    fc->add_option("--mlp-iter", mlp_iter, "MLP epochs")->capture_default_str();
    fc->add_option("--seed", fc_seed, "Random seed")->capture_default_str();
    fc->add_option("--out", out_dir, "Output directory")->capture_default_str();

    // fit-arx
    auto* fa = app.add_subcommand("fit-arx", "Fit the cooling-load model to an AC log");
    std::string ac_log;
    std::string lag_list = "1";
    fa->add_option("--log", ac_log, "CSV with timestamp,ac_kw,outdoor_temp_c,occupancy,setpoint_c")->required();
    fa->add_option("--lags", lag_list, "Comma-separated lag set")->capture_default_str();
    fa->add_option("--out", out_dir, "Output directory")->capture_default_str();

    // run-case
    auto* rc = app.add_subcommand("run-case", "Run one case study");
    std::string config_path, case_name;
    std::optional<double> gamma_d, gamma_o;
    rc->add_option("--config", config_path, "JSON run configuration")->required();
    rc->add_option("--case", case_name, "a, b, c or d")->required()->check(CLI::IsMember({"a", "b", "c", "d"}));
    rc->add_option("--gamma-demand", gamma_d, "Demand budget (default: horizon)");
    rc->add_option("--gamma-occupancy", gamma_o, "Occupancy budget (default: horizon)");
    rc->add_option("--out", out_dir, "Output directory")->capture_default_str();

    // sweep-budgets
    auto* sw = app.add_subcommand("sweep-budgets", "Sweep equal budgets over the configured list");
    std::string sweep_case = "b";
    sw->add_option("--config", config_path, "JSON run configuration")->required();
    sw->add_option("--case", sweep_case, "b or d")->check(CLI::IsMember({"b", "d"}))->capture_default_str();
    sw->add_option("--out", out_dir, "Output directory")->capture_default_str();

    // compare
    auto* cmp = app.add_subcommand("compare", "Run cases a, c and d and compare the schedules");
    cmp->add_option("--config", config_path, "JSON run configuration")->required();
    cmp->add_option("--gamma", gamma_d, "Budget for case d (default: horizon)");
    cmp->add_option("--out", out_dir, "Output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        const fs::path out = out_dir;
        if (*synth) {
            const auto data = generate_synthetic(synth_seed, SynthProfile::summer_weekday, synth_days);
            write_synthetic(prepare_out(out), data);
            std::cout << "wrote " << data.history.size() << " hours to " << out.string() << "\n";
            return 0;
        }
        if (*fc) {
            auto table = load_timeseries_csv(history, {"demand_kw", "occupancy"});
            table.require_contiguous();
            forecast::ForecastOptions opt;
            if (models != "all") opt.models = {*forecast::parse_model_kind(models)};
            opt.lag_count = lags;
            opt.horizon = fc_horizon;
            opt.test_fraction = test_fraction;
            opt.seed = fc_seed;
            opt.forest.n_trees = trees;
            opt.gbm.n_trees = trees;
            opt.mlp.max_iter = mlp_iter;
            opt.mlp.seed = fc_seed;
            opt.first_hour_of_day = static_cast<int>(parse_hour_stamp(table.timestamps.front()) % 24);
            const auto run = forecast::run_forecast(table.column("demand_kw"), table.column("occupancy"), opt);
            prepare_out(out);
            nlohmann::ordered_json rep;
            rep["input"] = history;
            rep["seed"] = fc_seed;
            rep["best"] = std::string(forecast::to_string(run.best));
            for (const auto& [kind, r] : run.reports)
                rep["models"][std::string(forecast::to_string(kind))] = {
                    {"mse", r.mse}, {"rmse", r.rmse}, {"mae", r.mae}};
            rep["normalizer"] = run.normalizer;
            rep["zero_variance_features"] = run.zero_variance_features;
            const fs::path rp = report_path.empty() ? out / "report.json" : fs::path(report_path);
            if (rp.has_parent_path()) prepare_out(rp.parent_path());
            write_text(rp, rep.dump(2) + "\n");
            CsvTable f{{"timestamp", "forecast", "normalized", "actual"}, {}};
            for (std::size_t i = 0; i < run.forecast.size(); ++i)
                f.rows.push_back({table.timestamps[run.hours[i]], format_double(run.forecast[i]),
                                  format_double(run.normalized[i]), format_double(run.actual[i])});
            write_csv(out / "forecast.csv", f);
            for (const auto& name : run.zero_variance_features)
                std::cerr << "warning: feature '" << name << "' is constant on the training rows\n";
            for (const auto& [kind, r] : run.reports)
                std::cout << forecast::to_string(kind) << ": mse " << format_double(r.mse) << " rmse "
                          << format_double(r.rmse) << " mae " << format_double(r.mae) << "\n";
            std::cout << "best: " << forecast::to_string(run.best) << "\n";
            return 0;
        }
        if (*fa) {
            const auto model = fit_arx_from_log(ac_log, parse_lags(lag_list));
            prepare_out(out);
            write_text(out / "arx.json", arx_json(model));
            std::cout << arx_json(model);
            return 0;
        }

        const RunConfig run_cfg = load_config(config_path);
        const CaseConfig cfg = run_cfg.case_config();
        const double h = static_cast<double>(cfg.horizon());
        if (*rc) {
            const CaseKind kind = parse_case(case_name);
            const Budgets budgets{gamma_d.value_or(h), gamma_o.value_or(h)};
            const CaseReport r = run_case(kind, cfg, budgets, run_cfg.ga);
            prepare_out(out);
            write_schedule_csv(out / "schedule.csv", r.schedule, cfg);
            write_transfers_csv(out / "transfers.csv", r.transfers);
            if (r.ga) write_convergence_csv(out / "convergence.csv", r.ga->history);
            write_text(out / "summary.json", summary_json({r}, run_cfg.to_json()));
            print_case(r);
            return report_feasibility({r});
        }
        if (*sw) {
            const CaseKind kind = parse_case(sweep_case);
            const auto sweep = budget_sweep(cfg, kind, run_cfg.uncertainty.budgets, run_cfg.ga);
            prepare_out(out);
            write_sweep_csv(out / "sweep.csv", sweep);
            for (const auto& row : sweep.rows)
                std::cout << "gamma " << format_double(row.gamma) << ": cost " << format_double(row.cost) << "\n";
            if (const auto i = sweep.first_decrease())
                std::cerr << "warning: cost decreases between budgets " << format_double(sweep.rows[*i - 1].gamma)
                          << " and " << format_double(sweep.rows[*i].gamma) << "\n";
            return 0;
        }
        if (*cmp) {
            const double g = gamma_d.value_or(h);
            const CaseReport a = run_case(CaseKind::a, cfg, {}, run_cfg.ga);
            const CaseReport c = run_case(CaseKind::c, cfg, {}, run_cfg.ga);
            const CaseReport d = run_case(CaseKind::d, cfg, {g, g}, run_cfg.ga);
            prepare_out(out);
            write_setpoints_csv(out / "setpoints.csv", setpoint_rows(c.schedule, d.schedule, cfg.first_clock_hour));
            write_transfers_csv(out / "transfers.csv", c.transfers);
            write_transfers_csv(out / "transfers_d.csv", d.transfers);
            write_convergence_csv(out / "convergence.csv", c.ga->history);
            write_convergence_csv(out / "convergence_d.csv", d.ga->history);
            write_text(out / "summary.json", summary_json({a, c, d}, run_cfg.to_json()));
            for (const auto* r : {&a, &c, &d}) print_case(*r);
            return report_feasibility({a, c, d});
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const DegenerateInputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

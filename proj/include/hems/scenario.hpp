#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hems/moga.hpp"
#include "hems/objectives.hpp"

namespace hems {

struct TransferRow {
    std::string appliance;
    int from_hour = 0;  // clock labels
    int to_hour = 0;
    double kw = 0.0;

    friend bool operator==(const TransferRow&, const TransferRow&) = default;
};

struct TransferReport {
    std::vector<TransferRow> rows;

    /// Sum of transferred power for one appliance (power x moved hours).
    double transferred_kw(const std::string& appliance) const;
};

/// Pairs each appliance's on-hours in the two schedules earliest to earliest
/// and emits one row per pair that moved. Hour labels are
/// first_clock_hour + (1-based hour) - 1. Throws ValidationError if an
/// appliance has different on-hour counts in the two schedules.
TransferReport compare_schedules(const Schedule& baseline, const Schedule& optimized,
                                 const std::vector<ApplianceSpec>& appliances, int first_clock_hour = 1);

struct CaseReport {
    CaseKind kind = CaseKind::a;
    Budgets budgets;
    /// a: energy bill of the baseline; b: its robust bill; c: energy bill of
    /// the selected schedule; d: robust bill of the selected schedule.
    double cost = 0.0;
    Schedule schedule;
    DemandProfile demand;
    ObjectiveVector objectives;   // case-c objectives for a/b/c, robust ones for d
    std::optional<RobustCost> robust;
    std::optional<GaResult> ga;
    TransferReport transfers;     // baseline -> schedule
    Verdict shift_verdict;
    Verdict ac_verdict;

    bool feasible() const noexcept { return shift_verdict.feasible && ac_verdict.feasible; }
};

/// Budgets are ignored for cases a and c; GA parameters for a and b.
CaseReport run_case(CaseKind kind, const CaseConfig& cfg, const Budgets& budgets, const GaParams& ga);

struct SweepRow {
    double gamma = 0.0;
    double cost = 0.0;
    Schedule schedule;
    ObjectiveVector objectives;
};

struct SweepResult {
    CaseKind kind = CaseKind::b;
    std::vector<SweepRow> rows;

    /// First index i with cost[i] < cost[i-1], if any.
    std::optional<std::size_t> first_decrease() const;
    bool monotone() const { return !first_decrease().has_value(); }
};

/// Runs the case at gamma_demand = gamma_occ = gamma for each entry, in the
/// given order. Throws ValidationError for cases other than b and d or a
/// gamma outside [0, H].
SweepResult budget_sweep(const CaseConfig& cfg, CaseKind kind, const std::vector<double>& gammas,
                         const GaParams& ga);

std::vector<double> default_budgets(std::size_t horizon);

char case_label(CaseKind kind) noexcept;
/// Throws ValidationError for anything but a, b, c, d.
CaseKind parse_case(std::string_view text);

// Report files. Every reader returns exactly what the writer was given.

struct SweepPoint {
    double gamma = 0.0;
    double cost = 0.0;
    friend bool operator==(const SweepPoint&, const SweepPoint&) = default;
};

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& sweep);
std::vector<SweepPoint> read_sweep_csv(const std::filesystem::path& path);

void write_convergence_csv(const std::filesystem::path& path, const std::vector<GenerationStats>& history);
std::vector<GenerationStats> read_convergence_csv(const std::filesystem::path& path);

struct SetpointRow {
    int hour = 0;
    double setpoint_c = 0.0;
    double setpoint_d = 0.0;
    friend bool operator==(const SetpointRow&, const SetpointRow&) = default;
};

std::vector<SetpointRow> setpoint_rows(const Schedule& case_c, const Schedule& case_d, int first_clock_hour);
void write_setpoints_csv(const std::filesystem::path& path, const std::vector<SetpointRow>& rows);
std::vector<SetpointRow> read_setpoints_csv(const std::filesystem::path& path);

void write_transfers_csv(const std::filesystem::path& path, const TransferReport& report);
TransferReport read_transfers_csv(const std::filesystem::path& path);

/// Schedule as CSV: hour, setpoint, then one 0/1 column per appliance.
void write_schedule_csv(const std::filesystem::path& path, const Schedule& schedule, const CaseConfig& cfg);

/// JSON summary of one or more case reports plus an arbitrary config echo.
std::string summary_json(const std::vector<CaseReport>& reports, const std::string& config_echo_json);

}  // namespace hems

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hems/arx.hpp"
#include "hems/robust.hpp"
#include "hems/types.hpp"

namespace hems {

/// Decision variables: on/off flags per appliance and hour, plus one AC
/// setpoint per hour.
struct Schedule {
    std::vector<std::vector<std::uint8_t>> on;  // [appliance][hour], 0 or 1
    HorizonSeries setpoints;                    // degC

    std::size_t horizon() const noexcept { return setpoints.horizon(); }

    friend bool operator==(const Schedule&, const Schedule&) = default;
};

struct CaseConfig {
    Tariff tariff;
    std::vector<ApplianceSpec> appliances;
    HorizonSeries non_shiftable;   // kW
    HorizonSeries misc;            // kW
    HorizonSeries desired_demand;  // kW, utility target per hour
    double desired_temp = 23.33;
    double dev_cap = 5.22;
    double total_dev_cap = 19.44;
    UncertainParam occupancy;      // nominal is the (normalized) forecast
    std::vector<double> demand_deviation;  // fraction of the hour's demand, default 0.1
    ArxModel arx;
    HorizonSeries outdoor_temp;    // degC
    std::vector<double> ac_warmup; // AC load (kW) before hour 1, most recent last
    int first_clock_hour = 1;      // clock label of hour 1 in reports

    std::size_t horizon() const noexcept { return tariff.rate.horizon(); }

    /// Throws ValidationError naming the first inconsistent field.
    void validate() const;
};

/// Per-hour demand components produced by a schedule.
struct DemandProfile {
    std::vector<double> shift;
    std::vector<double> ac;
    std::vector<double> non_ac;
    HorizonSeries total;
};

struct ObjectiveVector {
    double o1 = 0.0;  // demand above target, kW
    double o2 = 0.0;  // setpoint deviation weighted by occupancy
    double o3 = 0.0;  // consumer cost including incentive/penalty, $

    std::array<double, 3> as_array() const noexcept { return {o1, o2, o3}; }
    friend bool operator==(const ObjectiveVector&, const ObjectiveVector&) = default;
};

struct Violation {
    std::string constraint;  // e.g. "cycle_length", "contiguity", "total_deviation"
    int appliance = -1;      // index, -1 when not appliance-specific
    int hour = 0;            // 1-based, 0 when not hour-specific
    std::string message;
};

struct Verdict {
    bool feasible = true;
    std::vector<Violation> violations;
};

/// Preferred-start appliance blocks with every setpoint at the desired
/// temperature; the no-demand-response operating point.
Schedule baseline_schedule(const CaseConfig& cfg);

/// Runs the load model for a schedule. Occupancy defaults to the nominal
/// forecast; pass another series to evaluate a perturbed realization.
/// AC load is recursive: each hour's prediction feeds the next.
DemandProfile derive_demand(const Schedule& schedule, const CaseConfig& cfg);
DemandProfile derive_demand(const Schedule& schedule, const CaseConfig& cfg,
                            std::span<const double> occupancy);

/// Energy cost with purchased power equal to demand.
double cost_case_a(const HorizonSeries& demand, const Tariff& tariff);

struct RobustCost {
    double nominal = 0.0;
    double demand_penalty = 0.0;
    double occupancy_penalty = 0.0;
    double total = 0.0;
    HorizonSeries purchased;  // binding purchased power, sum(rate * purchased) == total
};

/// Robust energy cost of a schedule with budgets on the demand and occupancy
/// deviations. Demand deviations are fractions of each hour's demand;
/// occupancy deviations reach the bill through the ARX occupancy
/// coefficients with the lagged AC load held at its nominal value.
RobustCost robust_cost(const Schedule& schedule, const CaseConfig& cfg, double gamma_demand,
                       double gamma_occ);

/// robust_cost of the baseline schedule.
RobustCost robust_cost_case_b(const CaseConfig& cfg, double gamma_demand, double gamma_occ);

ObjectiveVector objectives_case_c(const Schedule& schedule, const CaseConfig& cfg);
ObjectiveVector objectives_case_c(const DemandProfile& demand, const Schedule& schedule,
                                  const CaseConfig& cfg);

/// Robust counterparts of the three case-c objectives. Demand deviations are
/// recomputed from the candidate's own demand.
ObjectiveVector objectives_case_d(const Schedule& schedule, const CaseConfig& cfg,
                                  double gamma_demand, double gamma_occ);

/// Cycle length, contiguity (checked through the running-sum recursion) and
/// window bounds per appliance. Never throws for dimension-consistent input.
Verdict check_shift_constraints(const std::vector<std::vector<std::uint8_t>>& on,
                                const std::vector<ApplianceSpec>& appliances);

/// Per-hour cap, total cap and no-overcooling rule on the setpoints.
/// Comparisons allow 1e-9 degC of rounding slack.
Verdict check_ac_constraints(const HorizonSeries& setpoints, const CaseConfig& cfg);

inline constexpr double kConstraintSlack = 1e-9;

}  // namespace hems

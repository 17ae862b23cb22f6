#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hems/arx.hpp"
#include "hems/moga.hpp"
#include "hems/objectives.hpp"

namespace hems {

struct UncertaintySpec {
    double demand_deviation = 0.1;     // fraction of each hour's demand
    double occupancy_deviation = 0.1;  // fraction of each hour's occupancy
    std::vector<double> budgets = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
};

struct RunConfig {
    std::filesystem::path base_dir;  // relative paths resolve against this
    std::size_t horizon = kDefaultHorizon;
    int first_clock_hour = 1;

    std::vector<double> tariff_rate;           // $/kWh, inline or from tariff_file
    std::filesystem::path tariff_file;         // CSV "hour,rate"
    double penalty_reward = 0.0;
    std::vector<ApplianceSpec> appliances;
    std::vector<double> non_shiftable_kw;
    std::vector<double> misc_kw;
    std::vector<double> desired_demand_kw;
    std::vector<double> outdoor_temp_c;
    std::vector<double> occupancy;             // normalized forecast
    std::vector<double> ac_warmup_kw;

    double desired_temp = 23.33;
    double dev_cap = 5.22;
    double total_dev_cap = 19.44;
    UncertaintySpec uncertainty;

    std::vector<int> arx_lags{1};
    std::optional<ArxModel> arx;               // inline coefficients
    std::filesystem::path arx_training_file;   // or fit from an AC log

    GaParams ga;
    std::uint64_t forecast_seed = 0;
    std::uint64_t synth_seed = 7;
    std::filesystem::path history_file;        // timestamp,demand_kw,occupancy

    /// Throws ValidationError naming the offending field.
    void validate() const;

    std::filesystem::path resolve(const std::filesystem::path& p) const;

    /// Assembles the case inputs; fits the ARX model when only a training
    /// file is given. Throws ValidationError naming a missing field.
    CaseConfig case_config() const;

    /// The effective configuration as JSON text (resolved defaults included).
    std::string to_json() const;
};

/// Parses and validates a JSON config. Syntax errors raise ParseError with
/// the 1-based line; missing referenced files raise PathError naming them.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = ".");

/// AC log columns: timestamp, ac_kw, outdoor_temp_c, occupancy, setpoint_c.
ArxModel fit_arx_from_log(const std::filesystem::path& path, const std::vector<int>& lags);

}  // namespace hems

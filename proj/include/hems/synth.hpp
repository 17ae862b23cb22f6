#pragma once

#include <cstdint>
#include <filesystem>

#include "hems/arx.hpp"
#include "hems/csv.hpp"

namespace hems {

enum class SynthProfile { summer_weekday };

struct SyntheticData {
    TimeSeriesTable history;  // demand_kw, occupancy (persons)
    TimeSeriesTable weather;  // outdoor_temp_c
    TimeSeriesTable ac_log;   // ac_kw, outdoor_temp_c, occupancy (normalized), setpoint_c
    ArxModel true_arx;        // the cooling model the AC log was drawn from
};

inline constexpr double kSynthHouseholdSize = 4.0;

/// Hourly summer data for a household of usually three people. Occupancy is
/// an integer in 0..4 and mostly non-zero; demand tracks occupancy; outdoor
/// temperature peaks mid-afternoon. Identical for identical arguments.
SyntheticData generate_synthetic(std::uint64_t seed, SynthProfile profile = SynthProfile::summer_weekday,
                                 int days = 56);

/// Writes history.csv, weather.csv and ac_log.csv into `dir` (created if needed).
void write_synthetic(const std::filesystem::path& dir, const SyntheticData& data);

}  // namespace hems

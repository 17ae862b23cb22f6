#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace hems {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// Whole-field parse; throws ValidationError on trailing junk or an empty field.
double parse_double(std::string_view text);

/// Plain comma-separated table with a header row. Cells may not contain
/// commas, quotes or newlines.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Throws ValidationError when the column is absent.
    std::size_t column_index(std::string_view name) const;
    std::vector<double> numeric_column(std::string_view name) const;
};

/// Throws PathError when the file cannot be opened and ParseError (with the
/// 1-based line) on a ragged row.
CsvTable read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Hours since 1970-01-01T00:00 for "YYYY-MM-DDTHH:MM[:SS]" (a space may
/// replace the T). Minutes and seconds must be zero. Throws ValidationError.
std::int64_t parse_hour_stamp(std::string_view text);
std::string format_hour_stamp(std::int64_t hours);

struct TimeGap {
    std::size_t row = 0;       // 1-based data row after the gap
    std::string before;
    std::string after;
    std::int64_t missing_hours = 0;
};

/// Hourly table keyed by timestamp; `columns[i]` holds the values of `names[i]`.
struct TimeSeriesTable {
    std::vector<std::string> timestamps;
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;
    std::vector<TimeGap> gaps;

    std::size_t size() const noexcept { return timestamps.size(); }
    const std::vector<double>& column(std::string_view name) const;

    /// Throws InsufficientDataError listing every gap, if there is any.
    void require_contiguous() const;
};

/// Reads a "timestamp,<expected...>" file. The header must match exactly.
/// Timestamps must strictly increase in whole hours; jumps of more than one
/// hour are recorded in `gaps`. Errors carry the 1-based data row index.
TimeSeriesTable load_timeseries_csv(const std::filesystem::path& path,
                                    const std::vector<std::string>& expected_columns);

void write_timeseries_csv(const std::filesystem::path& path, const TimeSeriesTable& table);

}  // namespace hems

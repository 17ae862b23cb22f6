#include "hems/csv.hpp"

#include <charconv>
#include <cstdio>
#include <chrono>
#include <fstream>
#include <sstream>
#include <system_error>

#include "hems/error.hpp"

namespace hems {

namespace {

std::vector<std::string> split_line(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.emplace_back(line.substr(start));
            return cells;
        }
        cells.emplace_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::string row_error(std::size_t row, const std::string& what) {
    std::ostringstream os;
    os << "row " << row << ": " << what;
    return os.str();
}

int parse_fixed(std::string_view text, std::size_t pos, std::size_t len) {
    int v = 0;
    const auto* first = text.data() + pos;
    const auto [ptr, ec] = std::from_chars(first, first + len, v);
    if (ec != std::errc{} || ptr != first + len) throw ValidationError("bad timestamp '" + std::string(text) + "'");
    return v;
}

}  // namespace

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) throw ValidationError("format_double: conversion failed");
    return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
        throw ValidationError("not a number: '" + std::string(text) + "'");
    return v;
}

std::size_t CsvTable::column_index(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw ValidationError("csv: missing column '" + std::string(name) + "'");
}

std::vector<double> CsvTable::numeric_column(std::string_view name) const {
    const std::size_t c = column_index(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        try {
            out.push_back(parse_double(rows[r][c]));
        } catch (const ValidationError& e) {
            throw ParseError(row_error(r + 1, e.what()), r + 2);
        }
    }
    return out;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw PathError("cannot open '" + path.string() + "'", path.string());
    CsvTable t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split_line(line);
        if (t.header.empty()) {
            t.header = std::move(cells);
            continue;
        }
        if (cells.size() != t.header.size()) {
            std::ostringstream os;
            os << path.string() << ":" << lineno << ": expected " << t.header.size() << " fields, got "
               << cells.size();
            throw ParseError(os.str(), lineno);
        }
        t.rows.push_back(std::move(cells));
    }
    if (t.header.empty()) throw ParseError(path.string() + ": empty file", 1);
    return t;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
    auto check = [](const std::string& cell) {
        if (cell.find_first_of(",\"\n\r") != std::string::npos)
            throw ValidationError("csv: cell contains a separator: '" + cell + "'");
    };
    std::ofstream out(path, std::ios::binary);
    if (!out) throw PathError("cannot write '" + path.string() + "'", path.string());
    auto emit = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            check(cells[i]);
            if (i) out << ',';
            out << cells[i];
        }
        out << '\n';
    };
    emit(table.header);
    for (const auto& r : table.rows) {
        if (r.size() != table.header.size()) throw ValidationError("csv: row width differs from header");
        emit(r);
    }
    if (!out) throw PathError("write failed for '" + path.string() + "'", path.string());
}

std::int64_t parse_hour_stamp(std::string_view text) {
    // YYYY-MM-DDTHH:MM[:SS]
    if (text.size() != 16 && text.size() != 19) throw ValidationError("bad timestamp '" + std::string(text) + "'");
    if (text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') || text[13] != ':' ||
        (text.size() == 19 && text[16] != ':'))
        throw ValidationError("bad timestamp '" + std::string(text) + "'");
    const int y = parse_fixed(text, 0, 4);
    const int mo = parse_fixed(text, 5, 2);
    const int d = parse_fixed(text, 8, 2);
    const int h = parse_fixed(text, 11, 2);
    const int mi = parse_fixed(text, 14, 2);
    const int s = text.size() == 19 ? parse_fixed(text, 17, 2) : 0;
    using namespace std::chrono;
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23) throw ValidationError("invalid date/time '" + std::string(text) + "'");
    if (mi != 0 || s != 0) throw ValidationError("timestamp is not on the hour: '" + std::string(text) + "'");
    return static_cast<std::int64_t>(sys_days{ymd}.time_since_epoch().count()) * 24 + h;
}

std::string format_hour_stamp(std::int64_t hours) {
    using namespace std::chrono;
    std::int64_t days = hours / 24;
    std::int64_t h = hours % 24;
    if (h < 0) {
        h += 24;
        --days;
    }
    const year_month_day ymd{sys_days{std::chrono::days{days}}};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:00:00", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), static_cast<int>(h));
    return buf;
}

const std::vector<double>& TimeSeriesTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return columns[i];
    throw ValidationError("series: missing column '" + std::string(name) + "'");
}

void TimeSeriesTable::require_contiguous() const {
    if (gaps.empty()) return;
    std::ostringstream os;
    os << gaps.size() << " gap(s) in hourly series:";
    for (const auto& g : gaps)
        os << " [row " << g.row << ": " << g.before << " -> " << g.after << ", " << g.missing_hours
           << " missing]";
    throw InsufficientDataError(os.str());
}

TimeSeriesTable load_timeseries_csv(const std::filesystem::path& path,
                                    const std::vector<std::string>& expected_columns) {
    const CsvTable raw = read_csv(path);
    std::vector<std::string> want{"timestamp"};
    want.insert(want.end(), expected_columns.begin(), expected_columns.end());
    if (raw.header != want) {
        std::string got, exp;
        for (const auto& c : raw.header) got += (got.empty() ? "" : ",") + c;
        for (const auto& c : want) exp += (exp.empty() ? "" : ",") + c;
        throw ParseError(path.string() + ": header '" + got + "' does not match '" + exp + "'", 1);
    }
    TimeSeriesTable t;
    t.names = expected_columns;
    t.columns.assign(expected_columns.size(), {});
    std::int64_t prev = 0;
    for (std::size_t r = 0; r < raw.rows.size(); ++r) {
        const std::size_t row = r + 1;
        const auto& cells = raw.rows[r];
        std::int64_t stamp = 0;
        try {
            stamp = parse_hour_stamp(cells[0]);
        } catch (const ValidationError& e) {
            throw ParseError(path.string() + ": " + row_error(row, e.what()), row + 1);
        }
        if (r > 0) {
            if (stamp == prev)
                throw ParseError(path.string() + ": " + row_error(row, "duplicated timestamp " + cells[0]), row + 1);
            if (stamp < prev)
                throw ParseError(path.string() + ": " + row_error(row, "timestamp goes backwards " + cells[0]),
                                 row + 1);
            if (stamp > prev + 1) t.gaps.push_back({row, raw.rows[r - 1][0], cells[0], stamp - prev - 1});
        }
        prev = stamp;
        t.timestamps.push_back(cells[0]);
        for (std::size_t c = 0; c < expected_columns.size(); ++c) {
            try {
                t.columns[c].push_back(parse_double(cells[c + 1]));
            } catch (const ValidationError& e) {
                throw ParseError(path.string() + ": " + row_error(row, expected_columns[c] + ": " + e.what()),
                                 row + 1);
            }
        }
    }
    return t;
}

void write_timeseries_csv(const std::filesystem::path& path, const TimeSeriesTable& table) {
    CsvTable out;
    out.header.push_back("timestamp");
    out.header.insert(out.header.end(), table.names.begin(), table.names.end());
    for (std::size_t r = 0; r < table.size(); ++r) {
        std::vector<std::string> row{table.timestamps[r]};
        for (const auto& col : table.columns) row.push_back(format_double(col[r]));
        out.rows.push_back(std::move(row));
    }
    write_csv(path, out);
}

}  // namespace hems

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hems {

inline constexpr std::size_t kDefaultHorizon = 12;

enum class Unit { kilowatt, persons, dollars_per_kwh, celsius };

std::string_view to_string(Unit unit) noexcept;

/// Fixed-length hourly series. Index 0 is the first hour of the horizon.
///
/// kW and persons series must be non-negative; every value must be finite.
class HorizonSeries {
public:
    HorizonSeries() = default;
    HorizonSeries(std::vector<double> values, Unit unit);

    static HorizonSeries constant(std::size_t horizon, double value, Unit unit);

    std::size_t horizon() const noexcept { return values_.size(); }
    Unit unit() const noexcept { return unit_; }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t h) const { return values_[h]; }

    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    double sum() const noexcept;

    friend bool operator==(const HorizonSeries&, const HorizonSeries&) = default;

private:
    std::vector<double> values_;
    Unit unit_ = Unit::kilowatt;
};

/// A shiftable appliance. Window bounds are 1-based hour indices, inclusive.
/// `preferred_start` is where the consumer runs it without demand response.
struct ApplianceSpec {
    std::string name;
    double power_kw = 0.0;
    int cycle_len = 1;
    int window_start = 1;
    int window_end = 1;
    int preferred_start = 1;

    /// Throws ValidationError if the cycle does not fit the window or the
    /// window does not fit the horizon.
    void validate(std::size_t horizon) const;

    int latest_start() const noexcept { return window_end - cycle_len + 1; }
};

struct Tariff {
    HorizonSeries rate;            // $/kWh per hour, strictly positive
    double penalty_reward = 0.0;   // $/kWh, same for fines and rewards

    void validate() const;
};

}  // namespace hems

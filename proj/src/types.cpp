#include "hems/types.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "hems/error.hpp"

namespace hems {

std::string_view to_string(Unit unit) noexcept {
    switch (unit) {
        case Unit::kilowatt: return "kW";
        case Unit::persons: return "persons";
        case Unit::dollars_per_kwh: return "$/kWh";
        case Unit::celsius: return "degC";
    }
    return "?";
}

HorizonSeries::HorizonSeries(std::vector<double> values, Unit unit)
    : values_(std::move(values)), unit_(unit) {
    const bool nonneg = unit == Unit::kilowatt || unit == Unit::persons;
    for (std::size_t h = 0; h < values_.size(); ++h) {
        const double v = values_[h];
        if (!std::isfinite(v) || (nonneg && v < 0.0)) {
            std::ostringstream os;
            os << "series value at hour " << h + 1 << " is " << v << " (unit "
               << to_string(unit) << ")";
            throw DomainError(os.str());
        }
    }
}

HorizonSeries HorizonSeries::constant(std::size_t horizon, double value, Unit unit) {
    return HorizonSeries(std::vector<double>(horizon, value), unit);
}

double HorizonSeries::sum() const noexcept {
    return std::accumulate(values_.begin(), values_.end(), 0.0);
}

void ApplianceSpec::validate(std::size_t horizon) const {
    std::ostringstream os;
    os << "appliance '" << name << "': ";
    if (!(power_kw >= 0.0) || !std::isfinite(power_kw)) {
        os << "power must be non-negative";
        throw ValidationError(os.str());
    }
    if (window_start < 1 || window_end < window_start ||
        window_end > static_cast<int>(horizon)) {
        os << "window [" << window_start << ", " << window_end
           << "] must satisfy 1 <= start <= end <= " << horizon;
        throw ValidationError(os.str());
    }
    if (cycle_len < 1 || cycle_len > window_end - window_start + 1) {
        os << "cycle length " << cycle_len << " does not fit window [" << window_start
           << ", " << window_end << "]";
        throw ValidationError(os.str());
    }
    if (preferred_start < window_start || preferred_start > latest_start()) {
        os << "preferred start " << preferred_start << " must lie in [" << window_start
           << ", " << latest_start() << "]";
        throw ValidationError(os.str());
    }
}

void Tariff::validate() const {
    for (std::size_t h = 0; h < rate.horizon(); ++h) {
        if (!(rate[h] > 0.0)) {
            std::ostringstream os;
            os << "tariff rate at hour " << h + 1 << " must be strictly positive";
            throw ValidationError(os.str());
        }
    }
    if (!(penalty_reward >= 0.0) || !std::isfinite(penalty_reward))
        throw ValidationError("penalty_reward must be non-negative");
}

}  // namespace hems

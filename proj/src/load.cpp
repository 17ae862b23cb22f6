#include "hems/load.hpp"

#include <cmath>
#include <string>

#include "hems/error.hpp"

namespace hems {

DemandSplit decompose_load(double shift, double n_shift, double mis, double ac) {
    const double parts[] = {shift, n_shift, mis, ac};
    const char* names[] = {"shiftable", "non-shiftable", "miscellaneous", "AC"};
    for (int i = 0; i < 4; ++i) {
        if (!std::isfinite(parts[i]) || parts[i] < 0.0)
            throw DomainError(std::string(names[i]) + " load must be a non-negative number");
    }
    const double non_ac = shift + n_shift + mis;
    return {non_ac + ac, non_ac};
}

}  // namespace hems

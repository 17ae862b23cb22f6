#pragma once

namespace hems {

/// One hour of household demand split into its parts (kW).
struct DemandSplit {
    double total = 0.0;   // shift + non-shift + misc + AC
    double non_ac = 0.0;  // everything except the AC load
};

/// Adds the four load categories. Throws DomainError on a negative or
/// non-finite input.
DemandSplit decompose_load(double shift, double n_shift, double mis, double ac);

}  // namespace hems

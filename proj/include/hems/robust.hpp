#pragma once

#include <span>
#include <vector>

#include "hems/types.hpp"

namespace hems {

/// Box-plus-budget uncertainty on one hourly parameter: each entry may move
/// by at most `deviation[h]` from `nominal[h]`, and the scaled moves may sum
/// (in absolute value) to at most `budget`.
struct UncertainParam {
    HorizonSeries nominal;
    std::vector<double> deviation;
    double budget = 0.0;

    /// Deviation = fraction * |nominal| for every hour.
    static UncertainParam with_fraction(HorizonSeries nominal, double fraction, double budget = 0.0);

    std::size_t size() const noexcept { return deviation.size(); }

    /// Throws ValidationError on size mismatch, negative deviation, or a
    /// budget outside [0, size()].
    void validate() const;
};

/// Explicit auxiliary split of a deviation vector, `z + w == deviation`.
struct RobustSplit {
    std::vector<double> z;
    std::vector<double> w;
    double value = 0.0;  // sum|z| + budget * max|w|
};

/// Worst-case increase of a linear term whose coefficients may each move by
/// |deviations[l]|, with at most `budget` of them moving in total.
///
/// Equals min over z + w = deviations of sum|z_l| + budget * max|w_l|, which
/// is the sum of the floor(budget) largest magnitudes plus the fractional
/// remainder of budget times the next largest. O(L log L).
///
/// Throws ValidationError if budget is outside [0, L] or any entry is not finite.
double robust_penalty(std::span<const double> deviations, double budget);

/// The (z, w) split achieving robust_penalty. The threshold t is the
/// ceil(budget)-th largest magnitude; w is the deviation clipped to [-t, t]
/// and z the overflow beyond it.
RobustSplit robust_penalty_dual(std::span<const double> deviations, double budget);

/// A maximizer zeta of deviations . zeta over the budget set: sign(d_l) on
/// the floor(budget) largest magnitudes, the fractional remainder (signed) on
/// the next one, zero elsewhere. Ties go to the lower index.
std::vector<double> worst_case_perturbation(std::span<const double> deviations, double budget);

/// Tight bound for |value| in the linearized form -bound <= value <= bound.
inline double linearize_abs(double value) noexcept { return value < 0.0 ? -value : value; }

/// Nominal shifted by its full deviation in the cost-increasing direction.
HorizonSeries perturb_worst_case(const UncertainParam& param);

}  // namespace hems

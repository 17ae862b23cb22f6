#include "hems/robust.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "hems/error.hpp"

namespace hems {

UncertainParam UncertainParam::with_fraction(HorizonSeries nominal, double fraction, double budget) {
    UncertainParam p;
    p.deviation.reserve(nominal.horizon());
    for (double v : nominal) p.deviation.push_back(fraction * std::abs(v));
    p.nominal = std::move(nominal);
    p.budget = budget;
    return p;
}

void UncertainParam::validate() const {
    if (deviation.size() != nominal.horizon())
        throw ValidationError("uncertain parameter: deviation length differs from nominal");
    for (double d : deviation)
        if (!(d >= 0.0) || !std::isfinite(d))
            throw ValidationError("uncertain parameter: deviations must be non-negative");
    if (!(budget >= 0.0) || budget > static_cast<double>(deviation.size()))
        throw ValidationError("uncertain parameter: budget outside [0, L]");
}

namespace {

void check_budget(std::span<const double> deviations, double budget) {
    const auto count = static_cast<double>(deviations.size());
    if (!(budget >= 0.0) || budget > count) {
        std::ostringstream os;
        os << "budget " << budget << " outside [0, " << deviations.size() << "]";
        throw ValidationError(os.str());
    }
    for (double d : deviations)
        if (!std::isfinite(d)) throw ValidationError("deviation vector contains a non-finite entry");
}

std::vector<double> sorted_magnitudes(std::span<const double> deviations) {
    std::vector<double> mag(deviations.size());
    std::transform(deviations.begin(), deviations.end(), mag.begin(),
                   [](double d) { return std::abs(d); });
    std::sort(mag.begin(), mag.end(), std::greater<>());
    return mag;
}

}  // namespace

double robust_penalty(std::span<const double> deviations, double budget) {
    check_budget(deviations, budget);
    if (budget == 0.0 || deviations.empty()) return 0.0;
    const auto mag = sorted_magnitudes(deviations);
    const auto whole = static_cast<std::size_t>(std::floor(budget));
    double value = 0.0;
    for (std::size_t l = 0; l < whole; ++l) value += mag[l];
    const double frac = budget - static_cast<double>(whole);
    if (frac > 0.0 && whole < mag.size()) value += frac * mag[whole];
    return value;
}

RobustSplit robust_penalty_dual(std::span<const double> deviations, double budget) {
    check_budget(deviations, budget);
    RobustSplit split;
    split.z.assign(deviations.size(), 0.0);
    split.w.assign(deviations.begin(), deviations.end());
    if (deviations.empty()) return split;

    const auto mag = sorted_magnitudes(deviations);
    const auto rank = static_cast<std::size_t>(std::ceil(budget));
    const double threshold = rank == 0 ? mag.front() : mag[rank - 1];

    double z_sum = 0.0;
    double w_max = 0.0;
    for (std::size_t l = 0; l < deviations.size(); ++l) {
        const double d = deviations[l];
        const double w = std::clamp(d, -threshold, threshold);
        split.w[l] = w;
        split.z[l] = d - w;
        z_sum += std::abs(split.z[l]);
        w_max = std::max(w_max, std::abs(w));
    }
    split.value = z_sum + budget * w_max;
    return split;
}

std::vector<double> worst_case_perturbation(std::span<const double> deviations, double budget) {
    check_budget(deviations, budget);
    std::vector<std::size_t> order(deviations.size());
    for (std::size_t l = 0; l < order.size(); ++l) order[l] = l;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(deviations[a]) > std::abs(deviations[b]);
    });
    std::vector<double> zeta(deviations.size(), 0.0);
    const auto whole = static_cast<std::size_t>(std::floor(budget));
    const double frac = budget - static_cast<double>(whole);
    for (std::size_t r = 0; r < order.size() && r <= whole; ++r) {
        const std::size_t l = order[r];
        const double sign = deviations[l] < 0.0 ? -1.0 : 1.0;
        zeta[l] = r < whole ? sign : sign * frac;
    }
    return zeta;
}

HorizonSeries perturb_worst_case(const UncertainParam& param) {
    param.validate();
    std::vector<double> v(param.nominal.begin(), param.nominal.end());
    for (std::size_t h = 0; h < v.size(); ++h) v[h] += param.deviation[h];
    return HorizonSeries(std::move(v), param.nominal.unit());
}

}  // namespace hems

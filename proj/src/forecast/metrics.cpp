#include "hems/forecast/metrics.hpp"

#include <cmath>
#include <tuple>

#include "hems/error.hpp"

namespace hems::forecast {

std::string_view to_string(ModelKind kind) noexcept {
    switch (kind) {
        case ModelKind::random_forest: return "rf";
        case ModelKind::gbm: return "gbm";
        case ModelKind::mlp: return "mlp";
    }
    return "?";
}

std::optional<ModelKind> parse_model_kind(std::string_view name) noexcept {
    if (name == "rf" || name == "random_forest") return ModelKind::random_forest;
    if (name == "gbm") return ModelKind::gbm;
    if (name == "mlp") return ModelKind::mlp;
    return std::nullopt;
}

MetricReport evaluate_metrics(std::span<const double> predicted, std::span<const double> actual) {
    if (predicted.size() != actual.size())
        throw ValidationError("metrics: predicted and actual lengths differ");
    if (actual.empty()) throw ValidationError("metrics: need at least one sample");
    double sq = 0.0, abs_sum = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double e = predicted[i] - actual[i];
        sq += e * e;
        abs_sum += std::abs(e);
    }
    const auto n = static_cast<double>(actual.size());
    MetricReport r;
    r.mse = sq / n;
    r.rmse = std::sqrt(r.mse);
    r.mae = abs_sum / n;
    return r;
}

ModelKind select_best_model(const std::map<ModelKind, MetricReport>& reports) {
    if (reports.empty()) throw ValidationError("select_best_model: no reports");
    // std::map iterates in enum order, so strict comparison keeps the first on ties.
    auto best = reports.begin();
    for (auto it = std::next(reports.begin()); it != reports.end(); ++it) {
        const auto& a = it->second;
        const auto& b = best->second;
        if (std::tie(a.rmse, a.mae, a.mse) < std::tie(b.rmse, b.mae, b.mse)) best = it;
    }
    return best->first;
}

}  // namespace hems::forecast

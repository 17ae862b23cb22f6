#pragma once

#include <map>
#include <optional>
#include <span>
#include <string_view>

namespace hems::forecast {

enum class ModelKind { random_forest, gbm, mlp };

std::string_view to_string(ModelKind kind) noexcept;
std::optional<ModelKind> parse_model_kind(std::string_view name) noexcept;

struct MetricReport {
    double mse = 0.0;
    double rmse = 0.0;
    double mae = 0.0;
};

/// Throws ValidationError when the lengths differ or are zero.
MetricReport evaluate_metrics(std::span<const double> predicted, std::span<const double> actual);

/// Lowest RMSE, then MAE, then MSE, then the enum order above.
/// Throws ValidationError on an empty map.
ModelKind select_best_model(const std::map<ModelKind, MetricReport>& reports);

}  // namespace hems::forecast

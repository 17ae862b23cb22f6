#pragma once

#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "hems/forecast/dataset.hpp"
#include "hems/forecast/ensemble.hpp"
#include "hems/forecast/metrics.hpp"
#include "hems/forecast/mlp.hpp"

namespace hems::forecast {

/// A fitted occupancy regressor of any of the three kinds.
class ForecastModel {
public:
    explicit ForecastModel(RandomForest m) : impl_(std::move(m)) {}
    explicit ForecastModel(GradientBoosting m) : impl_(std::move(m)) {}
    explicit ForecastModel(Mlp m) : impl_(std::move(m)) {}

    ModelKind kind() const noexcept { return static_cast<ModelKind>(impl_.index()); }

    std::vector<double> predict(const Eigen::MatrixXd& x) const {
        return std::visit([&](const auto& m) { return m.predict(x); }, impl_);
    }

    template <class T>
    const T& as() const { return std::get<T>(impl_); }

private:
    std::variant<RandomForest, GradientBoosting, Mlp> impl_;  // order matches ModelKind
};

ForecastModel fit_random_forest(const SupervisedDataset& data, int n_trees, MaxFeatures max_features,
                                std::uint64_t seed, Exec exec = Exec::parallel);
ForecastModel fit_gbm(const SupervisedDataset& data, int n_trees, double learning_rate, int num_leaves,
                      std::uint64_t seed);
ForecastModel fit_mlp(const SupervisedDataset& data, const MlpConfig& config);

struct ForecastOptions {
    std::set<ModelKind> models{ModelKind::random_forest, ModelKind::gbm, ModelKind::mlp};
    int lag_count = 13;  // 13 lags + 2 hour-of-day columns = 15 network inputs
    double test_fraction = 0.2;
    std::size_t horizon = 12;
    int first_hour_of_day = 0;
    std::uint64_t seed = 0;
    ForestParams forest;
    GbmParams gbm;
    MlpConfig mlp;
};

struct ForecastRun {
    std::map<ModelKind, MetricReport> reports;  // test-partition metrics
    ModelKind best = ModelKind::random_forest;
    std::vector<std::size_t> hours;   // indices into the input history
    std::vector<double> forecast;     // best model, persons
    std::vector<double> normalized;   // forecast / max training occupancy
    std::vector<double> actual;
    double normalizer = 1.0;
    std::vector<std::string> zero_variance_features;
};

/// Builds features, fits every requested model on the chronological train
/// split, scores them on the test split, and forecasts the last `horizon`
/// hours with the best one. Forecasts are clamped at zero persons.
ForecastRun run_forecast(std::span<const double> demand, std::span<const double> occupancy,
                         const ForecastOptions& options);

}  // namespace hems::forecast

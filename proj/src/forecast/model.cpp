#include "hems/forecast/model.hpp"

#include <algorithm>

#include "hems/error.hpp"

namespace hems::forecast {

ForecastModel fit_random_forest(const SupervisedDataset& data, int n_trees, MaxFeatures max_features,
                                std::uint64_t seed, Exec exec) {
    ForestParams p;
    p.n_trees = n_trees;
    p.max_features = max_features;
    p.seed = seed;
    p.exec = exec;
    return ForecastModel(RandomForest::fit(data, p));
}

ForecastModel fit_gbm(const SupervisedDataset& data, int n_trees, double learning_rate, int num_leaves,
                      std::uint64_t seed) {
    GbmParams p;
    p.n_trees = n_trees;
    p.learning_rate = learning_rate;
    p.num_leaves = num_leaves;
    p.seed = seed;
    return ForecastModel(GradientBoosting::fit(data, p));
}

ForecastModel fit_mlp(const SupervisedDataset& data, const MlpConfig& config) {
    return ForecastModel(Mlp::fit(data, config));
}

ForecastRun run_forecast(std::span<const double> demand, std::span<const double> occupancy,
                         const ForecastOptions& options) {
    if (options.models.empty()) throw ValidationError("forecast: no models requested");
    SupervisedDataset data = build_features(demand, occupancy, options.lag_count, options.first_hour_of_day);
    split_chronological(data, options.test_fraction);
    if (data.train_rows.size() < 2) throw InsufficientDataError("forecast: fewer than 2 training rows");
    if (data.test_rows.empty()) throw InsufficientDataError("forecast: empty test partition");
    if (options.horizon == 0 || options.horizon > data.size())
        throw InsufficientDataError("forecast: horizon longer than the feature table");

    ForecastRun run;
    for (std::size_t c : data.zero_variance_columns()) run.zero_variance_features.push_back(data.feature_names[c]);

    Eigen::MatrixXd x_test(static_cast<Eigen::Index>(data.test_rows.size()), data.features.cols());
    std::vector<double> y_test;
    for (std::size_t i = 0; i < data.test_rows.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(data.test_rows[i]);
        x_test.row(static_cast<Eigen::Index>(i)) = data.features.row(r);
        y_test.push_back(data.targets(r));
    }

    std::map<ModelKind, ForecastModel> fitted;
    for (ModelKind kind : options.models) {
        switch (kind) {
            case ModelKind::random_forest: {
                ForestParams p = options.forest;
                p.seed = options.seed;
                fitted.emplace(kind, ForecastModel(RandomForest::fit(data, p)));
                break;
            }
            case ModelKind::gbm: {
                GbmParams p = options.gbm;
                p.seed = options.seed;
                fitted.emplace(kind, ForecastModel(GradientBoosting::fit(data, p)));
                break;
            }
            case ModelKind::mlp:
                fitted.emplace(kind, ForecastModel(Mlp::fit(data, options.mlp)));
                break;
        }
        run.reports[kind] = evaluate_metrics(fitted.at(kind).predict(x_test), y_test);
    }
    run.best = select_best_model(run.reports);

    double max_train = 0.0;
    for (std::size_t r : data.train_rows) max_train = std::max(max_train, data.targets(static_cast<Eigen::Index>(r)));
    run.normalizer = max_train > 0.0 ? max_train : 1.0;

    const std::size_t first = data.size() - options.horizon;
    Eigen::MatrixXd x_h = data.features.bottomRows(static_cast<Eigen::Index>(options.horizon));
    const auto pred = fitted.at(run.best).predict(x_h);
    for (std::size_t i = 0; i < options.horizon; ++i) {
        const double p = std::max(0.0, pred[i]);
        run.hours.push_back(data.source_index[first + i]);
        run.forecast.push_back(p);
        run.normalized.push_back(p / run.normalizer);
        run.actual.push_back(data.targets(static_cast<Eigen::Index>(first + i)));
    }
    return run;
}

}  // namespace hems::forecast

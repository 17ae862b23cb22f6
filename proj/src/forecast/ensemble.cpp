#include "hems/forecast/ensemble.hpp"

#include <algorithm>
#include <cmath>

#include "hems/error.hpp"

namespace hems::forecast {

int resolve_max_features(MaxFeatures rule, int n_features) {
    switch (rule) {
        case MaxFeatures::all: return n_features;
        case MaxFeatures::sqrt: return std::max(1, static_cast<int>(std::sqrt(static_cast<double>(n_features))));
        case MaxFeatures::log2: return std::max(1, static_cast<int>(std::log2(static_cast<double>(n_features))));
    }
    return n_features;
}

RandomForest RandomForest::fit(const SupervisedDataset& data, const ForestParams& params) {
    data.validate();
    if (data.train_rows.empty()) throw ValidationError("random forest: empty training set");
    if (data.train_rows.size() < 2) throw InsufficientDataError("random forest: needs >= 2 training rows");
    if (params.n_trees < 1) throw ValidationError("random forest: n_trees must be >= 1");

    TreeParams tp = params.tree;
    tp.max_features = resolve_max_features(params.max_features, static_cast<int>(data.features.cols()));
    const std::span<const double> y(data.targets.data(), data.size());

    struct Draw {
        std::vector<std::size_t> rows;
        std::uint64_t seed;
    };
    Rng rng(params.seed);
    std::vector<Draw> draws(static_cast<std::size_t>(params.n_trees));
    const auto n = static_cast<long>(data.train_rows.size());
    for (auto& d : draws) {
        if (params.bootstrap) {
            d.rows.resize(data.train_rows.size());
            for (auto& r : d.rows) r = data.train_rows[static_cast<std::size_t>(rng.uniform_int(0, n - 1))];
        } else {
            d.rows = data.train_rows;
        }
        d.seed = rng.fork_seed();
    }

    RandomForest forest;
    forest.trees_.resize(draws.size());
    for_each_index(params.exec, draws.size(), [&](std::size_t t) {
        Rng tree_rng(draws[t].seed);
        forest.trees_[t] = RegressionTree::fit(data.features, y, draws[t].rows, tp, tree_rng);
    });
    return forest;
}

double RandomForest::predict_row(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
    double s = 0.0;
    for (const auto& t : trees_) s += t.predict(row);
    return s / static_cast<double>(trees_.size());
}

std::vector<double> RandomForest::predict(const Eigen::MatrixXd& x) const {
    std::vector<double> out(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index r = 0; r < x.rows(); ++r) out[static_cast<std::size_t>(r)] = predict_row(x.row(r));
    return out;
}

GradientBoosting GradientBoosting::fit(const SupervisedDataset& data, const GbmParams& params) {
    data.validate();
    if (!(params.learning_rate > 0.0 && params.learning_rate <= 1.0))
        throw ValidationError("gbm: learning_rate must lie in (0, 1]");
    if (data.train_rows.size() < 2) throw InsufficientDataError("gbm: needs >= 2 training rows");
    if (params.n_trees < 0) throw ValidationError("gbm: n_trees must be >= 0");
    if (!(params.feature_fraction > 0.0 && params.feature_fraction <= 1.0))
        throw ValidationError("gbm: feature_fraction must lie in (0, 1]");

    GradientBoosting model;
    model.learning_rate_ = params.learning_rate;
    const std::size_t n_rows = data.size();
    double sum = 0.0;
    for (std::size_t r : data.train_rows) sum += data.targets(static_cast<Eigen::Index>(r));
    model.base_ = sum / static_cast<double>(data.train_rows.size());

    // residual[r] is only meaningful for training rows.
    std::vector<double> pred(n_rows, model.base_), residual(n_rows, 0.0);
    auto train_mse = [&] {
        double s = 0.0;
        for (std::size_t r : data.train_rows) {
            const double e = data.targets(static_cast<Eigen::Index>(r)) - pred[r];
            s += e * e;
        }
        return s / static_cast<double>(data.train_rows.size());
    };
    model.stage_loss_.push_back(train_mse());

    TreeParams tp;
    tp.max_depth = params.max_depth;
    tp.max_leaves = params.num_leaves;
    tp.min_samples_leaf = params.min_samples_leaf;
    const int n_features = static_cast<int>(data.features.cols());
    tp.max_features = std::max(1, static_cast<int>(std::lround(params.feature_fraction * n_features)));

    Rng rng(params.seed);
    for (int stage = 0; stage < params.n_trees; ++stage) {
        for (std::size_t r : data.train_rows) residual[r] = data.targets(static_cast<Eigen::Index>(r)) - pred[r];
        auto tree = RegressionTree::fit(data.features, residual, data.train_rows, tp, rng);
        for (std::size_t r : data.train_rows)
            pred[r] += model.learning_rate_ * tree.predict(data.features.row(static_cast<Eigen::Index>(r)));
        model.trees_.push_back(std::move(tree));
        model.stage_loss_.push_back(train_mse());
    }
    return model;
}

double GradientBoosting::predict_row(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
    double s = 0.0;
    for (const auto& t : trees_) s += t.predict(row);
    return base_ + learning_rate_ * s;
}

std::vector<double> GradientBoosting::predict(const Eigen::MatrixXd& x) const {
    std::vector<double> out(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index r = 0; r < x.rows(); ++r) out[static_cast<std::size_t>(r)] = predict_row(x.row(r));
    return out;
}

}  // namespace hems::forecast

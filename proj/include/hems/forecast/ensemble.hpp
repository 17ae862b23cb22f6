#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hems/forecast/dataset.hpp"
#include "hems/forecast/tree.hpp"
#include "hems/parallel.hpp"

namespace hems::forecast {

enum class MaxFeatures { all, sqrt, log2 };

/// Number of features tried per split for a rule (at least 1).
int resolve_max_features(MaxFeatures rule, int n_features);

struct ForestParams {
    int n_trees = 400;
    MaxFeatures max_features = MaxFeatures::all;
    bool bootstrap = true;
    TreeParams tree;  // max_features is overwritten from the rule
    std::uint64_t seed = 0;
    Exec exec = Exec::parallel;
};

class RandomForest {
public:
    /// Fits on data.train_rows. Each tree's bootstrap sample and split
    /// seed are drawn up front from `params.seed`, in tree order, so the
    /// forest is the same for serial and parallel execution.
    static RandomForest fit(const SupervisedDataset& data, const ForestParams& params);

    double predict_row(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;
    std::vector<double> predict(const Eigen::MatrixXd& x) const;

    const std::vector<RegressionTree>& trees() const noexcept { return trees_; }

private:
    std::vector<RegressionTree> trees_;
};

struct GbmParams {
    int n_trees = 400;
    double learning_rate = 0.1;
    int num_leaves = 31;  // < 0: unbounded
    int max_depth = -1;
    int min_samples_leaf = 1;
    double feature_fraction = 1.0;  // share of features tried per split
    std::uint64_t seed = 0;
};

/// Squared-loss gradient boosting: base mean plus learning_rate times the
/// sum of trees, each fitted to the current residuals.
class GradientBoosting {
public:
    static GradientBoosting fit(const SupervisedDataset& data, const GbmParams& params);

    double predict_row(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;
    std::vector<double> predict(const Eigen::MatrixXd& x) const;

    /// Training MSE after 0, 1, ..., n_trees stages.
    const std::vector<double>& stage_loss() const noexcept { return stage_loss_; }
    double base() const noexcept { return base_; }
    std::size_t stages() const noexcept { return trees_.size(); }

private:
    double base_ = 0.0;
    double learning_rate_ = 0.1;
    std::vector<RegressionTree> trees_;
    std::vector<double> stage_loss_;
};

}  // namespace hems::forecast

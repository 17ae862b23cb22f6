#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "hems/rng.hpp"

namespace hems::forecast {

struct TreeParams {
    int max_depth = -1;         // < 0: unlimited
    int min_samples_leaf = 1;
    int max_leaves = -1;        // < 0: unlimited; otherwise best-first growth
    int max_features = -1;      // features tried per split; < 0: all
};

/// CART regression tree on squared error.
class RegressionTree {
public:
    struct Node {
        int feature = -1;  // -1 for leaves
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        double value = 0.0;  // mean target of the samples reaching the node

        bool is_leaf() const noexcept { return feature < 0; }
    };

    /// Fits on `rows` of x (duplicates allowed, as produced by bootstrapping).
    /// `rng` is only drawn from when max_features limits the candidates.
    static RegressionTree fit(const Eigen::MatrixXd& x, std::span<const double> y,
                              std::span<const std::size_t> rows, const TreeParams& params, Rng& rng);

    double predict(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;

    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    int depth() const;
    int leaf_count() const;

private:
    std::vector<Node> nodes_;
};

}  // namespace hems::forecast

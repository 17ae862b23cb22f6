#include "hems/forecast/tree.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

namespace hems::forecast {

namespace {

struct Split {
    bool valid = false;
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
};

struct Pending {
    int node;
    int depth;
    std::vector<std::size_t> samples;
    Split split;
};

struct ByGain {
    bool operator()(const Pending& a, const Pending& b) const {
        if (a.split.gain != b.split.gain) return a.split.gain < b.split.gain;
        return a.node > b.node;
    }
};

std::vector<int> candidate_features(int n_features, int max_features, Rng& rng) {
    std::vector<int> all(static_cast<std::size_t>(n_features));
    std::iota(all.begin(), all.end(), 0);
    if (max_features < 0 || max_features >= n_features) return all;
    for (int i = 0; i < max_features; ++i) {
        const auto j = rng.uniform_int(i, n_features - 1);
        std::swap(all[static_cast<std::size_t>(i)], all[static_cast<std::size_t>(j)]);
    }
    all.resize(static_cast<std::size_t>(max_features));
    return all;
}

Split best_split(const Eigen::MatrixXd& x, std::span<const double> y,
                 const std::vector<std::size_t>& samples, const TreeParams& params, Rng& rng) {
    Split best;
    const std::size_t n = samples.size();
    const auto min_leaf = static_cast<std::size_t>(std::max(1, params.min_samples_leaf));
    if (n < 2 * min_leaf) return best;

    double total = 0.0;
    double y_min = y[samples[0]], y_max = y[samples[0]];
    for (std::size_t s : samples) {
        total += y[s];
        y_min = std::min(y_min, y[s]);
        y_max = std::max(y_max, y[s]);
    }
    if (y_min == y_max) return best;
    const double parent = total * total / static_cast<double>(n);

    std::vector<std::pair<double, double>> col(n);
    for (int f : candidate_features(static_cast<int>(x.cols()), params.max_features, rng)) {
        for (std::size_t i = 0; i < n; ++i) col[i] = {x(static_cast<Eigen::Index>(samples[i]), f), y[samples[i]]};
        std::sort(col.begin(), col.end());
        double left = 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            left += col[i - 1].second;
            if (i < min_leaf || n - i < min_leaf) continue;
            if (!(col[i - 1].first < col[i].first)) continue;
            const double right = total - left;
            const auto nl = static_cast<double>(i);
            const auto nr = static_cast<double>(n - i);
            const double gain = std::max(0.0, left * left / nl + right * right / nr - parent);
            if (!best.valid || gain > best.gain) {
                double thr = 0.5 * (col[i - 1].first + col[i].first);
                if (!(thr < col[i].first)) thr = col[i - 1].first;
                best = {true, f, thr, gain};
            }
        }
    }
    return best;
}

double mean_of(std::span<const double> y, const std::vector<std::size_t>& samples) {
    double s = 0.0;
    for (std::size_t i : samples) s += y[i];
    return s / static_cast<double>(samples.size());
}

}  // namespace

RegressionTree RegressionTree::fit(const Eigen::MatrixXd& x, std::span<const double> y,
                                   std::span<const std::size_t> rows, const TreeParams& params,
                                   Rng& rng) {
    RegressionTree tree;
    std::vector<std::size_t> root_samples(rows.begin(), rows.end());
    tree.nodes_.push_back({-1, 0.0, -1, -1, mean_of(y, root_samples)});

    std::priority_queue<Pending, std::vector<Pending>, ByGain> queue;
    auto consider = [&](int node, int depth, std::vector<std::size_t> samples) {
        if (params.max_depth >= 0 && depth >= params.max_depth) return;
        Split s = best_split(x, y, samples, params, rng);
        if (s.valid) queue.push({node, depth, std::move(samples), s});
    };
    consider(0, 0, std::move(root_samples));

    int leaves = 1;
    while (!queue.empty() && (params.max_leaves < 0 || leaves < params.max_leaves)) {
        Pending p = queue.top();
        queue.pop();
        std::vector<std::size_t> left, right;
        for (std::size_t s : p.samples)
            (x(static_cast<Eigen::Index>(s), p.split.feature) <= p.split.threshold ? left : right).push_back(s);
        const int l = static_cast<int>(tree.nodes_.size());
        tree.nodes_.push_back({-1, 0.0, -1, -1, mean_of(y, left)});
        tree.nodes_.push_back({-1, 0.0, -1, -1, mean_of(y, right)});
        auto& node = tree.nodes_[static_cast<std::size_t>(p.node)];
        node.feature = p.split.feature;
        node.threshold = p.split.threshold;
        node.left = l;
        node.right = l + 1;
        ++leaves;
        consider(l, p.depth + 1, std::move(left));
        consider(l + 1, p.depth + 1, std::move(right));
    }
    return tree;
}

double RegressionTree::predict(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
    std::size_t i = 0;
    while (!nodes_[i].is_leaf()) {
        const auto& n = nodes_[i];
        i = static_cast<std::size_t>(row(n.feature) <= n.threshold ? n.left : n.right);
    }
    return nodes_[i].value;
}

int RegressionTree::depth() const {
    std::vector<int> d(nodes_.size(), 0);
    int deepest = 0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].is_leaf()) continue;
        d[static_cast<std::size_t>(nodes_[i].left)] = d[i] + 1;
        d[static_cast<std::size_t>(nodes_[i].right)] = d[i] + 1;
        deepest = std::max(deepest, d[i] + 1);
    }
    return deepest;
}

int RegressionTree::leaf_count() const {
    return static_cast<int>(std::count_if(nodes_.begin(), nodes_.end(),
                                          [](const Node& n) { return n.is_leaf(); }));
}

}  // namespace hems::forecast

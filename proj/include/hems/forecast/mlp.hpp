#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "hems/forecast/dataset.hpp"

namespace hems::forecast {

/// Regression MLP settings. Defaults follow the fixed hyperparameters used
/// for occupancy forecasting (Adam, 10-5 ReLU hidden layers, sigmoid output).
struct MlpConfig {
    std::vector<int> hidden{10, 5};
    double learning_rate = 0.001;
    double alpha = 1e-4;      // L2 penalty
    int batch_size = -1;      // < 0: min(200, n)
    int max_iter = 4000;      // epochs
    bool shuffle = true;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double tol = 0.0;         // > 0: stop after 10 epochs without that much improvement
    std::uint64_t seed = 42;
};

/// Fully connected network: ReLU hidden layers, one sigmoid output. Inputs
/// and targets are min-max scaled to [0, 1] internally; predict() returns
/// values in target units.
class Mlp {
public:
    /// Fits on data.train_rows with mini-batch Adam on
    /// 0.5 * mean squared error + 0.5 * alpha * |W|^2 / n.
    /// Throws DivergenceError (with the epoch) if the loss becomes non-finite.
    static Mlp fit(const SupervisedDataset& data, const MlpConfig& config);

    /// All weights and biases zero, identity scaling.
    static Mlp zeros(int inputs, const std::vector<int>& hidden = {10, 5});

    /// Glorot-uniform weights, zero-ish biases, identity scaling.
    static Mlp random(int inputs, const std::vector<int>& hidden, std::uint64_t seed);

    double predict_row(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;
    std::vector<double> predict(const Eigen::MatrixXd& x) const;

    /// Network output for already-scaled inputs, in [0, 1].
    Eigen::VectorXd forward_scaled(const Eigen::MatrixXd& x_scaled) const;

    /// Training objective on scaled data and its analytic gradient, with
    /// parameters flattened in layer order (W row-major, then b).
    double loss(const Eigen::MatrixXd& x_scaled, const Eigen::VectorXd& y_scaled, double alpha) const;
    std::vector<double> gradient(const Eigen::MatrixXd& x_scaled, const Eigen::VectorXd& y_scaled,
                                 double alpha) const;

    std::vector<double> parameters() const;
    void set_parameters(std::span<const double> values);
    std::size_t parameter_count() const;

    std::vector<int> layer_sizes() const;
    Eigen::VectorXd& bias(std::size_t layer) { return biases_[layer]; }
    const std::vector<double>& loss_history() const noexcept { return loss_history_; }

private:
    std::vector<Eigen::MatrixXd> weights_;  // [layer] out x in
    std::vector<Eigen::VectorXd> biases_;
    Eigen::RowVectorXd x_min_, x_span_;
    double y_min_ = 0.0, y_span_ = 1.0;
    std::vector<double> loss_history_;

    void backprop(const Eigen::MatrixXd& x_scaled, const Eigen::VectorXd& y_scaled, double alpha,
                  std::vector<Eigen::MatrixXd>& grad_w, std::vector<Eigen::VectorXd>& grad_b) const;
};

}  // namespace hems::forecast

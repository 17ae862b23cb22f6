#include "hems/forecast/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "hems/error.hpp"
#include "hems/rng.hpp"

namespace hems::forecast {

namespace {

Eigen::MatrixXd relu(const Eigen::MatrixXd& z) { return z.cwiseMax(0.0); }

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& z) {
    return z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

Eigen::MatrixXd affine(const Eigen::MatrixXd& a, const Eigen::MatrixXd& w, const Eigen::VectorXd& b) {
    Eigen::MatrixXd z = a * w.transpose();
    z.rowwise() += b.transpose();
    return z;
}

}  // namespace

Mlp Mlp::zeros(int inputs, const std::vector<int>& hidden) {
    Mlp m;
    int fan_in = inputs;
    std::vector<int> sizes = hidden;
    sizes.push_back(1);
    for (int out : sizes) {
        m.weights_.push_back(Eigen::MatrixXd::Zero(out, fan_in));
        m.biases_.push_back(Eigen::VectorXd::Zero(out));
        fan_in = out;
    }
    m.x_min_ = Eigen::RowVectorXd::Zero(inputs);
    m.x_span_ = Eigen::RowVectorXd::Ones(inputs);
    return m;
}

Mlp Mlp::random(int inputs, const std::vector<int>& hidden, std::uint64_t seed) {
    Mlp m = zeros(inputs, hidden);
    Rng rng(seed);
    for (std::size_t l = 0; l < m.weights_.size(); ++l) {
        auto& w = m.weights_[l];
        const bool output = l + 1 == m.weights_.size();
        const double factor = output ? 2.0 : 6.0;
        const double bound = std::sqrt(factor / static_cast<double>(w.rows() + w.cols()));
        for (Eigen::Index i = 0; i < w.rows(); ++i)
            for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = rng.uniform(-bound, bound);
        for (Eigen::Index i = 0; i < m.biases_[l].size(); ++i) m.biases_[l](i) = rng.uniform(-bound, bound);
    }
    return m;
}

std::vector<int> Mlp::layer_sizes() const {
    std::vector<int> s;
    if (weights_.empty()) return s;
    s.push_back(static_cast<int>(weights_.front().cols()));
    for (const auto& w : weights_) s.push_back(static_cast<int>(w.rows()));
    return s;
}

Eigen::VectorXd Mlp::forward_scaled(const Eigen::MatrixXd& x_scaled) const {
    Eigen::MatrixXd a = x_scaled;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        const Eigen::MatrixXd z = affine(a, weights_[l], biases_[l]);
        a = l + 1 == weights_.size() ? sigmoid(z) : relu(z);
    }
    return a.col(0);
}

double Mlp::predict_row(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
    Eigen::MatrixXd x = ((row - x_min_).array() / x_span_.array()).matrix();
    return y_min_ + y_span_ * forward_scaled(x)(0);
}

std::vector<double> Mlp::predict(const Eigen::MatrixXd& x) const {
    Eigen::MatrixXd xs = x;
    xs.rowwise() -= x_min_;
    xs = (xs.array().rowwise() / x_span_.array()).matrix();
    const Eigen::VectorXd out = forward_scaled(xs);
    std::vector<double> y(static_cast<std::size_t>(out.size()));
    for (Eigen::Index i = 0; i < out.size(); ++i) y[static_cast<std::size_t>(i)] = y_min_ + y_span_ * out(i);
    return y;
}

double Mlp::loss(const Eigen::MatrixXd& x_scaled, const Eigen::VectorXd& y_scaled, double alpha) const {
    const auto n = static_cast<double>(x_scaled.rows());
    const Eigen::VectorXd err = forward_scaled(x_scaled) - y_scaled;
    double penalty = 0.0;
    for (const auto& w : weights_) penalty += w.squaredNorm();
    return 0.5 * err.squaredNorm() / n + 0.5 * alpha * penalty / n;
}

void Mlp::backprop(const Eigen::MatrixXd& x_scaled, const Eigen::VectorXd& y_scaled, double alpha,
                   std::vector<Eigen::MatrixXd>& grad_w, std::vector<Eigen::VectorXd>& grad_b) const {
    const std::size_t layers = weights_.size();
    const auto n = static_cast<double>(x_scaled.rows());
    std::vector<Eigen::MatrixXd> acts{x_scaled};
    std::vector<Eigen::MatrixXd> pre;
    for (std::size_t l = 0; l < layers; ++l) {
        pre.push_back(affine(acts.back(), weights_[l], biases_[l]));
        acts.push_back(l + 1 == layers ? sigmoid(pre.back()) : relu(pre.back()));
    }
    grad_w.resize(layers);
    grad_b.resize(layers);

    const Eigen::MatrixXd& out = acts.back();
    Eigen::MatrixXd delta = ((out.col(0) - y_scaled) / n).array() * (out.array() * (1.0 - out.array())).col(0);
    for (std::size_t l = layers; l-- > 0;) {
        grad_w[l] = delta.transpose() * acts[l] + (alpha / n) * weights_[l];
        grad_b[l] = delta.colwise().sum().transpose();
        if (l == 0) break;
        Eigen::MatrixXd upstream = delta * weights_[l];
        delta = (upstream.array() * (pre[l - 1].array() > 0.0).cast<double>()).matrix();
    }
}

std::vector<double> Mlp::gradient(const Eigen::MatrixXd& x_scaled, const Eigen::VectorXd& y_scaled,
                                  double alpha) const {
    std::vector<Eigen::MatrixXd> gw;
    std::vector<Eigen::VectorXd> gb;
    backprop(x_scaled, y_scaled, alpha, gw, gb);
    std::vector<double> flat;
    for (std::size_t l = 0; l < gw.size(); ++l) {
        for (Eigen::Index i = 0; i < gw[l].rows(); ++i)
            for (Eigen::Index j = 0; j < gw[l].cols(); ++j) flat.push_back(gw[l](i, j));
        for (Eigen::Index i = 0; i < gb[l].size(); ++i) flat.push_back(gb[l](i));
    }
    return flat;
}

std::size_t Mlp::parameter_count() const {
    std::size_t c = 0;
    for (std::size_t l = 0; l < weights_.size(); ++l)
        c += static_cast<std::size_t>(weights_[l].size() + biases_[l].size());
    return c;
}

std::vector<double> Mlp::parameters() const {
    std::vector<double> flat;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        for (Eigen::Index i = 0; i < weights_[l].rows(); ++i)
            for (Eigen::Index j = 0; j < weights_[l].cols(); ++j) flat.push_back(weights_[l](i, j));
        for (Eigen::Index i = 0; i < biases_[l].size(); ++i) flat.push_back(biases_[l](i));
    }
    return flat;
}

void Mlp::set_parameters(std::span<const double> values) {
    if (values.size() != parameter_count()) throw ValidationError("mlp: parameter vector has wrong length");
    std::size_t k = 0;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        for (Eigen::Index i = 0; i < weights_[l].rows(); ++i)
            for (Eigen::Index j = 0; j < weights_[l].cols(); ++j) weights_[l](i, j) = values[k++];
        for (Eigen::Index i = 0; i < biases_[l].size(); ++i) biases_[l](i) = values[k++];
    }
}

Mlp Mlp::fit(const SupervisedDataset& data, const MlpConfig& config) {
    data.validate();
    if (data.train_rows.empty()) throw ValidationError("mlp: empty training set");
    if (config.max_iter < 1) throw ValidationError("mlp: max_iter must be >= 1");
    for (int h : config.hidden)
        if (h < 1) throw ValidationError("mlp: hidden layer sizes must be >= 1");

    const auto n = static_cast<Eigen::Index>(data.train_rows.size());
    const Eigen::Index d = data.features.cols();
    Eigen::MatrixXd x(n, d);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto r = static_cast<Eigen::Index>(data.train_rows[static_cast<std::size_t>(i)]);
        x.row(i) = data.features.row(r);
        y(i) = data.targets(r);
    }

    Mlp m = random(static_cast<int>(d), config.hidden, config.seed);
    m.x_min_ = x.colwise().minCoeff();
    m.x_span_ = x.colwise().maxCoeff() - m.x_min_;
    for (Eigen::Index c = 0; c < d; ++c)
        if (m.x_span_(c) <= 0.0) m.x_span_(c) = 1.0;
    m.y_min_ = y.minCoeff();
    m.y_span_ = y.maxCoeff() - m.y_min_;
    if (m.y_span_ <= 0.0) {
        // Constant target: park it mid-range, away from the flat sigmoid tails.
        m.y_span_ = 1.0;
        m.y_min_ -= 0.5;
    }
    x.rowwise() -= m.x_min_;
    x = (x.array().rowwise() / m.x_span_.array()).matrix();
    y = (y.array() - m.y_min_) / m.y_span_;

    const Eigen::Index batch = config.batch_size > 0 ? std::min<Eigen::Index>(config.batch_size, n)
                                                     : std::min<Eigen::Index>(200, n);
    std::vector<double> params = m.parameters();
    std::vector<double> mom(params.size(), 0.0), vel(params.size(), 0.0);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    Rng rng(config.seed ^ 0x5bd1e995ULL);

    long step = 0;
    double best = std::numeric_limits<double>::infinity();
    int stale = 0;
    for (int epoch = 1; epoch <= config.max_iter; ++epoch) {
        if (config.shuffle) rng.shuffle(order.begin(), order.end());
        double epoch_loss = 0.0;
        for (Eigen::Index start = 0; start < n; start += batch) {
            const Eigen::Index len = std::min(batch, n - start);
            Eigen::MatrixXd xb(len, d);
            Eigen::VectorXd yb(len);
            for (Eigen::Index i = 0; i < len; ++i) {
                xb.row(i) = x.row(order[static_cast<std::size_t>(start + i)]);
                yb(i) = y(order[static_cast<std::size_t>(start + i)]);
            }
            epoch_loss += m.loss(xb, yb, config.alpha) * static_cast<double>(len);
            const auto g = m.gradient(xb, yb, config.alpha);
            ++step;
            const double lr = config.learning_rate *
                              std::sqrt(1.0 - std::pow(config.beta2, static_cast<double>(step))) /
                              (1.0 - std::pow(config.beta1, static_cast<double>(step)));
            for (std::size_t k = 0; k < params.size(); ++k) {
                mom[k] = config.beta1 * mom[k] + (1.0 - config.beta1) * g[k];
                vel[k] = config.beta2 * vel[k] + (1.0 - config.beta2) * g[k] * g[k];
                params[k] -= lr * mom[k] / (std::sqrt(vel[k]) + config.epsilon);
            }
            m.set_parameters(params);
        }
        epoch_loss /= static_cast<double>(n);
        if (!std::isfinite(epoch_loss)) {
            std::ostringstream os;
            os << "mlp: training loss became non-finite at epoch " << epoch;
            throw DivergenceError(os.str(), epoch);
        }
        m.loss_history_.push_back(epoch_loss);
        if (config.tol > 0.0) {
            if (epoch_loss > best - config.tol) {
                if (++stale >= 10) break;
            } else {
                stale = 0;
            }
            best = std::min(best, epoch_loss);
        }
    }
    return m;
}

}  // namespace hems::forecast

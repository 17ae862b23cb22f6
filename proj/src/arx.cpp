#include "hems/arx.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "hems/error.hpp"

namespace hems {

std::string_view to_string(Exogenous input) noexcept {
    switch (input) {
        case Exogenous::outdoor_temp: return "outdoor_temp";
        case Exogenous::occupancy: return "occupancy";
        case Exogenous::setpoint: return "setpoint";
    }
    return "?";
}

ArxModel ArxModel::zeros(std::vector<int> lags) {
    ArxModel m;
    m.alpha.assign(lags.size(), 0.0);
    m.beta.assign(lags.size(), {0.0, 0.0, 0.0});
    m.lags = std::move(lags);
    return m;
}

int ArxModel::max_lag() const {
    return lags.empty() ? 0 : *std::max_element(lags.begin(), lags.end());
}

double ArxModel::total_beta(Exogenous m) const {
    double s = 0.0;
    for (std::size_t i = 0; i < beta.size(); ++i) s += beta_of(i, m);
    return s;
}

void ArxModel::validate() const {
    if (lags.empty()) throw ValidationError("ARX lag set is empty");
    for (std::size_t i = 0; i < lags.size(); ++i) {
        if (lags[i] < 1) throw ValidationError("ARX lags must be >= 1");
        if (i > 0 && lags[i] <= lags[i - 1])
            throw ValidationError("ARX lags must be strictly increasing");
    }
    if (alpha.size() != lags.size() || beta.size() != lags.size())
        throw ValidationError("ARX model needs one alpha and one beta row per lag");
    for (double a : alpha)
        if (!std::isfinite(a)) throw ValidationError("ARX alpha is not finite");
    for (const auto& row : beta)
        for (double b : row)
            if (!std::isfinite(b)) throw ValidationError("ARX beta is not finite");
}

double arx_predict_raw(const ArxModel& model, std::span<const double> ac_history,
                       const ExogenousInputs& exog, std::size_t t) {
    const auto ti = static_cast<long>(t);
    double out = 0.0;
    for (std::size_t i = 0; i < model.lags.size(); ++i) {
        const long k = model.lags[i];
        const long ac_idx = ti - k;
        if (ac_idx < 0 || ac_idx >= static_cast<long>(ac_history.size())) {
            std::ostringstream os;
            os << "ARX prediction at index " << t << " needs AC load at index " << ac_idx
               << " (lag " << k << "); supply warm-up values";
            throw MissingHistoryError(os.str());
        }
        out -= model.alpha[i] * ac_history[static_cast<std::size_t>(ac_idx)];
        const long x_idx = ti - k + 1;
        for (std::size_t m = 0; m < kExogenousCount; ++m) {
            if (x_idx < 0 || x_idx >= static_cast<long>(exog[m].size())) {
                std::ostringstream os;
                os << "ARX prediction at index " << t << " needs "
                   << to_string(static_cast<Exogenous>(m)) << " at index " << x_idx;
                throw MissingHistoryError(os.str());
            }
            out += model.beta[i][m] * exog[m][static_cast<std::size_t>(x_idx)];
        }
    }
    return out;
}

double arx_predict(const ArxModel& model, std::span<const double> ac_history,
                   const ExogenousInputs& exog, std::size_t t) {
    return std::max(0.0, arx_predict_raw(model, ac_history, exog, t));
}

std::vector<std::string> arx_column_names(const std::vector<int>& lags) {
    std::vector<std::string> names;
    for (int k : lags) {
        names.push_back("alpha[" + std::to_string(k) + "]");
        for (std::size_t m = 0; m < kExogenousCount; ++m)
            names.push_back("beta[" + std::to_string(k) + "," +
                            std::string(to_string(static_cast<Exogenous>(m))) + "]");
    }
    return names;
}

namespace {

Eigen::Index numeric_rank(const Eigen::MatrixXd& x) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    qr.setThreshold(1e-10);
    return qr.rank();
}

}  // namespace

ArxModel arx_fit(std::span<const double> ac_series, const ExogenousInputs& exog,
                 std::vector<int> lags) {
    ArxModel model = ArxModel::zeros(std::move(lags));
    model.validate();

    const std::size_t n = ac_series.size();
    for (std::size_t m = 0; m < kExogenousCount; ++m) {
        if (exog[m].size() != n) {
            std::ostringstream os;
            os << "exogenous input " << to_string(static_cast<Exogenous>(m)) << " has "
               << exog[m].size() << " samples, AC series has " << n;
            throw ValidationError(os.str());
        }
    }
    const auto first = static_cast<std::size_t>(model.max_lag());
    const std::size_t cols = model.coefficient_count();
    if (n < first + cols) {
        std::ostringstream os;
        os << "ARX fit needs at least " << first + cols << " samples, got " << n;
        throw InsufficientDataError(os.str());
    }
    const std::size_t rows = n - first;
    const auto names = arx_column_names(model.lags);

    Eigen::MatrixXd x(rows, cols);
    Eigen::VectorXd y(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t t = r + first;
        y(r) = ac_series[t];
        for (std::size_t i = 0; i < model.lags.size(); ++i) {
            const auto k = static_cast<std::size_t>(model.lags[i]);
            const std::size_t c0 = i * (1 + kExogenousCount);
            x(r, c0) = -ac_series[t - k];
            for (std::size_t m = 0; m < kExogenousCount; ++m)
                x(r, c0 + 1 + m) = exog[m][t - k + 1];
        }
    }

    // A constant input is indistinguishable from an intercept the model lacks,
    // so its coefficient would absorb the mean load rather than the input's effect.
    std::vector<std::string> flat;
    for (std::size_t c = 0; c < cols; ++c) {
        if (c % (1 + kExogenousCount) == 0) continue;
        const auto col = x.col(c);
        const double scale = std::max(1.0, col.cwiseAbs().maxCoeff());
        if (col.maxCoeff() - col.minCoeff() <= 1e-12 * scale) flat.push_back(names[c]);
    }
    if (!flat.empty()) {
        std::ostringstream os;
        os << "ARX design is rank deficient: zero-variance column(s)";
        for (const auto& f : flat) os << ' ' << f;
        throw RankDeficiencyError(os.str(), flat);
    }

    if (numeric_rank(x) < static_cast<Eigen::Index>(cols)) {
        // Greedy scan: a column that adds no rank to the columns before it is
        // collinear with them.
        std::vector<std::string> collinear;
        Eigen::MatrixXd kept(rows, 0);
        for (std::size_t c = 0; c < cols; ++c) {
            Eigen::MatrixXd trial(rows, kept.cols() + 1);
            trial << kept, x.col(c);
            if (numeric_rank(trial) == trial.cols())
                kept = std::move(trial);
            else
                collinear.push_back(names[c]);
        }
        std::ostringstream os;
        os << "ARX design is rank deficient: collinear column(s)";
        for (const auto& c : collinear) os << ' ' << c;
        throw RankDeficiencyError(os.str(), collinear);
    }

    const Eigen::VectorXd coef = x.colPivHouseholderQr().solve(y);
    for (std::size_t i = 0; i < model.lags.size(); ++i) {
        const std::size_t c0 = i * (1 + kExogenousCount);
        model.alpha[i] = coef(c0);
        for (std::size_t m = 0; m < kExogenousCount; ++m) model.beta[i][m] = coef(c0 + 1 + m);
    }
    return model;
}

}  // namespace hems

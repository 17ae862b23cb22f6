#include "hems/forecast/dataset.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "hems/error.hpp"

namespace hems::forecast {

std::vector<std::size_t> SupervisedDataset::zero_variance_columns() const {
    std::vector<std::size_t> out;
    for (Eigen::Index c = 0; c < features.cols(); ++c) {
        const auto col = features.col(c);
        if (col.size() == 0 || col.maxCoeff() == col.minCoeff()) out.push_back(static_cast<std::size_t>(c));
    }
    return out;
}

void SupervisedDataset::validate() const {
    if (features.rows() != targets.size())
        throw ValidationError("dataset: feature rows and target count differ");
    const std::set<std::size_t> train(train_rows.begin(), train_rows.end());
    for (std::size_t r : test_rows) {
        if (train.count(r)) throw ValidationError("dataset: test row also in train partition");
        if (r >= size()) throw ValidationError("dataset: test row out of range");
    }
    for (std::size_t r : train_rows)
        if (r >= size()) throw ValidationError("dataset: train row out of range");
}

SupervisedDataset build_features(std::span<const double> demand, std::span<const double> occupancy,
                                 int lag_count, int first_hour_of_day) {
    if (lag_count < 1) throw ValidationError("lag_count must be >= 1");
    if (occupancy.size() != demand.size())
        throw ValidationError("demand and occupancy histories differ in length");
    const auto lags = static_cast<std::size_t>(lag_count);
    if (demand.size() <= lags) {
        std::ostringstream os;
        os << "history of " << demand.size() << " hours is too short for " << lag_count << " lags";
        throw InsufficientDataError(os.str());
    }
    const std::size_t rows = demand.size() - lags;
    SupervisedDataset ds;
    ds.features.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(lags + 2));
    ds.targets.resize(static_cast<Eigen::Index>(rows));
    for (std::size_t k = 1; k <= lags; ++k) ds.feature_names.push_back("demand_lag" + std::to_string(k));
    ds.feature_names.push_back("hour_sin");
    ds.feature_names.push_back("hour_cos");

    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t t = r + lags;
        const auto ri = static_cast<Eigen::Index>(r);
        for (std::size_t k = 1; k <= lags; ++k)
            ds.features(ri, static_cast<Eigen::Index>(k - 1)) = demand[t - k];
        const double hod = static_cast<double>((static_cast<std::size_t>(first_hour_of_day) + t) % 24);
        ds.features(ri, static_cast<Eigen::Index>(lags)) = std::sin(2.0 * M_PI * hod / 24.0);
        ds.features(ri, static_cast<Eigen::Index>(lags + 1)) = std::cos(2.0 * M_PI * hod / 24.0);
        ds.targets(ri) = occupancy[t];
        ds.source_index.push_back(t);
        ds.train_rows.push_back(r);
    }
    return ds;
}

void split_chronological(SupervisedDataset& data, double test_fraction) {
    if (!(test_fraction >= 0.0 && test_fraction < 1.0))
        throw ValidationError("test_fraction must lie in [0, 1)");
    const std::size_t n = data.size();
    const auto n_test = static_cast<std::size_t>(std::ceil(test_fraction * static_cast<double>(n)));
    data.train_rows.clear();
    data.test_rows.clear();
    for (std::size_t r = 0; r < n; ++r) (r + n_test < n ? data.train_rows : data.test_rows).push_back(r);
}

}  // namespace hems::forecast

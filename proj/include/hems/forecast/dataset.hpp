#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace hems::forecast {

/// Lagged-demand features and occupancy targets, one row per hour.
struct SupervisedDataset {
    Eigen::MatrixXd features;  // rows = samples
    Eigen::VectorXd targets;   // occupancy (persons)
    std::vector<std::string> feature_names;
    std::vector<std::size_t> source_index;  // hour index of each row in the input series
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;

    std::size_t size() const noexcept { return static_cast<std::size_t>(targets.size()); }

    /// Columns whose values are all identical.
    std::vector<std::size_t> zero_variance_columns() const;

    /// Throws ValidationError if row counts disagree or a test row also
    /// appears in the train partition.
    void validate() const;
};

/// Row for hour t holds demand[t-1] ... demand[t-lag_count] followed by
/// sin and cos of the hour of day; its target is occupancy[t]. The first
/// lag_count hours have missing lags and are dropped. Every row starts in
/// the train partition.
///
/// Throws InsufficientDataError unless demand.size() > lag_count.
SupervisedDataset build_features(std::span<const double> demand, std::span<const double> occupancy,
                                 int lag_count, int first_hour_of_day = 0);

/// Moves the last ceil(test_fraction * n) rows to the test partition.
void split_chronological(SupervisedDataset& data, double test_fraction);

}  // namespace hems::forecast

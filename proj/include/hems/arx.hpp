#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hems {

/// Exogenous inputs of the cooling-load model, in column order.
enum class Exogenous : std::size_t { outdoor_temp = 0, occupancy = 1, setpoint = 2 };
inline constexpr std::size_t kExogenousCount = 3;

std::string_view to_string(Exogenous input) noexcept;

/// Time-aligned exogenous signals; index t of each span is the same hour.
using ExogenousInputs = std::array<std::span<const double>, kExogenousCount>;

/// Auto-regressive cooling-load model with exogenous inputs:
///
///   p_ac[t] = sum_{k in lags} ( -alpha_k * p_ac[t-k] + sum_m beta_{k,m} * x_m[t-k+1] )
///
/// There is no intercept term.
struct ArxModel {
    std::vector<int> lags{1};
    std::vector<double> alpha;
    std::vector<std::array<double, kExogenousCount>> beta;

    /// Zero coefficients for the given lag set.
    static ArxModel zeros(std::vector<int> lags = {1});

    int max_lag() const;
    std::size_t coefficient_count() const noexcept { return lags.size() * (1 + kExogenousCount); }

    double& beta_of(std::size_t lag_index, Exogenous m) { return beta[lag_index][static_cast<std::size_t>(m)]; }
    double beta_of(std::size_t lag_index, Exogenous m) const { return beta[lag_index][static_cast<std::size_t>(m)]; }

    /// Sum of beta over lags for one input (the steady-state sensitivity of a
    /// single-hour step, ignoring the AR feedback).
    double total_beta(Exogenous m) const;

    /// Throws ValidationError unless lags are positive, strictly increasing,
    /// and every lag has one alpha and one beta row.
    void validate() const;

    friend bool operator==(const ArxModel&, const ArxModel&) = default;
};

/// Unclamped model output at index t. `ac_history` must hold the AC load for
/// every index t-k (only indices < t are read). Throws MissingHistoryError
/// when any required index is negative or past the end of a series.
double arx_predict_raw(const ArxModel& model, std::span<const double> ac_history,
                       const ExogenousInputs& exog, std::size_t t);

/// As arx_predict_raw, clamped below at 0 kW.
double arx_predict(const ArxModel& model, std::span<const double> ac_history,
                   const ExogenousInputs& exog, std::size_t t);

/// Ordinary least-squares fit over every index t >= max(lags).
///
/// Throws InsufficientDataError when there are fewer rows than coefficients
/// and RankDeficiencyError (naming the offending design columns) when an
/// exogenous input has zero variance or the design matrix is singular.
ArxModel arx_fit(std::span<const double> ac_series, const ExogenousInputs& exog,
                 std::vector<int> lags = {1});

/// Design column names in fit order: alpha[k], then beta[k,<input>] per lag.
std::vector<std::string> arx_column_names(const std::vector<int>& lags);

}  // namespace hems

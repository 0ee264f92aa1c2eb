#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hawkes/model.hpp"
#include "hawkes/simulate.hpp"

namespace hawkes {

/// Unit-bin counts N(start + j, start + j + 1], j = 0..m-1.
struct CountSeries {
    static constexpr double bin_width = 1.0;
    std::vector<long> counts;
};

CountSeries bin_counts(const EventSequence& events, double start, std::size_t m);

/// How many autocovariance lags enter the long-run variance series.
///
/// Adaptive: J is the last lag before the first run of three consecutive
/// lags with |gamma_j| < 2 SE, capped at ceil(10 / -log(contraction)) since
/// correlations decay at least geometrically with ratio alpha ||h||_1.
struct TruncationPolicy {
    enum class Kind { Adaptive, Fixed };

    Kind kind = Kind::Adaptive;
    std::size_t lag = 1;
    double contraction = 0.0;

    static TruncationPolicy adaptive(double contraction);
    static TruncationPolicy fixed(std::size_t lag);

    std::size_t cap() const;

    /// Lags whose autocovariances are computed: cap + 2 when adaptive (room
    /// for the three-lag stopping run), cap when fixed.
    std::size_t candidate_lags() const;

    /// Smallest pooled bin count estimate_sigma2 accepts.
    std::size_t min_bins() const { return 10 * candidate_lags(); }
};

struct StandardErrors {
    double mu_hat = 0.0;
    std::vector<double> gamma;
    double sigma2_series = 0.0;
    double sigma2_batch = 0.0;
};

struct PathStatistics {
    double mu_hat = 0.0;
    std::vector<double> gamma_hat;
    double sigma2_series = 0.0;
    double sigma2_batch = 0.0;
    std::size_t truncation_lag = 1;
    std::size_t batch_width = 0;
    std::size_t batch_count = 0;
    std::size_t total_bins = 0;
    std::size_t replications = 0;
    StandardErrors standard_errors;
};

/// mu, pooled autocovariances and the long-run variance
///   sigma^2 = gamma_0 + 2 sum_{j=1}^J gamma_j
/// with a batch-means cross-check. Autocovariances are pooled across series
/// and divided by the total number of bins, which keeps the sequence
/// positive semi-definite. Standard errors come from the spread of the same
/// statistics over independent chunks (one per series, or each series
/// split into pieces when there are fewer than 10 series).
PathStatistics estimate_sigma2(std::span<const CountSeries> series, const TruncationPolicy& truncation);

struct LinearOracle {
    double mu;
    double sigma2;
};

/// mu = nu / (1 - l1), sigma^2 = nu / (1 - l1)^3 for lambda(z) = nu + z.
LinearOracle linear_oracle(double nu, double l1);

/// alpha * int t h(t) dt / (1 - alpha ||h||_1): bound on the expected excess
/// count over bins n >= 1 caused by one history point.
double coupling_gap_bound(const HawkesModel& model);

struct TailDiagnostic {
    std::vector<double> theta_grid;
    std::vector<double> empirical_mgf;
    std::vector<double> mgf_standard_error;
    double log_survival_slope = 0.0;
    double slope_standard_error = 0.0;
    std::size_t fitted_points = 0;
    bool inconclusive = false;
    bool consistent_with_exponential_tail = false;
};

/// Empirical E[exp(theta N[0,1])] on a grid and a least-squares slope of
/// log P(N[0,1] > x) over the tail points with at least 5 exceedances.
TailDiagnostic tail_diagnostic(std::span<const CountSeries> series, std::span<const double> theta_grid);

}  // namespace hawkes

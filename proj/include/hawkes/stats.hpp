#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace hawkes::stats {

double mean(std::span<const double> x);

/// Unbiased (n - 1) sample variance.
double sample_variance(std::span<const double> x);

struct Estimate {
    double value;
    double se;
};

/// Sample variance with a kurtosis-aware standard error
/// (sd of squared deviations / sqrt(n)).
Estimate variance_with_se(std::span<const double> x);

double correlation(std::span<const double> x, std::span<const double> y);

double normal_cdf(double x);
double normal_quantile(double p);

/// P(K > lambda) for the Kolmogorov distribution.
double kolmogorov_survival(double lambda);

struct FitResult {
    double statistic;
    double p_value;
    std::size_t n;
};

/// One-sample Kolmogorov-Smirnov test, asymptotic p-value from sqrt(n) * D.
FitResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf);

struct ChiSquareResult {
    double statistic;
    std::size_t dof;
    double p_value;
    std::size_t cells;
};

double chi_square_survival(double statistic, std::size_t dof);

/// Goodness of fit of non-negative integer data to Poisson(mean). Cells
/// 0, 1, ... are merged from the right until each expected count is >= 5;
/// the last cell collects the upper tail.
ChiSquareResult chi_square_poisson(std::span<const long> counts, double poisson_mean);

}  // namespace hawkes::stats

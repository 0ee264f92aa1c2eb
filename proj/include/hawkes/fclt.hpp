#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hawkes/simulate.hpp"

namespace hawkes {

/// A path sampled on a grid of s-values in [0, 1].
struct GridPath {
    std::vector<double> grid;
    std::vector<double> values;
    double t_scale = 0.0;

    /// Value at a grid point; throws DomainError if s is not on the grid.
    double at(double s) const;
};

/// (N_{st} - mu s t) / sqrt(t)
struct RescaledPath : GridPath {};

/// (N_{st} - Lambda(st)) / sqrt(t)
struct CompensatedPath : GridPath {};

/// g equally spaced points 0, 1/(g-1), ..., 1.
std::vector<double> uniform_grid(std::size_t g);

RescaledPath build_rescaled(const EventSequence& events, double mu, double t, std::size_t g);

/// Needs Lambda at every s_i t, so the compensator grid must contain those times.
CompensatedPath build_compensated(const EventSequence& events, std::span<const CompensatorPoint> compensator,
                                  double t, std::size_t g);

/// Largest jump of the continuous-time path s -> N_{st} / sqrt(t) on [0, 1];
/// 1/sqrt(t) for a simple point process with at least one event.
double max_jump(const EventSequence& events, double t);

struct GaussianTestReport {
    std::string test_name;
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t n_samples = 0;
    bool pass = false;
    double significance = 0.01;
};

/// KS fit of {path(s)} to Normal(0, sigma2 * s). Needs >= 200 paths.
GaussianTestReport test_marginal_normality(std::span<const RescaledPath> paths, double s, double sigma2,
                                           double significance = 0.01);

/// Max |correlation| between increments over (0, s_1], (s_1, s_2], ...,
/// Bonferroni-corrected over all pairs. Needs >= 500 paths.
GaussianTestReport test_increment_independence(std::span<const RescaledPath> paths,
                                               std::span<const double> s_points, double significance = 0.01);

/// Endpoint sample variance against mu; passes within 3 standard errors.
GaussianTestReport test_compensated_variance(std::span<const CompensatedPath> paths, double mu);

/// Sample variance of path(s) against sigma2 * s at each s; passes when
/// every point is within 3 standard errors.
GaussianTestReport test_variance_scaling(std::span<const RescaledPath> paths, std::span<const double> s_points,
                                         double sigma2);

}  // namespace hawkes

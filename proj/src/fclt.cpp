#include "hawkes/fclt.hpp"

#include <algorithm>
#include <cmath>

#include "hawkes/errors.hpp"
#include "hawkes/stats.hpp"

namespace hawkes {

namespace {

constexpr std::size_t kMinMarginalPaths = 200;
constexpr std::size_t kMinIncrementPaths = 500;

std::size_t grid_index(const std::vector<double>& grid, double s) {
    const auto it = std::lower_bound(grid.begin(), grid.end(), s - 1e-12);
    if (it == grid.end() || std::abs(*it - s) > 1e-12) throw DomainError("s = " + std::to_string(s) + " is not a grid point");
    return static_cast<std::size_t>(it - grid.begin());
}

template<class Path>
std::vector<double> values_at(std::span<const Path> paths, double s) {
    std::vector<double> out;
    out.reserve(paths.size());
    for (const auto& p : paths) out.push_back(p.at(s));
    return out;
}

void check_events(const EventSequence& events, double t, std::size_t g) {
    if (!(t > 0.0)) throw DomainError("path horizon t must be > 0");
    if (g < 2) throw DomainError("grid needs at least 2 points");
    if (events.horizon < t) throw RangeError("events end before the path horizon");
}

}  // namespace

double GridPath::at(double s) const { return values[grid_index(grid, s)]; }

std::vector<double> uniform_grid(std::size_t g) {
    if (g < 2) throw DomainError("grid needs at least 2 points");
    std::vector<double> grid(g);
    for (std::size_t i = 0; i < g; ++i) grid[i] = static_cast<double>(i) / static_cast<double>(g - 1);
    grid.back() = 1.0;
    return grid;
}

RescaledPath build_rescaled(const EventSequence& events, double mu, double t, std::size_t g) {
    check_events(events, t, g);
    RescaledPath path;
    path.grid = uniform_grid(g);
    path.t_scale = t;
    path.values.resize(g);
    const double root = std::sqrt(t);
    for (std::size_t i = 0; i < g; ++i) {
        const double u = path.grid[i] * t;
        const double n = static_cast<double>(events.count(0.0, u));
        path.values[i] = (n - mu * u) / root;
    }
    return path;
}

CompensatedPath build_compensated(const EventSequence& events, std::span<const CompensatorPoint> compensator,
                                  double t, std::size_t g) {
    check_events(events, t, g);
    CompensatedPath path;
    path.grid = uniform_grid(g);
    path.t_scale = t;
    path.values.resize(g);
    const double root = std::sqrt(t);
    const double tol = 1e-9 * std::max(1.0, t);
    for (std::size_t i = 0; i < g; ++i) {
        const double u = path.grid[i] * t;
        const auto it = std::lower_bound(compensator.begin(), compensator.end(), u - tol,
                                         [](const CompensatorPoint& p, double x) { return p.t < x; });
        if (it == compensator.end() || std::abs(it->t - u) > tol)
            throw DomainError("compensator grid has no point at t = " + std::to_string(u));
        path.values[i] = (static_cast<double>(events.count(0.0, u)) - it->value) / root;
    }
    return path;
}

double max_jump(const EventSequence& events, double t) {
    if (!(t > 0.0)) throw DomainError("path horizon t must be > 0");
    std::size_t largest = 0;
    std::size_t run = 0;
    double previous = 0.0;
    for (double tau : events.times) {
        if (tau <= 0.0 || tau > t) continue;
        run = (run > 0 && tau == previous) ? run + 1 : 1;
        largest = std::max(largest, run);
        previous = tau;
    }
    return static_cast<double>(largest) / std::sqrt(t);
}

GaussianTestReport test_marginal_normality(std::span<const RescaledPath> paths, double s, double sigma2,
                                           double significance) {
    if (!(sigma2 > 0.0)) throw DomainError("sigma2 must be > 0");
    if (!(s > 0.0 && s <= 1.0)) throw DomainError("s must be in (0, 1]");
    if (paths.size() < kMinMarginalPaths) throw DomainError("marginal normality needs at least 200 paths");
    const double sd = std::sqrt(sigma2 * s);
    const auto fit = stats::ks_test(values_at(paths, s), [sd](double x) { return stats::normal_cdf(x / sd); });
    GaussianTestReport r;
    r.test_name = "marginal_normality";
    r.statistic = fit.statistic;
    r.p_value = fit.p_value;
    r.n_samples = fit.n;
    r.significance = significance;
    r.pass = fit.p_value >= significance;
    return r;
}

GaussianTestReport test_increment_independence(std::span<const RescaledPath> paths,
                                               std::span<const double> s_points, double significance) {
    if (s_points.size() < 2) throw DomainError("independence test needs at least 2 increments");
    for (std::size_t i = 0; i < s_points.size(); ++i) {
        if (!(s_points[i] > 0.0 && s_points[i] <= 1.0)) throw DomainError("s points must lie in (0, 1]");
        if (i > 0 && !(s_points[i] > s_points[i - 1])) throw DomainError("s points must strictly increase");
    }
    if (paths.size() < kMinIncrementPaths) throw DomainError("independence test needs at least 500 paths");

    const std::size_t k = s_points.size();
    std::vector<std::vector<double>> increments(k);
    for (const auto& p : paths) {
        double previous = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            const double v = p.at(s_points[i]);
            increments[i].push_back(v - previous);
            previous = v;
        }
    }

    const auto n = static_cast<double>(paths.size());
    const auto pairs = static_cast<double>(k * (k - 1) / 2);
    bool degenerate = false;
    double worst = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            const double r = stats::correlation(increments[i], increments[j]);
            if (!std::isfinite(r)) {
                degenerate = true;
                continue;
            }
            worst = std::max(worst, std::abs(r));
        }
    }

    GaussianTestReport rep;
    rep.test_name = "increment_independence";
    rep.n_samples = paths.size();
    rep.significance = significance;
    if (degenerate) {
        rep.statistic = 1.0;
        rep.p_value = 0.0;
        rep.pass = false;
        return rep;
    }
    rep.statistic = worst;
    rep.p_value = std::min(1.0, pairs * 2.0 * (1.0 - stats::normal_cdf(worst * std::sqrt(n))));
    rep.pass = rep.p_value >= significance;
    return rep;
}

GaussianTestReport test_compensated_variance(std::span<const CompensatedPath> paths, double mu) {
    if (paths.size() < kMinMarginalPaths) throw DomainError("compensated variance test needs at least 200 paths");
    const auto v = stats::variance_with_se(values_at(paths, 1.0));
    const double z = (v.value - mu) / v.se;
    GaussianTestReport r;
    r.test_name = "compensated_variance";
    r.statistic = v.value;
    r.p_value = std::isfinite(z) ? 2.0 * (1.0 - stats::normal_cdf(std::abs(z))) : 0.0;
    r.n_samples = paths.size();
    r.pass = std::isfinite(z) && std::abs(z) <= 3.0;
    r.significance = 2.0 * (1.0 - stats::normal_cdf(3.0));
    return r;
}

GaussianTestReport test_variance_scaling(std::span<const RescaledPath> paths, std::span<const double> s_points,
                                         double sigma2) {
    if (s_points.empty()) throw DomainError("variance scaling needs at least one s");
    if (paths.size() < kMinMarginalPaths) throw DomainError("variance scaling needs at least 200 paths");
    double worst = 0.0;
    for (double s : s_points) {
        const auto v = stats::variance_with_se(values_at(paths, s));
        worst = std::max(worst, std::abs(v.value - sigma2 * s) / v.se);
    }
    GaussianTestReport r;
    r.test_name = "variance_scaling";
    r.statistic = worst;
    r.p_value = std::isfinite(worst)
                    ? std::min(1.0, static_cast<double>(s_points.size()) * 2.0 * (1.0 - stats::normal_cdf(worst)))
                    : 0.0;
    r.n_samples = paths.size();
    r.pass = std::isfinite(worst) && worst <= 3.0;
    r.significance = 2.0 * (1.0 - stats::normal_cdf(3.0));
    return r;
}

}  // namespace hawkes

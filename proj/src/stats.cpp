#include "hawkes/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/poisson.hpp>

#include "hawkes/errors.hpp"

namespace hawkes::stats {

double mean(std::span<const double> x) {
    if (x.empty()) throw DomainError("mean of empty sample");
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
    if (x.size() < 2) throw DomainError("variance needs at least two samples");
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return ss / static_cast<double>(x.size() - 1);
}

Estimate variance_with_se(std::span<const double> x) {
    const double m = mean(x);
    const auto n = static_cast<double>(x.size());
    std::vector<double> sq;
    sq.reserve(x.size());
    for (double v : x) sq.push_back((v - m) * (v - m));
    const double var = std::accumulate(sq.begin(), sq.end(), 0.0) / (n - 1.0);
    return {var, std::sqrt(sample_variance(sq) / n)};
}

double correlation(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw DomainError("correlation needs two equal-length samples");
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

double normal_cdf(double x) { return boost::math::cdf(boost::math::normal_distribution<double>(), x); }

double normal_quantile(double p) {
    return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double kolmogorov_survival(double lambda) {
    if (lambda <= 0.0) return 1.0;
    if (lambda < 0.2) return 1.0;  // series is 1 to machine precision below this
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 ? term : -term);
        if (term < 1e-17) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

FitResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw DomainError("KS test on empty sample");
    std::sort(sample.begin(), sample.end());
    const auto n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return {d, kolmogorov_survival(std::sqrt(n) * d), sample.size()};
}

double chi_square_survival(double statistic, std::size_t dof) {
    if (dof == 0) throw DomainError("chi-square with zero degrees of freedom");
    return boost::math::cdf(boost::math::complement(boost::math::chi_squared_distribution<double>(dof), statistic));
}

ChiSquareResult chi_square_poisson(std::span<const long> counts, double poisson_mean) {
    if (counts.empty()) throw DomainError("chi-square on empty sample");
    if (!(poisson_mean > 0.0)) throw DomainError("Poisson mean must be > 0");
    const auto n = static_cast<double>(counts.size());
    const boost::math::poisson_distribution<double> law(poisson_mean);

    // Greedy left-to-right cells [lo_i, hi_i] with expected count >= 5; the
    // last cell absorbs the upper tail.
    std::vector<long> upper;  // inclusive upper value of each closed cell
    std::vector<double> expected;
    double mass = 0.0;
    double used = 0.0;
    for (long k = 0;; ++k) {
        mass += boost::math::pdf(law, static_cast<double>(k));
        const double rest = 1.0 - used - mass;
        if (n * rest < 5.0) break;
        if (n * mass >= 5.0) {
            upper.push_back(k);
            expected.push_back(n * mass);
            used += mass;
            mass = 0.0;
        }
    }
    expected.push_back(n * std::max(0.0, 1.0 - used));
    if (expected.back() < 5.0 && expected.size() > 1) {
        expected[expected.size() - 2] += expected.back();
        expected.pop_back();
        upper.pop_back();
    }
    const std::size_t cells = expected.size();
    if (cells < 2) throw DomainError("too few observations for a chi-square test");

    std::vector<double> observed(cells, 0.0);
    for (long c : counts) {
        if (c < 0) throw DomainError("negative count");
        const auto cell = static_cast<std::size_t>(std::lower_bound(upper.begin(), upper.end(), c) - upper.begin());
        observed[cell] += 1.0;
    }

    double stat = 0.0;
    for (std::size_t k = 0; k < cells; ++k)
        stat += (observed[k] - expected[k]) * (observed[k] - expected[k]) / expected[k];
    const std::size_t dof = cells - 1;
    return {stat, dof, chi_square_survival(stat, dof), cells};
}

}  // namespace hawkes::stats

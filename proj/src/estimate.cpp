#include "hawkes/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hawkes/errors.hpp"
#include "hawkes/stats.hpp"

namespace hawkes {

CountSeries bin_counts(const EventSequence& events, double start, std::size_t m) {
    if (m < 1) throw DomainError("bin_counts needs m >= 1");
    if (!(start >= 0.0)) throw DomainError("bin_counts start must be >= 0");
    const double end = start + static_cast<double>(m);
    if (events.horizon < end)
        throw RangeError("event horizon " + std::to_string(events.horizon) + " is shorter than " +
                         std::to_string(end));
    CountSeries out;
    out.counts.assign(m, 0);
    const auto first = std::upper_bound(events.times.begin(), events.times.end(), start);
    for (auto it = first; it != events.times.end() && *it <= end; ++it) {
        const double upper = std::ceil(*it - start);
        const std::size_t j = upper < 1.0 ? 0 : static_cast<std::size_t>(upper) - 1;
        out.counts[std::min(j, m - 1)] += 1;
    }
    return out;
}

TruncationPolicy TruncationPolicy::adaptive(double contraction) {
    if (!(contraction >= 0.0 && contraction < 1.0)) throw DomainError("contraction must be in [0, 1)");
    TruncationPolicy p;
    p.kind = Kind::Adaptive;
    p.contraction = contraction;
    return p;
}

TruncationPolicy TruncationPolicy::fixed(std::size_t lag) {
    if (lag < 1) throw DomainError("truncation lag must be >= 1");
    TruncationPolicy p;
    p.kind = Kind::Fixed;
    p.lag = lag;
    return p;
}

std::size_t TruncationPolicy::cap() const {
    if (kind == Kind::Fixed) return lag;
    if (contraction <= 0.0) return 1;
    const double c = std::ceil(10.0 / -std::log(contraction));
    return std::max<std::size_t>(1, static_cast<std::size_t>(c));
}

std::size_t TruncationPolicy::candidate_lags() const { return kind == Kind::Adaptive ? cap() + 2 : cap(); }

namespace {

struct Chunk {
    std::span<const long> counts;
};

std::vector<Chunk> make_chunks(std::span<const CountSeries> series) {
    constexpr std::size_t kMinChunks = 10;
    const std::size_t pieces = series.size() >= kMinChunks ? 1 : (kMinChunks + series.size() - 1) / series.size();
    std::vector<Chunk> chunks;
    for (const auto& s : series) {
        const std::size_t m = s.counts.size();
        const std::size_t width = std::max<std::size_t>(1, m / pieces);
        for (std::size_t p = 0; p < pieces && p * width < m; ++p) {
            const std::size_t begin = p * width;
            const std::size_t end = (p + 1 == pieces) ? m : std::min(m, begin + width);
            chunks.push_back({std::span<const long>(s.counts).subspan(begin, end - begin)});
        }
    }
    return chunks;
}

// sum_i (c_i - mu)(c_{i+j} - mu) for j = 0..lags
std::vector<double> lag_products(std::span<const long> c, double mu, std::size_t lags) {
    std::vector<double> centered(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) centered[i] = static_cast<double>(c[i]) - mu;
    std::vector<double> out(lags + 1, 0.0);
    for (std::size_t j = 0; j <= lags && j < centered.size(); ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i + j < centered.size(); ++i) acc += centered[i] * centered[i + j];
        out[j] = acc;
    }
    return out;
}

double spread_se(const std::vector<double>& values) {
    if (values.size() < 2) return 0.0;
    return std::sqrt(stats::sample_variance(values) / static_cast<double>(values.size()));
}

}  // namespace

PathStatistics estimate_sigma2(std::span<const CountSeries> series, const TruncationPolicy& truncation) {
    if (series.empty()) throw DomainError("estimate_sigma2 needs at least one series");
    std::size_t total = 0;
    long double sum = 0.0L;
    for (const auto& s : series) {
        total += s.counts.size();
        for (long c : s.counts) sum += c;
    }
    const std::size_t cap = truncation.cap();
    const std::size_t lags = truncation.candidate_lags();
    if (total < truncation.min_bins())
        throw DomainError("sample of " + std::to_string(total) + " bins is shorter than 10x the " +
                          std::to_string(lags) + " candidate lags");

    PathStatistics out;
    out.total_bins = total;
    out.replications = series.size();
    out.mu_hat = static_cast<double>(sum / static_cast<long double>(total));

    // pooled autocovariances
    std::vector<double> pooled(lags + 1, 0.0);
    for (const auto& s : series) {
        const auto products = lag_products(s.counts, out.mu_hat, lags);
        for (std::size_t j = 0; j <= lags; ++j) pooled[j] += products[j];
    }
    out.gamma_hat.resize(lags + 1);
    for (std::size_t j = 0; j <= lags; ++j) out.gamma_hat[j] = pooled[j] / static_cast<double>(total);

    // chunk-level replicates for standard errors
    const auto chunks = make_chunks(series);
    std::vector<std::vector<double>> chunk_gamma;
    chunk_gamma.reserve(chunks.size());
    for (const auto& chunk : chunks) {
        auto g = lag_products(chunk.counts, out.mu_hat, lags);
        const auto len = static_cast<double>(chunk.counts.size());
        for (double& v : g) v /= len;
        chunk_gamma.push_back(std::move(g));
    }
    out.standard_errors.gamma.resize(lags + 1);
    for (std::size_t j = 0; j <= lags; ++j) {
        std::vector<double> col;
        col.reserve(chunk_gamma.size());
        for (const auto& g : chunk_gamma) col.push_back(g[j]);
        out.standard_errors.gamma[j] = spread_se(col);
    }

    // truncation lag
    std::size_t lag = cap;
    if (truncation.kind == TruncationPolicy::Kind::Adaptive) {
        auto insignificant = [&](std::size_t j) {
            return std::abs(out.gamma_hat[j]) < 2.0 * out.standard_errors.gamma[j];
        };
        for (std::size_t j = 1; j <= cap; ++j) {
            if (insignificant(j) && insignificant(j + 1) && insignificant(j + 2)) {
                lag = std::max<std::size_t>(1, j - 1);
                break;
            }
        }
    }
    out.truncation_lag = lag;

    auto series_sum = [lag](const std::vector<double>& g) {
        double s = g[0];
        for (std::size_t j = 1; j <= lag; ++j) s += 2.0 * g[j];
        return s;
    };
    out.sigma2_series = series_sum(out.gamma_hat);
    std::vector<double> chunk_sigma2;
    chunk_sigma2.reserve(chunk_gamma.size());
    for (const auto& g : chunk_gamma) chunk_sigma2.push_back(series_sum(g));
    out.standard_errors.sigma2_series = spread_se(chunk_sigma2);
    out.standard_errors.mu_hat = std::sqrt(std::max(out.sigma2_series, 0.0) / static_cast<double>(total));

    // batch means: ceil(m^{1/3}) batches per series
    std::vector<double> batch_values;
    std::size_t width_used = 0;
    for (const auto& s : series) {
        const std::size_t m = s.counts.size();
        const auto batches = static_cast<std::size_t>(std::ceil(std::cbrt(static_cast<double>(m))));
        const std::size_t width = m / batches;
        if (width == 0) continue;
        width_used = std::max(width_used, width);
        for (std::size_t b = 0; b < batches; ++b) {
            double acc = 0.0;
            for (std::size_t i = b * width; i < (b + 1) * width; ++i) acc += static_cast<double>(s.counts[i]);
            const double dev = acc - static_cast<double>(width) * out.mu_hat;
            batch_values.push_back(dev * dev / static_cast<double>(width));
        }
    }
    out.batch_width = width_used;
    out.batch_count = batch_values.size();
    out.sigma2_batch = batch_values.empty() ? 0.0 : stats::mean(batch_values);
    out.standard_errors.sigma2_batch = spread_se(batch_values);

    if (!(out.sigma2_series > 0.0))
        throw DegenerateVariance("long-run variance estimate " + std::to_string(out.sigma2_series) +
                                 " is not positive");
    return out;
}

LinearOracle linear_oracle(double nu, double l1) {
    if (!(nu > 0.0)) throw DomainError("nu must be > 0");
    if (!(l1 >= 0.0)) throw DomainError("||h||_1 must be >= 0");
    if (!(l1 < 1.0)) throw StabilityViolation("stability violated: ||h||_1 = " + std::to_string(l1) + " >= 1");
    const double margin = 1.0 - l1;
    return {nu / margin, nu / (margin * margin * margin)};
}

double coupling_gap_bound(const HawkesModel& model) {
    const double alpha = model.rate().lipschitz();
    return alpha * model.kernel().first_moment() / model.stability_margin();
}

TailDiagnostic tail_diagnostic(std::span<const CountSeries> series, std::span<const double> theta_grid) {
    std::vector<long> pooled;
    for (const auto& s : series) pooled.insert(pooled.end(), s.counts.begin(), s.counts.end());
    if (pooled.size() < 10000) throw DomainError("tail diagnostic needs at least 1e4 pooled counts");
    if (theta_grid.empty()) throw DomainError("theta grid is empty");

    TailDiagnostic out;
    out.theta_grid.assign(theta_grid.begin(), theta_grid.end());
    const auto n = static_cast<double>(pooled.size());
    for (double theta : theta_grid) {
        if (!(theta > 0.0)) throw DomainError("theta must be > 0");
        std::vector<double> values;
        values.reserve(pooled.size());
        for (long c : pooled) values.push_back(std::exp(theta * static_cast<double>(c)));
        out.empirical_mgf.push_back(stats::mean(values));
        out.mgf_standard_error.push_back(std::sqrt(stats::sample_variance(values) / n));
    }

    const auto [lo, hi] = std::minmax_element(pooled.begin(), pooled.end());
    if (*lo == *hi) {
        out.inconclusive = true;
        return out;
    }

    // exceedance counts #(c > x) for x = 0..max
    const auto max_count = static_cast<std::size_t>(*hi);
    std::vector<double> histogram(max_count + 1, 0.0);
    for (long c : pooled) histogram[static_cast<std::size_t>(c)] += 1.0;
    std::vector<double> xs, ys;
    double exceed = n;
    for (std::size_t x = 0; x <= max_count; ++x) {
        exceed -= histogram[x];
        if (exceed < 5.0) break;
        xs.push_back(static_cast<double>(x));
        ys.push_back(std::log(exceed / n));
    }
    out.fitted_points = xs.size();
    if (xs.size() < 3) {
        out.inconclusive = true;
        return out;
    }
    const double mx = stats::mean(xs);
    const double my = stats::mean(ys);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    const double slope = sxy / sxx;
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (my + slope * (xs[i] - mx));
        rss += r * r;
    }
    out.log_survival_slope = slope;
    out.slope_standard_error = std::sqrt(rss / static_cast<double>(xs.size() - 2) / sxx);
    const double theta_min = *std::min_element(theta_grid.begin(), theta_grid.end());
    out.consistent_with_exponential_tail =
        slope <= -theta_min && slope + 1.96 * out.slope_standard_error < 0.0;
    return out;
}

}  // namespace hawkes

#include "hawkes/lil.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hawkes/errors.hpp"
#include "hawkes/parallel.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/stats.hpp"

namespace hawkes {

S2Profile S2Profile::plugin(double sigma2) {
    if (!(sigma2 > 0.0)) throw DomainError("plug-in sigma2 must be > 0");
    S2Profile p;
    p.sigma2_ = sigma2;
    return p;
}

S2Profile S2Profile::explicit_values(std::vector<double> s2) {
    if (s2.empty()) throw DomainError("explicit s2 profile is empty");
    S2Profile p;
    p.values_ = std::move(s2);
    return p;
}

double S2Profile::at(std::size_t n) const {
    if (n == 0) return 0.0;
    if (is_plugin()) return static_cast<double>(n) * sigma2_;
    if (n > values_.size()) throw RangeError("s2 profile shorter than n = " + std::to_string(n));
    return values_[n - 1];
}

LilSequence build_lil_sequence(const CountSeries& counts, double mu, const S2Profile& profile) {
    const std::size_t n = counts.counts.size();
    if (n == 0) throw DomainError("empty count series");
    LilSequence seq;
    seq.n_max = n;
    seq.x.resize(n);
    seq.s_partial.assign(n + 1, 0.0);
    seq.s2.assign(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        seq.x[i] = static_cast<double>(counts.counts[i]) - mu;
        seq.s_partial[i + 1] = seq.s_partial[i] + seq.x[i];
        seq.s2[i + 1] = profile.at(i + 1);
        if (!(seq.s2[i + 1] > seq.s2[i]))
            throw InputError("s2 profile is not strictly increasing at n = " + std::to_string(i + 1));
    }
    if (g_index(seq, std::exp(1.0)) + 1 > n)
        throw DomainError("series too short: no n > g(e) is available");
    return seq;
}

std::vector<double> empirical_s2(std::span<const CountSeries> series, double mu, std::size_t n_max) {
    if (series.empty()) throw DomainError("empirical s2 needs at least one series");
    std::vector<double> s2(n_max, 0.0);
    for (const auto& s : series) {
        if (s.counts.size() < n_max) throw RangeError("series shorter than n_max");
        double partial = 0.0;
        for (std::size_t i = 0; i < n_max; ++i) {
            partial += static_cast<double>(s.counts[i]) - mu;
            s2[i] += partial * partial;
        }
    }
    for (double& v : s2) v /= static_cast<double>(series.size());
    return s2;
}

std::size_t g_index(const LilSequence& seq, double t) {
    // s2 is strictly increasing with s2[0] = 0
    const auto it = std::upper_bound(seq.s2.begin(), seq.s2.end(), t);
    if (it == seq.s2.begin()) return 0;
    return static_cast<std::size_t>(it - seq.s2.begin()) - 1;
}

namespace {

double normalizer(double s2n) { return std::sqrt(2.0 * s2n * std::log(std::log(s2n))); }

}  // namespace

LilPath build_eta(const LilSequence& seq, std::size_t n, std::span<const double> grid) {
    if (n > seq.n_max) throw RangeError("n exceeds the sequence length");
    if (n <= g_index(seq, std::exp(1.0)))
        throw DomainError("eta_n needs n > g(e) so that log log s_n^2 > 0");
    const double s2n = seq.s2[n];
    const double denom = normalizer(s2n);

    LilPath path;
    path.n = n;
    path.grid.assign(grid.begin(), grid.end());
    path.values.reserve(grid.size());
    const auto knots_end = seq.s2.begin() + static_cast<std::ptrdiff_t>(n) + 1;
    for (double t : grid) {
        if (!(t >= 0.0 && t <= 1.0)) throw DomainError("eta grid must lie in [0, 1]");
        const double target = s2n * t;
        auto k = static_cast<std::size_t>(std::upper_bound(seq.s2.begin(), knots_end, target) - seq.s2.begin());
        k = std::min(k == 0 ? 0 : k - 1, n - 1);
        const double frac = (target - seq.s2[k]) / (seq.s2[k + 1] - seq.s2[k]);
        path.values.push_back((seq.s_partial[k] + frac * seq.x[k]) / denom);
    }
    double sup = 0.0;
    for (std::size_t k = 0; k <= n; ++k) sup = std::max(sup, std::abs(seq.s_partial[k]));
    path.norm_sup = sup / denom;
    path.endpoint = seq.s_partial[n] / denom;
    return path;
}

std::vector<std::size_t> lil_schedule(const LilSequence& seq, std::size_t n_max, std::size_t min_points) {
    if (min_points < 2) throw DomainError("schedule needs at least 2 points");
    n_max = std::min(n_max, seq.n_max);
    const std::size_t n0 = g_index(seq, std::exp(1.0)) + 9;
    if (n0 >= n_max) throw DomainError("n_max too small for a schedule starting at g(e) + 9");
    const double span_ratio = static_cast<double>(n_max) / static_cast<double>(n0);
    const double ratio = std::min(2.0, std::pow(span_ratio, 1.0 / static_cast<double>(min_points - 1)));
    std::vector<std::size_t> schedule;
    for (std::size_t i = 0;; ++i) {
        const double v = static_cast<double>(n0) * std::pow(ratio, static_cast<double>(i));
        auto n = static_cast<std::size_t>(std::llround(v));
        if (n > n_max) {
            if (v <= static_cast<double>(n_max) + 0.5) n = n_max;
            else break;
        }
        if (schedule.empty() || n > schedule.back()) schedule.push_back(n);
        if (n == n_max) break;
    }
    return schedule;
}

std::size_t schedule_tail_start(std::size_t schedule_size) { return schedule_size / 2; }

StrassenReport strassen_check(std::span<const LilPath> paths) {
    constexpr std::size_t kMinSchedule = 20;
    if (paths.size() < kMinSchedule) throw DomainError("strassen_check needs a schedule of at least 20 n-values");
    StrassenReport report;
    report.schedule_size = paths.size();
    report.tail_start = schedule_tail_start(paths.size());
    const LilPath* widest = &paths.front();
    for (std::size_t i = 0; i < paths.size(); ++i) {
        const auto& p = paths[i];
        if (p.norm_sup > report.sup_norm) {
            report.sup_norm = p.norm_sup;
            widest = &p;
        }
        if (i >= report.tail_start) report.tail_endpoint = std::max(report.tail_endpoint, std::abs(p.endpoint));
    }
    for (std::size_t i = 1; i < widest->grid.size(); ++i) {
        const double dt = widest->grid[i] - widest->grid[i - 1];
        if (dt <= 0.0) continue;
        const double dv = widest->values[i] - widest->values[i - 1];
        report.energy += dv * dv / dt;
    }
    return report;
}

OracleStatistics lil_oracle(double sigma2, std::span<const std::size_t> schedule, std::size_t replications,
                            std::uint64_t seed, std::size_t workers) {
    if (!(sigma2 > 0.0)) throw DomainError("oracle sigma2 must be > 0");
    if (schedule.empty()) throw DomainError("oracle needs a schedule");
    if (replications < 2) throw DomainError("oracle needs at least 2 replications");
    const std::size_t n_max = schedule.back();
    const std::size_t tail_start = schedule_tail_start(schedule.size());
    const double sd = std::sqrt(sigma2);

    OracleStatistics out;
    out.tail_endpoint.resize(replications);
    out.sup_norm.resize(replications);
    parallel_for(replications, workers, [&](std::size_t r) {
        Rng rng(substream(seed, r));
        double partial = 0.0;
        double running_max = 0.0;
        double tail = 0.0;
        double sup = 0.0;
        std::size_t next = 0;
        for (std::size_t n = 1; n <= n_max; ++n) {
            partial += sd * rng.normal();
            running_max = std::max(running_max, std::abs(partial));
            if (n == schedule[next]) {
                const double denom = normalizer(sigma2 * static_cast<double>(n));
                sup = std::max(sup, running_max / denom);
                if (next >= tail_start) tail = std::max(tail, std::abs(partial) / denom);
                ++next;
            }
        }
        out.tail_endpoint[r] = tail;
        out.sup_norm[r] = sup;
    });
    return out;
}

LilBand calibrate_band(std::span<const double> oracle_values, std::size_t aggregated_over) {
    if (oracle_values.size() < 2) throw DomainError("band needs at least 2 oracle values");
    if (aggregated_over < 1) throw DomainError("band aggregation count must be >= 1");
    LilBand band;
    band.oracle_mean = stats::mean(oracle_values);
    band.oracle_sd = std::sqrt(stats::sample_variance(oracle_values));
    band.oracle_replications = oracle_values.size();
    band.aggregated_over = aggregated_over;
    const double half = 3.0 * band.oracle_sd *
                        std::sqrt(1.0 / static_cast<double>(aggregated_over) +
                                  1.0 / static_cast<double>(oracle_values.size()));
    band.lower = band.oracle_mean - half;
    band.upper = band.oracle_mean + half;
    return band;
}

}  // namespace hawkes

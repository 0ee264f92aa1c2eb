#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hawkes/estimate.hpp"

namespace hawkes {

/// Source of s_n^2 = E[S_n^2].
class S2Profile {
  public:
    /// s_n^2 = n * sigma2.
    static S2Profile plugin(double sigma2);
    /// s_n^2 given for n = 1..size().
    static S2Profile explicit_values(std::vector<double> s2);

    double at(std::size_t n) const;
    bool is_plugin() const noexcept { return values_.empty(); }

  private:
    double sigma2_ = 0.0;
    std::vector<double> values_;
};

/// Centered counts X_n = N[n-1, n] - mu with partial sums and variance profile.
/// Index 0 of s_partial and s2 holds S_0 = 0 and s_0^2 = 0.
struct LilSequence {
    std::vector<double> x;
    std::vector<double> s_partial;
    std::vector<double> s2;
    std::size_t n_max = 0;
};

LilSequence build_lil_sequence(const CountSeries& counts, double mu, const S2Profile& profile);

/// Cross-replication second moment mean_r (S_n^{(r)})^2 for n = 1..n_max.
std::vector<double> empirical_s2(std::span<const CountSeries> series, double mu, std::size_t n_max);

/// g(t) = sup{n : s_n^2 <= t}.
std::size_t g_index(const LilSequence& seq, double t);

struct LilPath {
    std::size_t n = 0;
    std::vector<double> grid;
    std::vector<double> values;
    /// sup over [0, 1] of |eta_n|, attained at a knot.
    double norm_sup = 0.0;
    /// eta_n(1) = S_n / sqrt(2 s_n^2 log log s_n^2)
    double endpoint = 0.0;
};

/// Strassen interpolation eta_n on the given grid of t in [0, 1].
LilPath build_eta(const LilSequence& seq, std::size_t n, std::span<const double> grid);

/// Geometric schedule starting at g(e) + 9 with ratio min(2, (n_max/n0)^(1/(min_points-1))),
/// so at least `min_points` values fit below n_max.
std::vector<std::size_t> lil_schedule(const LilSequence& seq, std::size_t n_max, std::size_t min_points = 20);

struct StrassenReport {
    /// max over the schedule of sup_t |eta_n(t)|
    double sup_norm = 0.0;
    /// max over the last half of the schedule of |eta_n(1)|
    double tail_endpoint = 0.0;
    /// int_0^1 (slope)^2 dt of the grid-interpolated path attaining sup_norm
    double energy = 0.0;
    std::size_t schedule_size = 0;
    std::size_t tail_start = 0;
};

StrassenReport strassen_check(std::span<const LilPath> paths);

/// Index of the first schedule entry counted as "tail".
std::size_t schedule_tail_start(std::size_t schedule_size);

struct OracleStatistics {
    std::vector<double> tail_endpoint;
    std::vector<double> sup_norm;
};

/// Tail-endpoint and sup-norm statistics of iid Normal(0, sigma2) sums with
/// s_n^2 = n sigma2 on the same schedule, one value per replication.
OracleStatistics lil_oracle(double sigma2, std::span<const std::size_t> schedule, std::size_t replications,
                            std::uint64_t seed, std::size_t workers);

struct LilBand {
    double lower = 0.0;
    double upper = 0.0;
    double oracle_mean = 0.0;
    double oracle_sd = 0.0;
    std::size_t oracle_replications = 0;
    std::size_t aggregated_over = 0;
};

/// Band for the mean of `aggregated_over` statistics:
/// oracle mean +/- 3 oracle_sd sqrt(1/aggregated_over + 1/oracle_replications).
LilBand calibrate_band(std::span<const double> oracle_values, std::size_t aggregated_over);

}  // namespace hawkes

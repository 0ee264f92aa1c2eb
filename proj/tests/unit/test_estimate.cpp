#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hawkes/errors.hpp"
#include "hawkes/estimate.hpp"
#include "hawkes/rng.hpp"

using namespace hawkes;

namespace {

// X_i = Y_i + Y_{i+1}, Y iid Poisson(1): mean 2, gamma_0 = 2, gamma_1 = 1,
// gamma_j = 0 for j >= 2, long-run variance 4.
std::vector<CountSeries> ma1_series(std::size_t reps, std::size_t m, std::uint64_t seed) {
    std::vector<CountSeries> out(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        std::mt19937_64 engine(substream(seed, r));
        std::poisson_distribution<long> pois(1.0);
        long prev = pois(engine);
        for (std::size_t i = 0; i < m; ++i) {
            const long next = pois(engine);
            out[r].counts.push_back(prev + next);
            prev = next;
        }
    }
    return out;
}

}  // namespace

TEST_CASE("bin_counts uses half-open unit bins (j, j+1]") {
    EventSequence seq{{-0.5, 0.5, 1.0, 1.5, 2.0, 2.9}, 3.0, 1.0};
    const auto c = bin_counts(seq, 0.0, 3);
    CHECK(c.counts == std::vector<long>{2, 2, 1});
    CHECK(bin_counts(seq, 1.0, 2).counts == std::vector<long>{2, 1});
    CHECK_THROWS_AS(bin_counts(seq, 0.0, 0), DomainError);
    CHECK_THROWS_AS(bin_counts(seq, -1.0, 2), DomainError);
    CHECK_THROWS_AS(bin_counts(seq, 0.0, 4), RangeError);
}

TEST_CASE("truncation policy caps") {
    CHECK(TruncationPolicy::adaptive(0.5).cap() == 15);
    CHECK(TruncationPolicy::adaptive(0.0).cap() == 1);
    CHECK(TruncationPolicy::adaptive(0.4).cap() == 11);
    CHECK(TruncationPolicy::adaptive(0.5).candidate_lags() == 17);
    CHECK(TruncationPolicy::fixed(4).cap() == 4);
    CHECK(TruncationPolicy::fixed(4).min_bins() == 40);
    CHECK_THROWS_AS(TruncationPolicy::adaptive(1.0), DomainError);
    CHECK_THROWS_AS(TruncationPolicy::fixed(0), DomainError);
}

TEST_CASE("long-run variance of an MA(1) count series") {
    const auto series = ma1_series(50, 20000, 77);
    for (const auto& policy : {TruncationPolicy::fixed(3), TruncationPolicy::adaptive(0.5)}) {
        const auto s = estimate_sigma2(series, policy);
        CHECK(s.replications == 50);
        CHECK(s.total_bins == 1000000);
        CHECK(std::abs(s.mu_hat - 2.0) < 4.0 * s.standard_errors.mu_hat);
        CHECK(std::abs(s.gamma_hat[0] - 2.0) < 4.0 * s.standard_errors.gamma[0]);
        CHECK(std::abs(s.gamma_hat[1] - 1.0) < 4.0 * s.standard_errors.gamma[1]);
        CHECK(std::abs(s.gamma_hat[2]) < 4.0 * s.standard_errors.gamma[2]);
        CHECK(std::abs(s.sigma2_series - 4.0) < 4.0 * s.standard_errors.sigma2_series);
        CHECK(std::abs(s.sigma2_batch - 4.0) < 4.0 * s.standard_errors.sigma2_batch);
        CHECK(s.truncation_lag >= 1);
        CHECK(s.truncation_lag <= policy.cap());
    }
}

TEST_CASE("batch layout: ceil(m^(1/3)) batches per series") {
    const auto series = ma1_series(10, 1000, 5);
    const auto s = estimate_sigma2(series, TruncationPolicy::fixed(2));
    CHECK(s.batch_count == 100);  // 10 per series, 10 series
    CHECK(s.batch_width == 100);
}

TEST_CASE("pooled autocovariances use the total bin count") {
    // two series, mean 1, centered values in blocks of two; lag-1 products
    // sum to 1 in each series, so gamma_1 = 2 / 20
    std::vector<CountSeries> series{{{2, 2, 0, 0, 2, 2, 0, 0, 2, 2}}, {{0, 0, 2, 2, 0, 0, 2, 2, 0, 0}}};
    const auto s = estimate_sigma2(series, TruncationPolicy::fixed(1));
    CHECK(s.mu_hat == 1.0);
    CHECK(s.gamma_hat[0] == doctest::Approx(1.0));
    CHECK(s.gamma_hat[1] == doctest::Approx(0.1));
    CHECK(s.sigma2_series == doctest::Approx(1.2));
}

TEST_CASE("estimator errors") {
    std::vector<CountSeries> constant{{std::vector<long>(1000, 3)}};
    CHECK_THROWS_AS(estimate_sigma2(constant, TruncationPolicy::fixed(2)), DegenerateVariance);
    std::vector<CountSeries> tiny{{{1, 2, 3}}};
    CHECK_THROWS_AS(estimate_sigma2(tiny, TruncationPolicy::fixed(2)), DomainError);
    CHECK_THROWS_AS(estimate_sigma2({}, TruncationPolicy::fixed(2)), DomainError);
}

TEST_CASE("linear oracle") {
    const auto o = linear_oracle(1.0, 0.5);
    CHECK(o.mu == doctest::Approx(2.0));
    CHECK(o.sigma2 == doctest::Approx(8.0));
    const auto p = linear_oracle(2.0, 0.0);
    CHECK(p.mu == 2.0);
    CHECK(p.sigma2 == 2.0);
    CHECK_THROWS_AS(linear_oracle(1.0, 1.0), StabilityViolation);
}

TEST_CASE("coupling gap bound") {
    const auto lin = validate_model(Kernel::exponential(1.0, 2.0), RateFunction::linear(1.0));
    CHECK(coupling_gap_bound(lin) == doctest::Approx(0.5));
    const auto sat = validate_model(Kernel::exponential(1.0, 1.0), RateFunction::saturating(0.5, 0.4));
    CHECK(coupling_gap_bound(sat) == doctest::Approx(0.4 / 0.6));
}

TEST_CASE("linear Hawkes autocovariances match the covariance density") {
    // c(u) = 3 e^{-|u|} for nu = 1, h = e^{-2t}; integrating over unit bins
    // gives gamma_j = 3 (e - 1)^2 e^{-j-1} for j >= 1 and gamma_0 = 2 + 6/e.
    const auto m = validate_model(Kernel::exponential(1.0, 2.0), RateFunction::linear(1.0));
    std::vector<CountSeries> series;
    for (std::uint64_t r = 0; r < 20; ++r) {
        const auto out = simulate_with_burnin(m, 5000.0, 20.0, substream(99, r), {0.0, 0.0});
        series.push_back(bin_counts(out.events, 0.0, 5000));
    }
    const auto s = estimate_sigma2(series, TruncationPolicy::fixed(3));
    const double e = std::exp(1.0);
    CHECK(std::abs(s.gamma_hat[0] - (2.0 + 6.0 / e)) < 4.0 * s.standard_errors.gamma[0]);
    for (int j = 1; j <= 3; ++j) {
        const double expected = 3.0 * (e - 1.0) * (e - 1.0) * std::exp(-j - 1.0);
        CHECK(std::abs(s.gamma_hat[j] - expected) < 4.0 * s.standard_errors.gamma[j]);
    }
}

TEST_CASE("tail diagnostic") {
    std::vector<CountSeries> pois(4);
    std::mt19937_64 engine(3);
    std::poisson_distribution<long> dist(2.0);
    for (auto& s : pois)
        for (int i = 0; i < 5000; ++i) s.counts.push_back(dist(engine));
    const std::vector<double> thetas{0.1, 0.5};
    const auto d = tail_diagnostic(pois, thetas);
    CHECK_FALSE(d.inconclusive);
    CHECK(d.consistent_with_exponential_tail);
    // E exp(theta N) = exp(2 (e^theta - 1))
    CHECK(d.empirical_mgf[0] == doctest::Approx(std::exp(2.0 * std::expm1(0.1))).epsilon(0.01));

    std::vector<CountSeries> flat{{std::vector<long>(20000, 1)}};
    CHECK(tail_diagnostic(flat, thetas).inconclusive);
    std::vector<CountSeries> short_series{{std::vector<long>(100, 1)}};
    CHECK_THROWS_AS(tail_diagnostic(short_series, thetas), DomainError);
}

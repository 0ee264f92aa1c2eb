#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hawkes/errors.hpp"
#include "hawkes/lil.hpp"
#include "hawkes/rng.hpp"

using namespace hawkes;

namespace {

CountSeries poisson_series(std::size_t n, double mean, std::uint64_t seed) {
    std::mt19937_64 engine(seed);
    std::poisson_distribution<long> dist(mean);
    CountSeries s;
    for (std::size_t i = 0; i < n; ++i) s.counts.push_back(dist(engine));
    return s;
}

// Direct evaluation: find k with s_k^2 <= t s_n^2 < s_{k+1}^2 by a linear scan,
// then interpolate S between k and k + 1.
double eta_direct(const CountSeries& c, double mu, const std::vector<double>& s2, std::size_t n, double t) {
    const double target = t * s2[n];
    std::size_t k = 0;
    while (k + 1 < n && s2[k + 1] <= target) ++k;
    double sk = 0.0;
    for (std::size_t i = 0; i < k; ++i) sk += static_cast<double>(c.counts[i]) - mu;
    const double xk1 = static_cast<double>(c.counts[k]) - mu;
    const double frac = (target - s2[k]) / (s2[k + 1] - s2[k]);
    return (sk + frac * xk1) / std::sqrt(2.0 * s2[n] * std::log(std::log(s2[n])));
}

}  // namespace

TEST_CASE("sequence construction") {
    const auto c = poisson_series(100, 2.0, 1);
    const auto seq = build_lil_sequence(c, 2.0, S2Profile::plugin(2.0));
    REQUIRE(seq.n_max == 100);
    CHECK(seq.s2[0] == 0.0);
    CHECK(seq.s2[10] == doctest::Approx(20.0));
    CHECK(seq.s_partial[0] == 0.0);
    CHECK(seq.s_partial[3] == doctest::Approx(seq.x[0] + seq.x[1] + seq.x[2]));
    CHECK_THROWS_AS(build_lil_sequence(c, 2.0, S2Profile::explicit_values({1.0, 1.0, 2.0})), InputError);
    CHECK_THROWS_AS(build_lil_sequence(CountSeries{}, 2.0, S2Profile::plugin(1.0)), DomainError);
    CHECK_THROWS_AS(S2Profile::plugin(0.0), DomainError);
}

TEST_CASE("g index") {
    const auto seq = build_lil_sequence(poisson_series(50, 1.0, 2), 1.0, S2Profile::plugin(1.0));
    CHECK(g_index(seq, 0.5) == 0);
    CHECK(g_index(seq, 1.0) == 1);
    CHECK(g_index(seq, std::exp(1.0)) == 2);
    CHECK(g_index(seq, 10.0) == 10);
    CHECK(g_index(seq, 1e9) == 50);
}

TEST_CASE("eta agrees with direct evaluation at random points") {
    const auto c = poisson_series(2000, 2.0, 3);
    std::vector<double> s2_explicit(2000);
    for (std::size_t i = 0; i < s2_explicit.size(); ++i) s2_explicit[i] = 8.0 * (i + 1) - 3.0 * (1.0 - std::exp(-double(i)));
    for (const auto& profile : {S2Profile::plugin(8.0), S2Profile::explicit_values(s2_explicit)}) {
        const auto seq = build_lil_sequence(c, 2.0, profile);
        std::mt19937_64 engine(4);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::uniform_int_distribution<std::size_t> pick(10, 2000);
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t n = pick(engine);
            const std::vector<double> grid{u(engine), u(engine), 0.0, 1.0};
            const auto path = build_eta(seq, n, grid);
            for (std::size_t i = 0; i < grid.size(); ++i)
                CHECK(path.values[i] == doctest::Approx(eta_direct(c, 2.0, seq.s2, n, grid[i])).epsilon(1e-12));
            CHECK(path.endpoint == doctest::Approx(path.values[3]).epsilon(1e-12));
            CHECK(path.values[2] == 0.0);
        }
    }
}

TEST_CASE("eta knots reproduce partial sums") {
    const auto seq = build_lil_sequence(poisson_series(200, 2.0, 5), 2.0, S2Profile::plugin(2.0));
    const std::size_t n = 100;
    std::vector<double> grid;
    for (std::size_t k = 0; k <= n; ++k) grid.push_back(static_cast<double>(k) / n);
    const auto path = build_eta(seq, n, grid);
    const double denom = std::sqrt(2.0 * seq.s2[n] * std::log(std::log(seq.s2[n])));
    double sup = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        CHECK(path.values[k] == doctest::Approx(seq.s_partial[k] / denom).epsilon(1e-12));
        sup = std::max(sup, std::abs(path.values[k]));
    }
    CHECK(path.norm_sup == doctest::Approx(sup));
}

TEST_CASE("scaling the variance profile rescales eta") {
    // with s_n^2 -> c^2 s_n^2 the knots stay put, only the normaliser changes
    const auto c = poisson_series(500, 2.0, 6);
    const auto a = build_lil_sequence(c, 2.0, S2Profile::plugin(2.0));
    const double scale2 = 4.0;
    const auto b = build_lil_sequence(c, 2.0, S2Profile::plugin(2.0 * scale2));
    const std::vector<double> grid{0.1, 0.37, 0.5, 1.0};
    for (std::size_t n : {20u, 150u, 500u}) {
        const auto pa = build_eta(a, n, grid);
        const auto pb = build_eta(b, n, grid);
        const double s2 = a.s2[n];
        const double factor = std::sqrt(std::log(std::log(s2)) / std::log(std::log(scale2 * s2))) / std::sqrt(scale2);
        for (std::size_t i = 0; i < grid.size(); ++i)
            CHECK(pb.values[i] == doctest::Approx(pa.values[i] * factor).epsilon(1e-12));
    }
}

TEST_CASE("eta preconditions") {
    const auto seq = build_lil_sequence(poisson_series(100, 1.0, 7), 1.0, S2Profile::plugin(1.0));
    const std::vector<double> grid{0.5};
    CHECK_THROWS_AS(build_eta(seq, 2, grid), DomainError);
    CHECK_THROWS_AS(build_eta(seq, 101, grid), RangeError);
    const std::vector<double> bad{1.5};
    CHECK_THROWS_AS(build_eta(seq, 50, bad), DomainError);
}

TEST_CASE("schedule") {
    const auto seq = build_lil_sequence(poisson_series(100000, 2.0, 8), 2.0, S2Profile::plugin(8.0));
    const auto sched = lil_schedule(seq, 100000);
    REQUIRE(sched.size() >= 20);
    CHECK(sched.front() == g_index(seq, std::exp(1.0)) + 9);
    CHECK(sched.back() == 100000);
    for (std::size_t i = 1; i < sched.size(); ++i) {
        CHECK(sched[i] > sched[i - 1]);
        CHECK(static_cast<double>(sched[i]) <= 2.0 * static_cast<double>(sched[i - 1]) + 1.0);
    }
    CHECK(schedule_tail_start(sched.size()) == sched.size() / 2);

    // s_1^2 = 8 > e, so the schedule starts at n0 = 9 and n_max must exceed it
    const auto small = build_lil_sequence(poisson_series(9, 2.0, 8), 2.0, S2Profile::plugin(8.0));
    CHECK_THROWS_AS(lil_schedule(small, 9), DomainError);
}

TEST_CASE("strassen check") {
    const auto seq = build_lil_sequence(poisson_series(20000, 2.0, 9), 2.0, S2Profile::plugin(2.0));
    const auto sched = lil_schedule(seq, 20000);
    std::vector<double> grid;
    for (int i = 0; i <= 20; ++i) grid.push_back(i / 20.0);
    std::vector<LilPath> paths;
    for (std::size_t n : sched) paths.push_back(build_eta(seq, n, grid));
    const auto rep = strassen_check(paths);
    CHECK(rep.schedule_size == sched.size());
    CHECK(rep.tail_start == sched.size() / 2);
    double sup = 0.0;
    double tail = 0.0;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        sup = std::max(sup, paths[i].norm_sup);
        if (i >= rep.tail_start) tail = std::max(tail, std::abs(paths[i].endpoint));
    }
    CHECK(rep.sup_norm == sup);
    CHECK(rep.tail_endpoint == tail);
    CHECK(rep.energy >= 0.0);
    const std::span<const LilPath> few(paths.data(), 5);
    CHECK_THROWS_AS(strassen_check(few), DomainError);
}

TEST_CASE("oracle is deterministic across worker counts") {
    const std::vector<std::size_t> sched{12, 30, 60, 120, 240};
    const auto a = lil_oracle(2.0, sched, 40, 11, 1);
    const auto b = lil_oracle(2.0, sched, 40, 11, 4);
    CHECK(a.tail_endpoint == b.tail_endpoint);
    CHECK(a.sup_norm == b.sup_norm);
    CHECK(a.tail_endpoint.size() == 40);
    CHECK_THROWS_AS(lil_oracle(2.0, sched, 1, 11, 1), DomainError);
}

TEST_CASE("band formula") {
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    const auto band = calibrate_band(v, 5);
    const double sd = std::sqrt(5.0 / 3.0);
    const double half = 3.0 * sd * std::sqrt(1.0 / 5.0 + 1.0 / 4.0);
    CHECK(band.oracle_mean == doctest::Approx(2.5));
    CHECK(band.lower == doctest::Approx(2.5 - half));
    CHECK(band.upper == doctest::Approx(2.5 + half));
    CHECK(band.oracle_replications == 4);
    CHECK(band.aggregated_over == 5);
    CHECK_THROWS_AS(calibrate_band(v, 0), DomainError);
}

TEST_CASE("empirical s2") {
    std::vector<CountSeries> s{{{1, 3, 2}}, {{3, 1, 2}}};
    const auto s2 = empirical_s2(s, 2.0, 3);
    // partial sums: (-1, 0, 0) and (1, 0, 0)
    CHECK(s2 == std::vector<double>{1.0, 0.0, 0.0});
    CHECK_THROWS_AS(empirical_s2(s, 2.0, 4), RangeError);
}

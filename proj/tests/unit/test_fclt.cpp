#include <doctest.h>

#include <cmath>
#include <vector>

#include "hawkes/errors.hpp"
#include "hawkes/fclt.hpp"
#include "hawkes/rng.hpp"

using namespace hawkes;

namespace {

// Brownian paths with variance sigma2 per unit s, sampled on the uniform grid.
std::vector<RescaledPath> brownian_paths(std::size_t count, double sigma2, std::uint64_t seed, std::size_t g = 21) {
    std::vector<RescaledPath> out(count);
    const auto grid = uniform_grid(g);
    for (std::size_t r = 0; r < count; ++r) {
        Rng rng(substream(seed, r));
        out[r].grid = grid;
        out[r].t_scale = 1.0;
        out[r].values.assign(g, 0.0);
        for (std::size_t i = 1; i < g; ++i)
            out[r].values[i] = out[r].values[i - 1] + std::sqrt(sigma2 * (grid[i] - grid[i - 1])) * rng.normal();
    }
    return out;
}

}  // namespace

TEST_CASE("uniform grid") {
    const auto g = uniform_grid(5);
    CHECK(g == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK_THROWS_AS(uniform_grid(1), DomainError);
}

TEST_CASE("rescaled path by hand") {
    EventSequence seq{{-0.2, 1.0, 2.5, 3.0, 3.5}, 4.0, 1.0};
    const auto p = build_rescaled(seq, 1.0, 4.0, 5);
    // N on (0, st] at st = 0, 1, 2, 3, 4 is 0, 1, 1, 3, 4
    const std::vector<double> expected{0.0, 0.0, -0.5, 0.0, 0.0};
    for (std::size_t i = 0; i < 5; ++i) CHECK(p.values[i] == doctest::Approx(expected[i]));
    CHECK(p.at(0.5) == doctest::Approx(-0.5));
    CHECK_THROWS_AS(p.at(0.3), DomainError);
    CHECK_THROWS_AS(build_rescaled(seq, 1.0, 5.0, 5), RangeError);
    CHECK_THROWS_AS(build_rescaled(seq, 1.0, 0.0, 5), DomainError);
}

TEST_CASE("compensated path needs grid-aligned compensator points") {
    EventSequence seq{{0.5, 1.5}, 2.0, 0.0};
    const std::vector<CompensatorPoint> comp{{0.0, 0.0}, {1.0, 0.8}, {2.0, 2.2}};
    const auto p = build_compensated(seq, comp, 2.0, 3);
    CHECK(p.values[1] == doctest::Approx((1.0 - 0.8) / std::sqrt(2.0)));
    CHECK(p.values[2] == doctest::Approx((2.0 - 2.2) / std::sqrt(2.0)));
    CHECK_THROWS_AS(build_compensated(seq, comp, 2.0, 5), DomainError);
}

TEST_CASE("max jump") {
    EventSequence simple{{0.5, 1.0, 3.0}, 4.0, 0.0};
    CHECK(max_jump(simple, 4.0) == doctest::Approx(0.5));
    EventSequence doubled{{0.5, 1.0, 1.0, 3.0}, 4.0, 0.0};
    CHECK(max_jump(doubled, 4.0) == doctest::Approx(1.0));
    EventSequence empty{{}, 4.0, 0.0};
    CHECK(max_jump(empty, 4.0) == 0.0);
}

TEST_CASE("Gaussian tests accept Brownian paths with the right variance") {
    const auto paths = brownian_paths(1000, 8.0, 31);
    const std::vector<double> s{0.25, 0.5, 0.75, 1.0};
    CHECK(test_marginal_normality(paths, 1.0, 8.0).pass);
    CHECK(test_marginal_normality(paths, 0.5, 8.0).pass);
    CHECK(test_variance_scaling(paths, s, 8.0).pass);
    const auto indep = test_increment_independence(paths, s);
    CHECK(indep.pass);
    CHECK(indep.n_samples == 1000);
}

TEST_CASE("Gaussian tests reject a wrong variance") {
    const auto paths = brownian_paths(1000, 8.0, 32);
    const std::vector<double> s{0.25, 0.5, 0.75, 1.0};
    CHECK_FALSE(test_marginal_normality(paths, 1.0, 4.0).pass);
    CHECK_FALSE(test_variance_scaling(paths, s, 4.0).pass);
}

TEST_CASE("increment test rejects correlated increments") {
    // path(s) = sqrt(s) Z: all increments share Z
    std::vector<RescaledPath> paths(600);
    const auto grid = uniform_grid(5);
    for (std::size_t r = 0; r < paths.size(); ++r) {
        Rng rng(substream(5, r));
        const double z = rng.normal();
        paths[r].grid = grid;
        for (double s : grid) paths[r].values.push_back(std::sqrt(s) * z);
    }
    const std::vector<double> s{0.25, 0.5, 0.75, 1.0};
    CHECK_FALSE(test_increment_independence(paths, s).pass);
}

TEST_CASE("compensated variance") {
    const auto bm = brownian_paths(2000, 2.0, 8);
    std::vector<CompensatedPath> paths;
    for (const auto& p : bm) {
        CompensatedPath c;
        c.grid = p.grid;
        c.values = p.values;
        paths.push_back(c);
    }
    CHECK(test_compensated_variance(paths, 2.0).pass);
    CHECK_FALSE(test_compensated_variance(paths, 3.0).pass);
}

TEST_CASE("test preconditions") {
    const auto few = brownian_paths(100, 1.0, 1);
    const auto some = brownian_paths(300, 1.0, 1);
    const std::vector<double> s{0.5, 1.0};
    CHECK_THROWS_AS(test_marginal_normality(few, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(test_marginal_normality(some, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(test_marginal_normality(some, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(test_increment_independence(some, s), DomainError);
    const std::vector<double> unsorted{1.0, 0.5};
    CHECK_THROWS_AS(test_increment_independence(brownian_paths(500, 1.0, 1), unsorted), DomainError);
    CHECK_THROWS_AS(test_variance_scaling(few, s, 1.0), DomainError);
}

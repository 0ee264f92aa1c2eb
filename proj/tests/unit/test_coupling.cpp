#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hawkes/coupling.hpp"
#include "hawkes/estimate.hpp"

using namespace hawkes;

namespace {

HawkesModel linear_model() { return validate_model(Kernel::exponential(1.0, 2.0), RateFunction::linear(1.0)); }

bool contains(const EventSequence& big, const EventSequence& small) {
    return std::includes(big.times.begin(), big.times.end(), small.times.begin(), small.times.end());
}

}  // namespace

TEST_CASE("base process is contained in the history-started process") {
    const auto m = linear_model();
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto pair = simulate_coupled(m, History({-0.7, 0.0}), 30.0, seed);
        CHECK(pair.converged);
        CHECK(contains(pair.augmented_events, pair.base_events));
        CHECK(pair.shared_seed == seed);
    }
}

TEST_CASE("empty history gives identical processes") {
    const auto pair = simulate_coupled(linear_model(), History(), 30.0, 3);
    CHECK(pair.base_events.times == pair.augmented_events.times);
    CHECK(coupling_gap_total(pair) == 0);
}

TEST_CASE("coupling is deterministic in the seed") {
    const auto a = simulate_coupled(linear_model(), History({0.0}), 30.0, 17);
    const auto b = simulate_coupled(linear_model(), History({0.0}), 30.0, 17);
    CHECK(a.base_events.times == b.base_events.times);
    CHECK(a.augmented_events.times == b.augmented_events.times);
    CHECK(a.layers == b.layers);
}

TEST_CASE("zero kernel: history has no influence") {
    const auto m = validate_model(Kernel::zero(), RateFunction::linear(2.0));
    const auto pair = simulate_coupled(m, History({0.0}), 30.0, 5);
    CHECK(pair.base_events.times == pair.augmented_events.times);
    CHECK(coupling_gap_bound(m) == 0.0);
}

TEST_CASE("gap by bin counts the difference per unit bin") {
    const auto pair = simulate_coupled(linear_model(), History({0.0}), 20.0, 23);
    const auto gaps = coupling_gap_by_bin(pair);
    REQUIRE(gaps.size() == 20);
    long total = 0;
    for (long g : gaps) {
        CHECK(g >= 0);
        total += g;
    }
    CHECK(total == static_cast<long>(pair.augmented_events.times.size() - pair.base_events.times.size()));
    CHECK(coupling_gap_total(pair) == total - gaps[0]);
}

TEST_CASE("base layer has the law of the empty-history process") {
    // Mean count on (0, T] of the stationary-from-empty linear process is
    // close to mu T = 2T once T >> 1; the coupler's base layer must agree.
    const auto m = linear_model();
    double total = 0.0;
    const int seeds = 200;
    for (int s = 0; s < seeds; ++s)
        total += static_cast<double>(simulate_coupled(m, History(), 50.0, 1000 + s).base_events.times.size());
    const double mean = total / seeds;
    // E lambda_t = 2 - e^{-t} from empty, so E N(0, 50] = 99; SE of the mean ~1.4
    CHECK(mean == doctest::Approx(100.0 - 1.0).epsilon(0.045));
}

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hawkes/model.hpp"
#include "hawkes/simulate.hpp"

namespace hawkes {

/// Empty-history process N^0 and history-started process N driven by the
/// same unit-rate planar Poisson measure on [0, T] x [0, inf).
struct CoupledPair {
    EventSequence base_events;
    EventSequence augmented_events;
    std::uint64_t shared_seed = 0;
    /// Number of difference layers D_1..D_n evaluated.
    std::size_t layers = 0;
    /// False when max_layers was reached with a non-empty last layer.
    bool converged = true;
    /// Height of the generated part of the planar Poisson measure.
    double mark_ceiling = 0.0;
};

/// Poisson-embedding construction.
///
/// Layer 0 thins the planar points with the self-exciting curve lambda^0
/// built from N^0 alone. Layer n >= 1 evaluates
///   lambda^n_t = lambda(sum_{tau in N^{n-1}, tau < t} h(t - tau) + sum_{tau in history} h(t - tau))
/// and adds D_n = planar points with mark in [lambda^{n-1}_t, lambda^n_t).
/// Iteration stops at the first empty layer on (0, T]. The planar measure
/// is drawn in horizontal strips of fixed height, each from its own
/// substream of `seed`, and extended until every curve stays below the
/// generated ceiling, so the result depends only on the inputs.
CoupledPair simulate_coupled(const HawkesModel& model, const History& history, double horizon, std::uint64_t seed,
                             std::size_t max_layers = 1000);

/// Per-bin count difference augmented - base on (j, j+1], j = 0..floor(T)-1.
std::vector<long> coupling_gap_by_bin(const CoupledPair& pair);

/// Total gap over bins (n, n+1] with n >= 1, the range summed by the
/// geometric coupling bound.
long coupling_gap_total(const CoupledPair& pair);

}  // namespace hawkes

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hawkes/model.hpp"

namespace hawkes {

/// Strictly increasing event times in (-history_depth, horizon].
struct EventSequence {
    std::vector<double> times;
    double horizon = 0.0;
    double history_depth = 0.0;

    /// Number of events in (a, b].
    std::size_t count(double a, double b) const;

    /// Events in (0, horizon], i.e. with the history segment removed.
    std::span<const double> window() const;
};

struct CompensatorPoint {
    double t;
    double value;  // Lambda(t) = int_0^t lambda_s ds
};

struct SimulationOptions {
    /// Spacing of the compensator grid on [0, T]; 0 disables the grid.
    double compensator_step = 1.0;
    /// Drop past events with h(t - tau) below this from the excitation sum.
    /// 0 (default) keeps every event; any positive value biases the intensity
    /// downwards by at most the sum of dropped terms.
    double prune_threshold = 0.0;
};

struct SimulationOutput {
    EventSequence events;
    std::vector<CompensatorPoint> compensator_grid;
    /// Left-limit intensity lambda_{tau-} at each event, aligned with events.times.
    std::vector<double> intensity_at_events;
    /// Signed Lambda(tau) = int_0^tau lambda_s ds at each event, aligned with
    /// events.times (negative for burn-in events).
    std::vector<double> compensator_at_events;
};

/// Exact thinning simulation on (0, horizon] conditioned on `history`.
/// Deterministic in (model, history, horizon, seed, options).
SimulationOutput simulate(const HawkesModel& model, const History& history, double horizon,
                          std::uint64_t seed, const SimulationOptions& options = {});

/// Starts from the empty configuration at -burnin and returns events on
/// (-burnin, horizon]; the compensator is anchored at time 0.
SimulationOutput simulate_with_burnin(const HawkesModel& model, double horizon, double burnin,
                                      std::uint64_t seed, const SimulationOptions& options = {});

/// Dominating intensity lambda(excitation_sum) valid until the next event.
double thinning_bound(const HawkesModel& model, double excitation_sum);

/// Largest admissible burn-in; larger requirements are configuration errors.
inline constexpr double kBurninCap = 1.0e4;

/// Grid spacing for stationary_burnin.
inline constexpr double kBurninGridStep = 0.01;

/// Smallest B on the grid kBurninGridStep * k with
/// alpha / (1 - alpha ||h||_1) * int_B^inf t h(t) dt < epsilon.
double stationary_burnin(const HawkesModel& model, double epsilon);

/// Lambda(tau_{k+1}) - Lambda(tau_k) for consecutive events in (0, T],
/// starting from Lambda(0) = 0. Exp(1) distributed under the model.
std::vector<double> time_rescaled_gaps(const SimulationOutput& output);

}  // namespace hawkes

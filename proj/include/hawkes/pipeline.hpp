#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hawkes/config.hpp"
#include "hawkes/errors.hpp"
#include "hawkes/estimate.hpp"
#include "hawkes/fclt.hpp"
#include "hawkes/lil.hpp"
#include "hawkes/simulate.hpp"

namespace hawkes {

/// The budget is too small for the requested statistic to mean anything.
struct UnderPowered : Error {
    using Error::Error;
};

/// Independent master seed for an auxiliary stream (oracle, coupling, ...).
std::uint64_t derived_seed(std::uint64_t master, std::uint64_t salt) noexcept;

inline constexpr std::uint64_t kOracleSalt = 0x6f7261636c65ULL;
inline constexpr std::uint64_t kCouplingSalt = 0x636f75706c65ULL;

/// Per-replication reductions kept after the raw events are dropped.
struct ReplicationSummary {
    /// N(s t) / sqrt(t) on the fclt grid, i.e. the rescaled path with mu = 0.
    RescaledPath uncentered;
    /// (N(s t) - Lambda(s t)) / sqrt(t); empty when no compensator is known.
    CompensatedPath compensated;
    /// Leading time-rescaled inter-arrival gaps; empty unless simulated.
    std::vector<double> residual_gaps;
    /// Largest path jump times sqrt(t), i.e. the largest event multiplicity.
    double max_multiplicity = 0.0;
    std::size_t event_count = 0;
};

struct Sample {
    double horizon = 0.0;
    double burnin = 0.0;
    std::size_t grid = 0;
    std::vector<CountSeries> counts;  // unit bins on (0, floor(T)]
    std::vector<ReplicationSummary> replications;
    bool has_compensator = false;
    bool has_residuals = false;
};

struct SampleOptions {
    std::size_t grid = 101;
    /// Total number of residual gaps kept across replications.
    std::size_t residual_cap = 200000;
};

/// Burn-in length for the configured epsilon.
double configured_burnin(const HawkesModel& model, const RunConfig& config);

/// Replication r of the configured run: burn-in from empty, seed substream(seed, r).
SimulationOutput simulate_replication(const HawkesModel& model, const RunConfig& config, double burnin,
                                      std::size_t r, double compensator_step);

/// Simulates every replication and keeps only the summaries.
Sample simulate_sample(const HawkesModel& model, const RunConfig& config, std::size_t workers,
                       const SampleOptions& options);

/// Builds a sample from previously written events (and optionally compensator) tables.
Sample sample_from_events(const std::vector<EventSequence>& events,
                          const std::vector<std::vector<CompensatorPoint>>* compensator, double horizon,
                          std::size_t grid);

struct Centering {
    double mu = 0.0;
    double sigma2 = 0.0;
    std::string source;  // "oracle" | "estimated"
};

/// Exact constants when the rate is linear.
std::optional<LinearOracle> model_oracle(const HawkesModel& model);

/// Estimates on the sample; throws UnderPowered when there are too few bins.
PathStatistics estimate_sample(const HawkesModel& model, const Sample& sample);

/// Oracle constants when available, otherwise (mu_hat, sigma2_series).
Centering choose_centering(const HawkesModel& model, const PathStatistics& stats);

/// Centered paths (N(st) - mu s t) / sqrt(t).
std::vector<RescaledPath> centered_paths(const Sample& sample, double mu);
std::vector<CompensatedPath> compensated_paths(const Sample& sample);

/// Pooled residual gaps in replication order.
std::vector<double> pooled_residuals(const Sample& sample);

struct LilAnalysis {
    Centering centering;
    std::string s2_mode;
    std::size_t n_max = 0;
    std::vector<std::size_t> schedule;
    std::vector<StrassenReport> per_replication;
    /// Paths per replication and schedule entry, kept only on request.
    std::vector<std::vector<LilPath>> paths;
    double mean_tail_endpoint = 0.0;
    double mean_sup_norm = 0.0;
    double max_energy = 0.0;
    LilBand tail_band;
    LilBand sup_band;
    bool tail_inside_band = false;
    bool sup_inside_band = false;
};

/// LIL statistics of every replication against the iid-normal oracle band
/// at the same schedule. Throws UnderPowered if the series are too short
/// for a 20-point schedule.
LilAnalysis analyze_lil(std::span<const CountSeries> counts, const Centering& centering, const LilSection& lil,
                        std::uint64_t seed, std::size_t workers, bool keep_paths);

}  // namespace hawkes

#include "hawkes/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "hawkes/parallel.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/stats.hpp"

namespace hawkes {

namespace {

constexpr std::size_t kMinSchedule = 20;

ReplicationSummary summarize(const EventSequence& events, std::span<const CompensatorPoint> compensator,
                             double horizon, std::size_t grid) {
    ReplicationSummary s;
    s.uncentered = build_rescaled(events, 0.0, horizon, grid);
    if (!compensator.empty()) s.compensated = build_compensated(events, compensator, horizon, grid);
    s.max_multiplicity = max_jump(events, horizon) * std::sqrt(horizon);
    s.event_count = events.count(0.0, horizon);
    return s;
}

std::size_t whole_bins(double horizon) { return static_cast<std::size_t>(std::floor(horizon)); }

}  // namespace

std::uint64_t derived_seed(std::uint64_t master, std::uint64_t salt) noexcept {
    return mix64(mix64(master) + mix64(salt));
}

double configured_burnin(const HawkesModel& model, const RunConfig& config) {
    return stationary_burnin(model, config.run.burnin_epsilon);
}

SimulationOutput simulate_replication(const HawkesModel& model, const RunConfig& config, double burnin,
                                      std::size_t r, double compensator_step) {
    SimulationOptions options;
    options.compensator_step = compensator_step;
    return simulate_with_burnin(model, config.run.horizon, burnin, substream(config.run.seed, r), options);
}

Sample simulate_sample(const HawkesModel& model, const RunConfig& config, std::size_t workers,
                       const SampleOptions& options) {
    const std::size_t reps = config.run.replications;
    Sample sample;
    sample.horizon = config.run.horizon;
    sample.burnin = configured_burnin(model, config);
    sample.grid = options.grid;
    sample.has_compensator = true;
    sample.has_residuals = true;
    sample.counts.resize(reps);
    sample.replications.resize(reps);

    const std::size_t bins = whole_bins(sample.horizon);
    const std::size_t gaps_per_rep = (options.residual_cap + reps - 1) / reps;
    // compensator sampled exactly on the fclt grid s_i * T
    const double step = sample.horizon / static_cast<double>(options.grid - 1);
    parallel_for(reps, workers, [&](std::size_t r) {
        const auto out = simulate_replication(model, config, sample.burnin, r, step);
        if (bins > 0) sample.counts[r] = bin_counts(out.events, 0.0, bins);
        auto summary = summarize(out.events, out.compensator_grid, sample.horizon, options.grid);
        auto gaps = time_rescaled_gaps(out);
        if (gaps.size() > gaps_per_rep) gaps.resize(gaps_per_rep);
        summary.residual_gaps = std::move(gaps);
        sample.replications[r] = std::move(summary);
    });
    return sample;
}

Sample sample_from_events(const std::vector<EventSequence>& events,
                          const std::vector<std::vector<CompensatorPoint>>* compensator, double horizon,
                          std::size_t grid) {
    Sample sample;
    sample.horizon = horizon;
    sample.grid = grid;
    sample.has_compensator = compensator != nullptr;
    const std::size_t bins = whole_bins(horizon);
    for (std::size_t r = 0; r < events.size(); ++r) {
        if (bins > 0) sample.counts.push_back(bin_counts(events[r], 0.0, bins));
        std::span<const CompensatorPoint> comp;
        if (compensator) comp = (*compensator)[r];
        if (compensator && comp.empty())
            throw InputError("compensator table has no rows for replication " + std::to_string(r));
        sample.replications.push_back(summarize(events[r], comp, horizon, grid));
    }
    return sample;
}

std::optional<LinearOracle> model_oracle(const HawkesModel& model) {
    if (!model.rate().is_linear()) return std::nullopt;
    return linear_oracle(model.rate().base(), model.kernel().l1_norm());
}

PathStatistics estimate_sample(const HawkesModel& model, const Sample& sample) {
    const auto policy = TruncationPolicy::adaptive(model.contraction());
    std::size_t total = 0;
    for (const auto& c : sample.counts) total += c.counts.size();
    if (sample.counts.empty() || total < policy.min_bins())
        throw UnderPowered("only " + std::to_string(total) + " unit bins; the variance estimator needs at least " +
                           std::to_string(policy.min_bins()));
    return estimate_sigma2(sample.counts, policy);
}

Centering choose_centering(const HawkesModel& model, const PathStatistics& stats) {
    if (const auto oracle = model_oracle(model)) return {oracle->mu, oracle->sigma2, "oracle"};
    return {stats.mu_hat, stats.sigma2_series, "estimated"};
}

std::vector<RescaledPath> centered_paths(const Sample& sample, double mu) {
    std::vector<RescaledPath> out;
    out.reserve(sample.replications.size());
    for (const auto& rep : sample.replications) {
        RescaledPath p = rep.uncentered;
        const double scale = mu * std::sqrt(p.t_scale);  // mu s t / sqrt(t)
        for (std::size_t i = 0; i < p.grid.size(); ++i) p.values[i] -= scale * p.grid[i];
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<CompensatedPath> compensated_paths(const Sample& sample) {
    if (!sample.has_compensator) throw InputError("no compensator available for this sample");
    std::vector<CompensatedPath> out;
    out.reserve(sample.replications.size());
    for (const auto& rep : sample.replications) out.push_back(rep.compensated);
    return out;
}

std::vector<double> pooled_residuals(const Sample& sample) {
    std::vector<double> out;
    for (const auto& rep : sample.replications)
        out.insert(out.end(), rep.residual_gaps.begin(), rep.residual_gaps.end());
    return out;
}

LilAnalysis analyze_lil(std::span<const CountSeries> counts, const Centering& centering, const LilSection& lil,
                        std::uint64_t seed, std::size_t workers, bool keep_paths) {
    if (counts.empty()) throw UnderPowered("no count series for the LIL statistics");
    std::size_t available = counts.front().counts.size();
    for (const auto& c : counts) available = std::min(available, c.counts.size());

    LilAnalysis out;
    out.centering = centering;
    out.s2_mode = lil.s2_mode;
    out.n_max = std::min(lil.n_max, available);
    if (out.n_max < 2) throw UnderPowered("series of " + std::to_string(available) + " bins are too short for LIL");

    const S2Profile profile = lil.s2_mode == "empirical"
                                  ? S2Profile::explicit_values(empirical_s2(counts, centering.mu, out.n_max))
                                  : S2Profile::plugin(centering.sigma2);

    std::vector<LilSequence> sequences(counts.size());
    parallel_for(counts.size(), workers, [&](std::size_t r) {
        CountSeries head;
        head.counts.assign(counts[r].counts.begin(),
                           counts[r].counts.begin() + static_cast<std::ptrdiff_t>(out.n_max));
        sequences[r] = build_lil_sequence(head, centering.mu, profile);
    });

    try {
        out.schedule = lil_schedule(sequences.front(), out.n_max, kMinSchedule);
    } catch (const DomainError& e) {
        throw UnderPowered(std::string("LIL schedule: ") + e.what());
    }
    if (out.schedule.size() < kMinSchedule)
        throw UnderPowered("n_max = " + std::to_string(out.n_max) + " leaves only " +
                           std::to_string(out.schedule.size()) + " distinct schedule points (need 20)");

    const auto grid = uniform_grid(lil.grid);
    out.per_replication.resize(counts.size());
    if (keep_paths) out.paths.resize(counts.size());
    parallel_for(counts.size(), workers, [&](std::size_t r) {
        std::vector<LilPath> paths;
        paths.reserve(out.schedule.size());
        for (std::size_t n : out.schedule) paths.push_back(build_eta(sequences[r], n, grid));
        out.per_replication[r] = strassen_check(paths);
        if (keep_paths) out.paths[r] = std::move(paths);
    });

    std::vector<double> tails;
    std::vector<double> sups;
    for (const auto& rep : out.per_replication) {
        tails.push_back(rep.tail_endpoint);
        sups.push_back(rep.sup_norm);
        out.max_energy = std::max(out.max_energy, rep.energy);
    }
    out.mean_tail_endpoint = stats::mean(tails);
    out.mean_sup_norm = stats::mean(sups);

    const auto oracle = lil_oracle(centering.sigma2, out.schedule, lil.oracle_replications,
                                   derived_seed(seed, kOracleSalt), workers);
    out.tail_band = calibrate_band(oracle.tail_endpoint, counts.size());
    out.sup_band = calibrate_band(oracle.sup_norm, counts.size());
    out.tail_inside_band =
        out.mean_tail_endpoint >= out.tail_band.lower && out.mean_tail_endpoint <= out.tail_band.upper;
    out.sup_inside_band = out.mean_sup_norm >= out.sup_band.lower && out.mean_sup_norm <= out.sup_band.upper;
    return out;
}

}  // namespace hawkes

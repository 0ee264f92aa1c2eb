#include "hawkes/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "hawkes/errors.hpp"
#include "hawkes/excitation.hpp"
#include "hawkes/rng.hpp"

namespace hawkes {

namespace {

struct PlanarPoint {
    double time;
    double mark;
};

std::vector<PlanarPoint> planar_points(std::uint64_t seed, std::size_t strips, double height, double horizon) {
    std::vector<PlanarPoint> points;
    for (std::size_t k = 0; k < strips; ++k) {
        Rng rng(substream(seed, k));
        const double floor = static_cast<double>(k) * height;
        for (double t = rng.exponential(height); t <= horizon; t += rng.exponential(height))
            points.push_back({t, floor + height * rng.uniform()});
    }
    std::sort(points.begin(), points.end(), [](const PlanarPoint& a, const PlanarPoint& b) {
        return a.time < b.time || (a.time == b.time && a.mark < b.mark);
    });
    return points;
}

struct LayerResult {
    std::vector<char> base;
    std::vector<char> augmented;
    std::size_t layers = 0;
    bool converged = true;
};

// Returns nullopt when some intensity curve reaches the generated ceiling.
std::optional<LayerResult> run_layers(const HawkesModel& model, const History& history,
                                      const std::vector<PlanarPoint>& points, double ceiling,
                                      std::size_t max_layers) {
    const RateFunction& rate = model.rate();
    const std::size_t n = points.size();
    std::vector<char> member(n, 0);
    std::vector<double> previous(n, 0.0);

    {
        ExcitationState excitation(model.kernel());
        if (rate(excitation.value(0.0)) >= ceiling) return std::nullopt;
        for (std::size_t i = 0; i < n; ++i) {
            const double lambda = rate(excitation.value(points[i].time));
            previous[i] = lambda;
            if (points[i].mark < lambda) {
                member[i] = 1;
                excitation.add(points[i].time);
                if (rate(excitation.value(points[i].time)) >= ceiling) return std::nullopt;
            }
        }
    }

    LayerResult result;
    result.base = member;
    if (history.empty()) {
        result.augmented = member;
        return result;
    }

    result.converged = false;
    for (std::size_t layer = 1; layer <= max_layers; ++layer) {
        ExcitationState excitation(model.kernel());
        for (double tau : history.times()) excitation.add(tau);
        if (rate(excitation.value(0.0)) >= ceiling) return std::nullopt;

        std::vector<char> next = member;
        std::size_t added = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double lambda = rate(excitation.value(points[i].time));
            if (lambda < previous[i] * (1.0 - 1e-12) - 1e-12)
                throw std::logic_error("coupling layers lost monotonicity; rate or kernel not monotone");
            if (!member[i] && points[i].mark >= previous[i] && points[i].mark < lambda) {
                next[i] = 1;
                ++added;
            }
            previous[i] = lambda;
            if (member[i]) {
                excitation.add(points[i].time);
                if (rate(excitation.value(points[i].time)) >= ceiling) return std::nullopt;
            }
        }
        member = std::move(next);
        result.layers = layer;
        if (added == 0) {
            result.converged = true;
            break;
        }
    }
    result.augmented = std::move(member);
    return result;
}

EventSequence collect(const std::vector<PlanarPoint>& points, const std::vector<char>& member, double horizon) {
    EventSequence seq;
    seq.horizon = horizon;
    for (std::size_t i = 0; i < points.size(); ++i)
        if (member[i]) seq.times.push_back(points[i].time);
    return seq;
}

}  // namespace

CoupledPair simulate_coupled(const HawkesModel& model, const History& history, double horizon, std::uint64_t seed,
                             std::size_t max_layers) {
    if (!(horizon > 0.0)) throw DomainError("horizon must be > 0");
    if (max_layers == 0) throw DomainError("max_layers must be >= 1");

    ExcitationState past(model.kernel());
    for (double tau : history.times()) past.add(tau);
    const double height =
        std::max(1.0, 2.0 * model.rate()(past.value(0.0) + model.kernel().value_at_zero()));

    for (std::size_t strips = 1; strips <= (std::size_t{1} << 20); strips *= 2) {
        const double ceiling = height * static_cast<double>(strips);
        const auto points = planar_points(seed, strips, height, horizon);
        auto layers = run_layers(model, history, points, ceiling, max_layers);
        if (!layers) continue;

        CoupledPair pair;
        pair.base_events = collect(points, layers->base, horizon);
        pair.augmented_events = collect(points, layers->augmented, horizon);
        pair.shared_seed = seed;
        pair.layers = layers->layers;
        pair.converged = layers->converged;
        pair.mark_ceiling = ceiling;
        return pair;
    }
    throw std::logic_error("coupled intensity exceeded every planar ceiling");
}

std::vector<long> coupling_gap_by_bin(const CoupledPair& pair) {
    const auto bins = static_cast<std::size_t>(std::floor(pair.base_events.horizon));
    std::vector<long> gap(bins, 0);
    for (std::size_t j = 0; j < bins; ++j) {
        const double a = static_cast<double>(j);
        gap[j] = static_cast<long>(pair.augmented_events.count(a, a + 1.0)) -
                 static_cast<long>(pair.base_events.count(a, a + 1.0));
    }
    return gap;
}

long coupling_gap_total(const CoupledPair& pair) {
    const auto gap = coupling_gap_by_bin(pair);
    long total = 0;
    for (std::size_t j = 1; j < gap.size(); ++j) total += gap[j];
    return total;
}

}  // namespace hawkes

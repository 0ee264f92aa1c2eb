#include "hawkes/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hawkes/errors.hpp"
#include "hawkes/excitation.hpp"
#include "hawkes/rng.hpp"

namespace hawkes {

// -- ExcitationState ---------------------------------------------------------

ExcitationState::ExcitationState(const Kernel& kernel, double prune_threshold)
    : kernel_(kernel),
      prune_threshold_(prune_threshold),
      ref_time_(-std::numeric_limits<double>::infinity()),
      last_(-std::numeric_limits<double>::infinity()) {
    if (kernel.is_zero()) {
        mode_ = Mode::Zero;
    } else if (const auto* e = std::get_if<ExponentialKernel>(&kernel.family())) {
        mode_ = Mode::Exponential;
        amplitude_ = e->amplitude;
        decay_ = e->decay;
    } else {
        mode_ = Mode::Sum;
    }
}

void ExcitationState::add(double t) {
    ++count_;
    last_ = t;
    switch (mode_) {
        case Mode::Zero:
            return;
        case Mode::Exponential:
            ref_value_ = value(t) + amplitude_;
            ref_time_ = t;
            return;
        case Mode::Sum:
            times_.push_back(t);
            if (prune_threshold_ > 0.0) {
                while (first_active_ < times_.size() && kernel_(t - times_[first_active_]) < prune_threshold_)
                    ++first_active_;
            }
            return;
    }
}

double ExcitationState::value(double s) const {
    switch (mode_) {
        case Mode::Zero:
            return 0.0;
        case Mode::Exponential:
            if (ref_value_ == 0.0) return 0.0;
            return ref_value_ * std::exp(-decay_ * (s - ref_time_));
        case Mode::Sum: {
            double z = 0.0;
            for (std::size_t i = first_active_; i < times_.size(); ++i) z += kernel_(s - times_[i]);
            return z;
        }
    }
    return 0.0;
}

namespace {

template<class F>
double simpson_step(const F& f, double a, double b, double fa, double fm, double fb, double whole, double tol,
                    int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template<class F>
double adaptive_simpson(const F& f, double a, double b, double tol) {
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, tol, 40);
}

// int_0^dt min(z0 e^{-b u}, cap) du
double clipped_exponential_integral(double z0, double b, double cap, double dt) {
    if (z0 <= cap) return -z0 * std::expm1(-b * dt) / b;
    const double cross = std::log(z0 / cap) / b;
    if (cross >= dt) return cap * dt;
    return cap * cross - cap * std::expm1(-b * (dt - cross)) / b;
}

}  // namespace

double ExcitationState::integrate_rate(const RateFunction& rate, double s0, double s1) const {
    const double dt = s1 - s0;
    if (!(dt > 0.0)) return 0.0;
    if (mode_ == Mode::Zero) return rate(0.0) * dt;
    if (mode_ == Mode::Exponential) {
        const double z0 = value(s0);
        const double b = decay_;
        struct Closed {
            double z0, b, dt;
            double operator()(const LinearRate& r) const { return r.nu * dt - z0 * std::expm1(-b * dt) / b; }
            double operator()(const SaturatingRate& r) const {
                const double z1 = z0 * std::exp(-b * dt);
                return r.nu * dt + r.alpha / b * (std::log1p(z0) - std::log1p(z1));
            }
            double operator()(const ClippedLinearRate& r) const {
                return r.nu * dt + r.alpha * clipped_exponential_integral(z0, b, r.cap, dt);
            }
        };
        return std::visit(Closed{z0, b, dt}, rate.family());
    }
    return adaptive_simpson([&](double u) { return rate(value(u)); }, s0, s1, 1e-8);
}

// -- thinning ----------------------------------------------------------------

double thinning_bound(const HawkesModel& model, double excitation_sum) {
    return model.rate()(excitation_sum);
}

namespace {

// Accumulates int lambda from the simulation start and samples it at the
// grid points and at time 0 (the anchor of the signed compensator).
class CompensatorTracker {
  public:
    CompensatorTracker(const RateFunction& rate, const ExcitationState& excitation, double start, double horizon,
                       double step)
        : rate_(rate), excitation_(excitation), current_(start) {
        if (step > 0.0) {
            const auto n = static_cast<std::size_t>(std::floor(horizon / step + 1e-9));
            breakpoints_.reserve(n + 1);
            for (std::size_t k = 0; k <= n; ++k) breakpoints_.push_back(std::min(static_cast<double>(k) * step, horizon));
            emit_grid_ = true;
        } else {
            breakpoints_.push_back(0.0);
        }
        samples_.reserve(breakpoints_.size());
    }

    void advance(double to) {
        while (next_ < breakpoints_.size() && breakpoints_[next_] <= to) {
            integrate_to(breakpoints_[next_]);
            samples_.push_back(raw_);
            ++next_;
        }
        integrate_to(to);
    }

    double raw() const noexcept { return raw_; }
    double at_zero() const noexcept { return samples_.empty() ? 0.0 : samples_.front(); }

    std::vector<CompensatorPoint> grid() const {
        std::vector<CompensatorPoint> out;
        if (!emit_grid_) return out;
        out.reserve(samples_.size());
        const double zero = at_zero();
        for (std::size_t k = 0; k < samples_.size(); ++k) out.push_back({breakpoints_[k], samples_[k] - zero});
        return out;
    }

  private:
    void integrate_to(double to) {
        if (to > current_) {
            raw_ += excitation_.integrate_rate(rate_, current_, to);
            current_ = to;
        }
    }

    const RateFunction& rate_;
    const ExcitationState& excitation_;
    double current_;
    double raw_ = 0.0;
    std::vector<double> breakpoints_;
    std::vector<double> samples_;
    std::size_t next_ = 0;
    bool emit_grid_ = false;
};

SimulationOutput run_thinning(const HawkesModel& model, const std::vector<double>& history, double start,
                              double horizon, std::uint64_t seed, const SimulationOptions& options) {
    if (!(horizon > 0.0)) throw DomainError("horizon must be > 0");
    const RateFunction& rate = model.rate();
    ExcitationState excitation(model.kernel(), options.prune_threshold);
    for (double tau : history) excitation.add(tau);

    CompensatorTracker compensator(rate, excitation, start, horizon, options.compensator_step);
    Rng rng(seed);

    SimulationOutput out;
    out.events.horizon = horizon;
    out.events.history_depth = -start;
    std::vector<double> raw_at_events;

    double now = start;
    double bound = rate(excitation.value(now));
    for (;;) {
        const double candidate = now + rng.exponential(bound);
        if (candidate > horizon) break;
        const double intensity = rate(excitation.value(candidate));
        if (intensity > bound * (1.0 + 1e-12))
            throw ThinningBoundExceeded("intensity " + std::to_string(intensity) + " exceeds thinning bound " +
                                        std::to_string(bound) + " at t = " + std::to_string(candidate));
        if (rng.uniform() * bound < intensity) {
            compensator.advance(candidate);
            out.events.times.push_back(candidate);
            out.intensity_at_events.push_back(intensity);
            raw_at_events.push_back(compensator.raw());
            excitation.add(candidate);
        }
        now = candidate;
        bound = rate(excitation.value(now));
    }
    compensator.advance(horizon);

    const double zero = compensator.at_zero();
    out.compensator_at_events.reserve(raw_at_events.size());
    for (double raw : raw_at_events) out.compensator_at_events.push_back(raw - zero);
    out.compensator_grid = compensator.grid();
    return out;
}

}  // namespace

SimulationOutput simulate(const HawkesModel& model, const History& history, double horizon, std::uint64_t seed,
                          const SimulationOptions& options) {
    return run_thinning(model, history.times(), 0.0, horizon, seed, options);
}

SimulationOutput simulate_with_burnin(const HawkesModel& model, double horizon, double burnin, std::uint64_t seed,
                                      const SimulationOptions& options) {
    if (!(burnin >= 0.0)) throw DomainError("burn-in must be >= 0");
    return run_thinning(model, {}, -burnin, horizon, seed, options);
}

double stationary_burnin(const HawkesModel& model, double epsilon) {
    if (!(epsilon > 0.0)) throw DomainError("burn-in epsilon must be > 0");
    const double alpha = model.rate().lipschitz();
    const Kernel& h = model.kernel();
    if (alpha == 0.0 || h.is_zero()) return 0.0;
    const double factor = alpha / model.stability_margin();
    auto residual = [&](double b) { return factor * h.tail_first_moment(b); };

    if (residual(0.0) < epsilon) return 0.0;
    if (!(residual(kBurninCap) < epsilon))
        throw ConfigError("burn-in for epsilon " + std::to_string(epsilon) + " exceeds the cap of " +
                          std::to_string(kBurninCap) + " time units");

    // residual is decreasing; bisect on grid indices
    auto lo = std::size_t{0};
    auto hi = static_cast<std::size_t>(std::llround(kBurninCap / kBurninGridStep));
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (residual(static_cast<double>(mid) * kBurninGridStep) < epsilon)
            hi = mid;
        else
            lo = mid;
    }
    return static_cast<double>(hi) * kBurninGridStep;
}

std::vector<double> time_rescaled_gaps(const SimulationOutput& output) {
    std::vector<double> gaps;
    double previous = 0.0;
    const auto& times = output.events.times;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] <= 0.0) continue;
        gaps.push_back(output.compensator_at_events[i] - previous);
        previous = output.compensator_at_events[i];
    }
    return gaps;
}

// -- EventSequence -----------------------------------------------------------

std::size_t EventSequence::count(double a, double b) const {
    const auto lo = std::upper_bound(times.begin(), times.end(), a);
    const auto hi = std::upper_bound(times.begin(), times.end(), b);
    return hi > lo ? static_cast<std::size_t>(hi - lo) : 0;
}

std::span<const double> EventSequence::window() const {
    const auto lo = std::upper_bound(times.begin(), times.end(), 0.0);
    const auto hi = std::upper_bound(times.begin(), times.end(), horizon);
    return {lo, hi};
}

}  // namespace hawkes

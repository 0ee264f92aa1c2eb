#pragma once

#include <cstddef>
#include <vector>

#include "hawkes/model.hpp"

namespace hawkes {

/// Running excitation z(s) = sum over recorded events tau <= s of h(s - tau).
///
/// Events must be added in non-decreasing time order and queries must not
/// precede the last added event. Exponential kernels are tracked by a single
/// decaying state; other kernels sum over the stored events, optionally
/// dropping leading events whose contribution fell below `prune_threshold`.
class ExcitationState {
  public:
    explicit ExcitationState(const Kernel& kernel, double prune_threshold = 0.0);

    void add(double t);

    double value(double s) const;

    /// int_{s0}^{s1} rate(z(u)) du, assuming no event is added in (s0, s1].
    /// Closed form for exponential and zero kernels, adaptive Simpson
    /// (absolute tolerance 1e-8) otherwise.
    double integrate_rate(const RateFunction& rate, double s0, double s1) const;

    double last_event() const noexcept { return last_; }
    std::size_t size() const noexcept { return count_; }

  private:
    enum class Mode { Zero, Exponential, Sum };

    Kernel kernel_;
    Mode mode_;
    double prune_threshold_;
    double amplitude_ = 0.0;
    double decay_ = 0.0;

    // exponential state: z(ref_time_) including events at ref_time_
    double ref_time_;
    double ref_value_ = 0.0;

    std::vector<double> times_;
    std::size_t first_active_ = 0;

    double last_;
    std::size_t count_ = 0;
};

}  // namespace hawkes

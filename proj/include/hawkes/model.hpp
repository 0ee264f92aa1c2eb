#pragma once

#include <string_view>
#include <utility>
#include <vector>
#include <variant>

namespace hawkes {

struct ZeroKernel {
    bool operator==(const ZeroKernel&) const = default;
};

// h(t) = amplitude * exp(-decay * t)
struct ExponentialKernel {
    double amplitude;
    double decay;
    bool operator==(const ExponentialKernel&) const = default;
};

// h(t) = amplitude * (t + offset)^(-exponent), exponent > 2
struct PowerLawKernel {
    double amplitude;
    double exponent;
    double offset;
    bool operator==(const PowerLawKernel&) const = default;
};

/// Exciting function h on [0, inf). Integrals are cached in closed form.
class Kernel {
  public:
    using Family = std::variant<ZeroKernel, ExponentialKernel, PowerLawKernel>;

    static Kernel zero();
    static Kernel exponential(double amplitude, double decay);
    static Kernel power_law(double amplitude, double exponent, double offset);

    /// h(t); throws DomainError for t < 0.
    double operator()(double t) const;

    /// H(t) = int_t^inf h(s) ds.
    double tail_integral(double t) const;

    /// int_t^inf s h(s) ds. At t = 0 this is first_moment().
    double tail_first_moment(double t) const;

    double value_at_zero() const noexcept { return h0_; }
    double l1_norm() const noexcept { return l1_; }
    double first_moment() const noexcept { return m1_; }

    const Family& family() const noexcept { return family_; }
    std::string_view name() const noexcept;
    bool is_zero() const noexcept { return std::holds_alternative<ZeroKernel>(family_) || h0_ == 0.0; }

    bool operator==(const Kernel& other) const { return family_ == other.family_; }

  private:
    explicit Kernel(Family family);

    Family family_;
    double h0_ = 0.0;
    double l1_ = 0.0;
    double m1_ = 0.0;
};

// lambda(z) = nu + z
struct LinearRate {
    double nu;
    bool operator==(const LinearRate&) const = default;
};

// lambda(z) = nu + alpha * z / (1 + z)
struct SaturatingRate {
    double nu;
    double alpha;
    bool operator==(const SaturatingRate&) const = default;
};

// lambda(z) = nu + alpha * min(z, cap)
struct ClippedLinearRate {
    double nu;
    double alpha;
    double cap;
    bool operator==(const ClippedLinearRate&) const = default;
};

/// Rate function lambda: [0, inf) -> (0, inf).
class RateFunction {
  public:
    using Family = std::variant<LinearRate, SaturatingRate, ClippedLinearRate>;

    static RateFunction linear(double nu);
    static RateFunction saturating(double nu, double alpha);
    static RateFunction clipped_linear(double nu, double alpha, double cap);

    double operator()(double z) const;

    double lipschitz() const noexcept { return lipschitz_; }
    double base() const noexcept { return base_; }

    const Family& family() const noexcept { return family_; }
    std::string_view name() const noexcept;
    bool is_linear() const noexcept { return std::holds_alternative<LinearRate>(family_); }

    bool operator==(const RateFunction& other) const { return family_ == other.family_; }

  private:
    explicit RateFunction(Family family);

    Family family_;
    double lipschitz_ = 0.0;
    double base_ = 0.0;
};

class HawkesModel;
HawkesModel validate_model(const Kernel& kernel, const RateFunction& rate);

/// A kernel/rate pair certified to satisfy the stability assumption
/// alpha * ||h||_1 < 1 with h non-increasing and lambda non-decreasing.
/// Only obtainable through validate_model(); immutable afterwards.
class HawkesModel {
  public:
    const Kernel& kernel() const noexcept { return kernel_; }
    const RateFunction& rate() const noexcept { return rate_; }

    /// 1 - alpha * ||h||_1, strictly positive.
    double stability_margin() const noexcept { return 1.0 - contraction(); }

    /// alpha * ||h||_1, the geometric ratio of the coupling-gap series.
    double contraction() const noexcept { return rate_.lipschitz() * kernel_.l1_norm(); }

    bool operator==(const HawkesModel&) const = default;

  private:
    HawkesModel(Kernel kernel, RateFunction rate) : kernel_(std::move(kernel)), rate_(std::move(rate)) {}
    friend HawkesModel validate_model(const Kernel&, const RateFunction&);

    Kernel kernel_;
    RateFunction rate_;
};

/// Past configuration: event times in (-depth, 0], strictly increasing.
class History {
  public:
    History() = default;
    explicit History(std::vector<double> times);

    const std::vector<double>& times() const noexcept { return times_; }
    bool empty() const noexcept { return times_.empty(); }

  private:
    std::vector<double> times_;
};

/// Log-spaced check grid used by validate_model: 0 plus 999 points in [1e-6, 1e6].
std::vector<double> monotonicity_grid();

}  // namespace hawkes

#include "hawkes/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hawkes/errors.hpp"

namespace hawkes {

namespace {

template<class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template<class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
}

}  // namespace

// -- Kernel ------------------------------------------------------------------

Kernel::Kernel(Family family) : family_(family) {
    std::visit(Overloaded{
                   [&](const ZeroKernel&) { h0_ = l1_ = m1_ = 0.0; },
                   [&](const ExponentialKernel& k) {
                       h0_ = k.amplitude;
                       l1_ = k.amplitude / k.decay;
                       m1_ = k.amplitude / (k.decay * k.decay);
                   },
                   [&](const PowerLawKernel& k) {
                       const double p = k.exponent;
                       h0_ = k.amplitude * std::pow(k.offset, -p);
                       l1_ = k.amplitude * std::pow(k.offset, 1.0 - p) / (p - 1.0);
                       m1_ = k.amplitude * std::pow(k.offset, 2.0 - p) / ((p - 1.0) * (p - 2.0));
                   },
               },
               family_);
}

Kernel Kernel::zero() { return Kernel(ZeroKernel{}); }

Kernel Kernel::exponential(double amplitude, double decay) {
    require_finite(amplitude, "exponential amplitude");
    require_finite(decay, "exponential decay");
    if (!(decay > 0.0)) throw DomainError("exponential decay must be > 0");
    return Kernel(ExponentialKernel{amplitude, decay});
}

Kernel Kernel::power_law(double amplitude, double exponent, double offset) {
    require_finite(amplitude, "power-law amplitude");
    require_finite(exponent, "power-law exponent");
    require_finite(offset, "power-law offset");
    if (!(exponent > 2.0))
        throw AssumptionViolation("power-law exponent must be > 2 for a finite first moment");
    if (offset < 0.0) throw DomainError("power-law offset must be >= 0");
    if (offset == 0.0)
        throw UnsupportedKernel("power-law kernel with offset 0 has h(0) = infinity");
    return Kernel(PowerLawKernel{amplitude, exponent, offset});
}

double Kernel::operator()(double t) const {
    if (!(t >= 0.0)) throw DomainError("kernel evaluated at negative time");
    return std::visit(Overloaded{
                          [](const ZeroKernel&) { return 0.0; },
                          [&](const ExponentialKernel& k) { return k.amplitude * std::exp(-k.decay * t); },
                          [&](const PowerLawKernel& k) {
                              return k.amplitude * std::pow(t + k.offset, -k.exponent);
                          },
                      },
                      family_);
}

double Kernel::tail_integral(double t) const {
    if (!(t >= 0.0)) throw DomainError("tail integral at negative time");
    return std::visit(Overloaded{
                          [](const ZeroKernel&) { return 0.0; },
                          [&](const ExponentialKernel& k) {
                              return k.amplitude / k.decay * std::exp(-k.decay * t);
                          },
                          [&](const PowerLawKernel& k) {
                              return k.amplitude * std::pow(t + k.offset, 1.0 - k.exponent) /
                                     (k.exponent - 1.0);
                          },
                      },
                      family_);
}

double Kernel::tail_first_moment(double t) const {
    if (!(t >= 0.0)) throw DomainError("tail moment at negative time");
    return std::visit(Overloaded{
                          [](const ZeroKernel&) { return 0.0; },
                          [&](const ExponentialKernel& k) {
                              const double b = k.decay;
                              return k.amplitude * std::exp(-b * t) * (t / b + 1.0 / (b * b));
                          },
                          [&](const PowerLawKernel& k) {
                              // substitute u = s + offset
                              const double p = k.exponent;
                              const double u = t + k.offset;
                              return k.amplitude * (std::pow(u, 2.0 - p) / (p - 2.0) -
                                                    k.offset * std::pow(u, 1.0 - p) / (p - 1.0));
                          },
                      },
                      family_);
}

std::string_view Kernel::name() const noexcept {
    return std::visit(Overloaded{
                          [](const ZeroKernel&) { return std::string_view("zero"); },
                          [](const ExponentialKernel&) { return std::string_view("exponential"); },
                          [](const PowerLawKernel&) { return std::string_view("power-law"); },
                      },
                      family_);
}

// -- RateFunction ------------------------------------------------------------

RateFunction::RateFunction(Family family) : family_(family) {
    std::visit(Overloaded{
                   [&](const LinearRate& r) {
                       lipschitz_ = 1.0;
                       base_ = r.nu;
                   },
                   [&](const SaturatingRate& r) {
                       // sup |d/dz (z / (1 + z))| = 1 at z = 0
                       lipschitz_ = std::abs(r.alpha);
                       base_ = r.nu;
                   },
                   [&](const ClippedLinearRate& r) {
                       lipschitz_ = std::abs(r.alpha);
                       base_ = r.nu;
                   },
               },
               family_);
}

RateFunction RateFunction::linear(double nu) {
    require_finite(nu, "nu");
    if (!(nu > 0.0)) throw DomainError("baseline nu must be > 0");
    return RateFunction(LinearRate{nu});
}

RateFunction RateFunction::saturating(double nu, double alpha) {
    require_finite(nu, "nu");
    require_finite(alpha, "alpha");
    if (!(nu > 0.0)) throw DomainError("baseline nu must be > 0");
    return RateFunction(SaturatingRate{nu, alpha});
}

RateFunction RateFunction::clipped_linear(double nu, double alpha, double cap) {
    require_finite(nu, "nu");
    require_finite(alpha, "alpha");
    require_finite(cap, "cap");
    if (!(nu > 0.0)) throw DomainError("baseline nu must be > 0");
    if (!(cap > 0.0)) throw DomainError("cap must be > 0");
    return RateFunction(ClippedLinearRate{nu, alpha, cap});
}

double RateFunction::operator()(double z) const {
    return std::visit(Overloaded{
                          [&](const LinearRate& r) { return r.nu + z; },
                          [&](const SaturatingRate& r) { return r.nu + r.alpha * z / (1.0 + z); },
                          [&](const ClippedLinearRate& r) { return r.nu + r.alpha * std::min(z, r.cap); },
                      },
                      family_);
}

std::string_view RateFunction::name() const noexcept {
    return std::visit(Overloaded{
                          [](const LinearRate&) { return std::string_view("linear"); },
                          [](const SaturatingRate&) { return std::string_view("saturating"); },
                          [](const ClippedLinearRate&) { return std::string_view("clipped-linear"); },
                      },
                      family_);
}

// -- validation --------------------------------------------------------------

std::vector<double> monotonicity_grid() {
    std::vector<double> grid;
    grid.reserve(1000);
    grid.push_back(0.0);
    constexpr int n = 999;
    for (int i = 0; i < n; ++i) grid.push_back(std::pow(10.0, -6.0 + 12.0 * i / (n - 1)));
    return grid;
}

HawkesModel validate_model(const Kernel& kernel, const RateFunction& rate) {
    if (!std::isfinite(kernel.value_at_zero()))
        throw UnsupportedKernel("kernel has h(0) = infinity; thinning needs a finite bound");
    if (!std::isfinite(kernel.l1_norm()) || !std::isfinite(kernel.first_moment()))
        throw AssumptionViolation("kernel integrals must be finite");

    const auto grid = monotonicity_grid();
    double prev_h = std::numeric_limits<double>::infinity();
    double prev_rate = -std::numeric_limits<double>::infinity();
    double prev_z = 0.0;
    const double lip = rate.lipschitz();
    for (double t : grid) {
        const double h = kernel(t);
        if (!(h >= 0.0)) throw AssumptionViolation("kernel is negative at t = " + std::to_string(t));
        if (h > prev_h) throw AssumptionViolation("kernel is increasing near t = " + std::to_string(t));
        prev_h = h;

        const double r = rate(t);
        if (!(r > 0.0)) throw AssumptionViolation("rate is not positive at z = " + std::to_string(t));
        if (r < prev_rate) throw AssumptionViolation("rate is decreasing near z = " + std::to_string(t));
        // slack covers rounding in r and prev_rate, which dominates at tiny spacings
        const double rounding = 4.0 * std::numeric_limits<double>::epsilon() * std::max(r, prev_rate);
        if (t > prev_z && std::abs(r - prev_rate) > lip * (t - prev_z) * (1.0 + 1e-9) + rounding)
            throw AssumptionViolation("rate exceeds its Lipschitz constant near z = " + std::to_string(t));
        prev_rate = r;
        prev_z = t;
    }

    const double contraction = lip * kernel.l1_norm();
    if (!(contraction < 1.0))
        throw StabilityViolation("stability violated: alpha * ||h||_1 = " + std::to_string(contraction) +
                                 " >= 1");
    return HawkesModel(kernel, rate);
}

// -- History -----------------------------------------------------------------

History::History(std::vector<double> times) : times_(std::move(times)) {
    for (std::size_t i = 0; i < times_.size(); ++i) {
        if (!(times_[i] <= 0.0)) throw DomainError("history times must be <= 0");
        if (i > 0 && !(times_[i] > times_[i - 1])) throw DomainError("history times must strictly increase");
    }
}

}  // namespace hawkes

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hawkes/model.hpp"

namespace hawkes {

// --- TOML subset -----------------------------------------------------------
//
// Supported: [section] headers, `key = value` with string ("..."), integer,
// float, boolean and flat numeric-array values, and # comments. Nested
// tables, inline tables, multi-line strings and dates are rejected.

struct TomlValue {
    using Array = std::vector<double>;
    std::variant<std::string, std::int64_t, double, bool, Array> data;
    std::size_t line = 0;
};

struct TomlTable : std::map<std::string, TomlValue> {
    std::size_t line = 0;  // line of the [section] header
};
using TomlDocument = std::map<std::string, TomlTable>;

/// Throws ConfigError carrying the offending line number.
TomlDocument parse_toml(std::string_view text);

// --- run configuration -----------------------------------------------------

struct KernelConfig {
    std::string family = "exponential";  // exponential | power-law | zero
    double a = 1.0;                       // exponential amplitude
    double b = 2.0;                       // exponential decay
    double c = 1.0;                       // power-law amplitude
    double p = 3.0;                       // power-law exponent
    double t0 = 1.0;                      // power-law offset
    bool operator==(const KernelConfig&) const = default;
};

struct RateConfig {
    std::string family = "linear";  // linear | saturating | clipped-linear
    double nu = 1.0;
    double alpha = 1.0;
    double cap = 1.0;
    bool operator==(const RateConfig&) const = default;
};

struct RunSection {
    double horizon = 2000.0;
    std::size_t replications = 1000;
    std::uint64_t seed = 1;  // at most kMaxSeed
    double burnin_epsilon = 1e-3;
    double compensator_step = 1.0;
    bool operator==(const RunSection&) const = default;
};

struct FcltSection {
    std::size_t grid = 101;
    double significance = 0.01;
    std::vector<double> s_points{0.25, 0.5, 0.75, 1.0};
    bool operator==(const FcltSection&) const = default;
};

struct LilSection {
    std::size_t n_max = 100000;
    std::size_t oracle_replications = 1000;
    std::size_t grid = 21;
    std::string s2_mode = "plugin";  // plugin | empirical
    bool operator==(const LilSection&) const = default;
};

struct RunConfig {
    KernelConfig kernel;
    RateConfig rate;
    RunSection run;
    FcltSection fclt;
    LilSection lil;
    std::string scenario;  // empty unless [verify] names one
    std::string output_dir = "out";

    bool operator==(const RunConfig&) const = default;

    /// Validated model; propagates StabilityViolation / AssumptionViolation.
    HawkesModel model() const;
};

/// Seeds are stored as TOML integers, which are signed 64-bit.
inline constexpr std::uint64_t kMaxSeed = 0x7fffffffffffffffULL;

/// Canned verify scenarios.
inline constexpr std::string_view kScenarios[] = {"poisson", "linear", "nonlinear-saturating"};

/// Model sections of a canned scenario.
std::pair<KernelConfig, RateConfig> scenario_model(std::string_view scenario);

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// TOML text that parses back to an identical RunConfig.
std::string serialize_config(const RunConfig& config);

}  // namespace hawkes

// hawkes simulate|estimate|fclt|lil|verify --config <file> --out <dir> [--seed N] [--workers K]
//
// Seed and worker count may also come from HAWKES_SEED / HAWKES_WORKERS;
// precedence is flag > environment > config file.

#include <cerrno>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hawkes/commands.hpp"
#include "hawkes/config.hpp"
#include "hawkes/errors.hpp"
#include "hawkes/parallel.hpp"

namespace {

std::optional<std::uint64_t> env_unsigned(const char* name) {
    const char* raw = std::getenv(name);
    if (!raw || !*raw) return std::nullopt;
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(raw, &end, 10);
    if (*end != '\0' || errno == ERANGE || raw[0] == '-')
        throw hawkes::ConfigError(std::string(name) + " must be a non-negative integer, got '" + raw + "'");
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nonlinear Hawkes process simulation and limit-theorem checks"};
    app.require_subcommand(1, 1);

    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> workers;

    for (const char* name : {"simulate", "estimate", "fclt", "lil", "verify"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "run configuration (TOML)")->required();
        sub->add_option("--out", out_dir, "output directory (default: [output] dir)");
        sub->add_option("--seed", seed, "master seed");
        sub->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    }
    app.get_subcommand("simulate")->description("write events.csv and compensator.csv");
    app.get_subcommand("estimate")->description("write stats.json and counts.csv");
    app.get_subcommand("fclt")->description("write report.json and fclt.csv");
    app.get_subcommand("lil")->description("write lil_report.json and lil.csv");
    app.get_subcommand("verify")->description("run a canned scenario and write verify.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? hawkes::kExitPass : hawkes::kExitUsage;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    hawkes::CommandContext ctx;
    ctx.log = &std::cerr;
    try {
        ctx.config = hawkes::load_config(config_path);
        if (!seed) seed = env_unsigned("HAWKES_SEED");
        if (seed) {
            if (*seed > hawkes::kMaxSeed) throw hawkes::ConfigError("seed must be at most 2^63 - 1");
            ctx.config.run.seed = *seed;
        }
        if (!workers) {
            if (const auto w = env_unsigned("HAWKES_WORKERS")) {
                if (*w == 0) throw hawkes::ConfigError("HAWKES_WORKERS must be >= 1");
                workers = static_cast<std::size_t>(*w);
            }
        }
    } catch (const hawkes::Error& e) {
        std::cerr << "hawkes " << command << ": configuration error: " << e.what() << "\n";
        return hawkes::kExitUsage;
    }
    ctx.workers = workers.value_or(hawkes::default_workers());
    ctx.out_dir = out_dir.empty() ? ctx.config.output_dir : out_dir;
    return hawkes::run_command(command, ctx);
}

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "rbsim/run.hpp"

namespace rbsim {

namespace exit_code {
constexpr int ok = 0;
constexpr int config_error = 1;
constexpr int blow_up = 2;
}  // namespace exit_code

const char* version_string();

struct RunCommand {
    std::filesystem::path config;
    std::filesystem::path out = "rb_out";
    std::optional<std::uint64_t> seed;
};

/// Runs one configuration. Writes into `out`:
///   series.csv       diagnostic records, flushed as they are produced
///   monitor.txt      proposition and transport monitor summary
///   transport.csv    transport bound samples
///   config.toml      fully resolved configuration
///   checkpoints/     spectral dumps when checkpoint_every > 0
///   manifest.json    written last, atomically
/// A configuration error is reported before anything is written.
int cmd_run(const RunCommand& cmd, std::ostream& log, std::ostream& err);

/// Same as cmd_run for an already resolved configuration.
struct RunOutcome {
    int code = exit_code::ok;
    std::string status;
    std::string message;
    std::optional<DiagnosticRecord> last;
    int monitor_violations = 0;
    double transport_worst_ratio = 0.0;
    StepPlan plan;
};
RunOutcome execute_run(const SolverConfig& config, const std::filesystem::path& out);

struct VerifyCommand {
    std::string suite = "all";
    std::uint64_t seed = 1;
    int threads = 1;
    /// When set, each suite's report and per-lemma sample CSVs go here.
    std::optional<std::filesystem::path> out;
};
int cmd_verify(const VerifyCommand& cmd, std::ostream& log, std::ostream& err);

struct SweepCommand {
    std::filesystem::path config;
    std::filesystem::path out = "rb_sweep";
    std::optional<std::uint64_t> seed;
    int jobs = 1;
};
/// Cartesian product of the [sweep] axes. Each run gets out/run_NNN and a
/// row in out/summary.csv. Exits 0 unless every run fails.
int cmd_sweep(const SweepCommand& cmd, std::ostream& log, std::ostream& err);

}  // namespace rbsim

#include <cstdlib>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "rbsim/cli.hpp"

namespace {

// RB_THREADS caps the worker count of ensemble checks inside one process.
int thread_cap() {
    int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("RB_THREADS")) {
        try {
            n = std::max(1, std::stoi(env));
        } catch (const std::exception&) {
            std::cerr << "ignoring RB_THREADS=" << env << '\n';
        }
    }
    return n;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rayleigh-Benard simulator with log-supercritical dissipation"};
    app.set_version_flag("--version", std::string(rbsim::version_string()));
    app.require_subcommand(1);

    rbsim::RunCommand run;
    std::uint64_t run_seed = 0;
    auto* run_cmd = app.add_subcommand("run", "integrate one configuration");
    run_cmd->add_option("--config", run.config, "TOML configuration file")->required();
    run_cmd->add_option("--out", run.out, "output directory")->capture_default_str();
    auto* run_seed_opt = run_cmd->add_option("--seed", run_seed, "override the configured seed");

    rbsim::VerifyCommand verify;
    std::string out_dir;
    auto* verify_cmd = app.add_subcommand("verify", "run an operator or inequality suite");
    verify_cmd->add_option("suite,--suite", verify.suite,
                           "operators, partition, bernstein, positivity, commutators, interpolation, transport, all")
        ->capture_default_str();
    verify_cmd->add_option("--seed", verify.seed, "ensemble seed")->capture_default_str();
    verify_cmd->add_option("--out", out_dir, "directory for report text and sample CSVs");
    verify_cmd->add_option("--jobs", verify.threads, "worker threads (capped by RB_THREADS)");

    rbsim::SweepCommand sweep;
    std::uint64_t sweep_seed = 0;
    auto* sweep_cmd = app.add_subcommand("sweep", "run the Cartesian product of the [sweep] axes");
    sweep_cmd->add_option("--config", sweep.config, "TOML configuration file with a [sweep] table")->required();
    sweep_cmd->add_option("--out", sweep.out, "output directory")->capture_default_str();
    auto* sweep_seed_opt = sweep_cmd->add_option("--seed", sweep_seed, "override the configured seed");
    sweep_cmd->add_option("--jobs", sweep.jobs, "concurrent runs")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : rbsim::exit_code::config_error;
    }

    const int cap = thread_cap();
    if (*run_cmd) {
        if (*run_seed_opt) {
            run.seed = run_seed;
        }
        return rbsim::cmd_run(run, std::cout, std::cerr);
    }
    if (*verify_cmd) {
        verify.threads = verify_cmd->count("--jobs") ? std::min(verify.threads, cap) : cap;
        if (!out_dir.empty()) {
            verify.out = out_dir;
        }
        return rbsim::cmd_verify(verify, std::cout, std::cerr);
    }
    if (*sweep_seed_opt) {
        sweep.seed = sweep_seed;
    }
    return rbsim::cmd_sweep(sweep, std::cout, std::cerr);
}

#include "rbsim/cli.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "rbsim/checkpoint.hpp"
#include "rbsim/config.hpp"
#include "rbsim/verify.hpp"

#ifndef RBSIM_VERSION
#define RBSIM_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace rbsim {

namespace {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return out.str();
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    return out;
}

void write_atomically(const fs::path& path, const std::string& text) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out = open_out(tmp);
        out << text;
        out.flush();
        if (!out) {
            throw Error("cannot write " + tmp.string());
        }
    }
    fs::rename(tmp, path);
}

// Catches problems that run_simulation would only hit after the output
// directory exists (unreadable IC file, bad symbol table).
void preflight(const SolverConfig& config) {
    const RbSystem system = make_system(config);
    (void)make_initial_state(system, config.ic, config.seed);
}

void write_monitor(const fs::path& path, const RunResult& r) {
    std::ofstream out = open_out(path);
    const MonitorReport& m = r.monitor;
    out << "status=" << (r.blew_up ? "blow-up" : "ok") << '\n'
        << "dt=" << g17(r.plan.dt) << '\n'
        << "steps=" << r.plan.steps << '\n'
        << "records=" << r.records.size() << '\n'
        << "monitor.ok=" << (m.ok() ? 1 : 0) << '\n'
        << "monitor.all_finite=" << (m.all_finite ? 1 : 0) << '\n'
        << "monitor.c_fit=" << g17(m.c_fit) << '\n'
        << "monitor.c_structural=" << g17(m.c_structural) << '\n'
        << "monitor.c_frozen=" << g17(m.c_frozen) << '\n'
        << "monitor.energy_worst_margin=" << g17(m.energy_worst_margin) << '\n'
        << "monitor.theta_linf_worst_margin=" << g17(m.theta_linf_worst_margin) << '\n'
        << "monitor.omega_besov_sq_integral=" << g17(m.omega_besov_sq_integral) << '\n'
        << "monitor.u_regularity_sq_integral=" << g17(m.u_regularity_sq_integral) << '\n'
        << "monitor.final_u_hs=" << g17(m.final_u_hs) << '\n'
        << "monitor.final_theta_hs=" << g17(m.final_theta_hs) << '\n'
        << "monitor.violations=" << m.violations.size() << '\n';
    for (const auto& v : m.violations) {
        out << "violation." << v.check << "=t:" << g17(v.t) << ",margin:" << g17(v.margin) << '\n';
    }
    out << "transport.p=" << g17(r.transport.p) << '\n'
        << "transport.worst_ratio=" << g17(r.transport.worst_ratio) << '\n'
        << "transport.finite=" << (r.transport.finite ? 1 : 0) << '\n';
    if (!r.message.empty()) {
        out << "message=" << r.message << '\n';
    }
}

void write_transport(const fs::path& path, const TransportReport& tr) {
    std::ofstream out = open_out(path);
    out << "t,lhs,rhs\n";
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        out << g17(tr.t[i]) << ',' << g17(tr.lhs[i]) << ',' << g17(tr.rhs[i]) << '\n';
    }
}

}  // namespace

const char* version_string() { return RBSIM_VERSION; }

RunOutcome execute_run(const SolverConfig& config, const fs::path& out_dir) {
    const std::string started = utc_now();
    fs::create_directories(out_dir);
    const fs::path series_path = out_dir / "series.csv";
    const fs::path ckpt_dir = out_dir / "checkpoints";
    std::vector<std::string> outputs{"series.csv", "monitor.txt", "transport.csv", "config.toml"};

    write_atomically(out_dir / "config.toml", to_toml(config));
    std::ofstream series = open_out(series_path);
    write_csv_header(series);
    series.flush();

    const RbSystem system = make_system(config);
    RunObserver obs;
    obs.on_record = [&](const DiagnosticRecord& rec) {
        write_csv_row(series, rec);
        series.flush();
    };
    if (config.checkpoint_every > 0) {
        fs::create_directories(ckpt_dir);
        obs.on_state = [&](const SolverState& s, long step) {
            if (step % config.checkpoint_every == 0) {
                char name[40];
                std::snprintf(name, sizeof name, "step_%08ld.csv", step);
                write_checkpoint(ckpt_dir / name, system.grid(), s, config.symbol);
                outputs.push_back("checkpoints/" + std::string(name));
            }
        };
    }

    RunOutcome outcome;
    RunResult result = run_simulation(config, obs);
    series.close();
    write_monitor(out_dir / "monitor.txt", result);
    write_transport(out_dir / "transport.csv", result.transport);

    outcome.plan = result.plan;
    outcome.monitor_violations = static_cast<int>(result.monitor.violations.size());
    outcome.transport_worst_ratio = result.transport.worst_ratio;
    if (!result.records.empty()) {
        outcome.last = result.records.back();
    }
    if (result.blew_up) {
        outcome.code = exit_code::blow_up;
        outcome.status = "blow-up";
        outcome.message = result.message;
    } else {
        outcome.status = result.monitor.ok() ? "ok" : "ok-monitor-violations";
    }

    ordered_json m;
    m["version"] = version_string();
    m["seed"] = config.seed;
    m["started"] = started;
    m["finished"] = utc_now();
    m["status"] = outcome.status;
    m["exit_code"] = outcome.code;
    if (!outcome.message.empty()) {
        m["message"] = outcome.message;
    }
    m["dt"] = result.plan.dt;
    m["steps"] = result.plan.steps;
    m["records"] = result.records.size();
    m["config"] = to_toml(config);
    m["outputs"] = outputs;
    write_atomically(out_dir / "manifest.json", m.dump(2) + "\n");
    return outcome;
}

int cmd_run(const RunCommand& cmd, std::ostream& log, std::ostream& err) {
    SolverConfig config;
    try {
        ConfigFile file = parse_config_file(cmd.config);
        if (!file.sweep.empty()) {
            throw ConfigError(cmd.config.string() + ": [sweep] tables are only accepted by 'rb sweep'");
        }
        config = file.solver;
        if (cmd.seed) {
            config.seed = *cmd.seed;
        }
        preflight(config);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_code::config_error;
    }
    try {
        const RunOutcome o = execute_run(config, cmd.out);
        log << "status=" << o.status << " dt=" << g17(o.plan.dt) << " steps=" << o.plan.steps
            << " out=" << cmd.out.string() << '\n';
        if (o.code == exit_code::blow_up) {
            err << "blow-up: " << o.message << '\n';
        }
        return o.code;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_code::config_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::config_error;
    }
}

int cmd_verify(const VerifyCommand& cmd, std::ostream& log, std::ostream& err) {
    VerifyOptions opt;
    opt.seed = cmd.seed;
    opt.threads = std::max(1, cmd.threads);
    std::vector<SuiteOutput> suites;
    try {
        suites = run_suite(cmd.suite, opt);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::config_error;
    }
    bool ok = true;
    for (const auto& s : suites) {
        s.write_text(log);
        ok = ok && s.ok();
        if (cmd.out) {
            fs::create_directories(*cmd.out);
            std::ofstream text = open_out(*cmd.out / (s.suite + ".txt"));
            s.write_text(text);
            auto dump = [&](const InequalityReport& r) {
                std::ofstream csv = open_out(*cmd.out / (s.suite + "_" + r.lemma + "_n" + std::to_string(r.n) +
                                                         "_seed" + std::to_string(r.seed) + ".csv"));
                r.write_csv(csv);
            };
            for (const auto& r : s.reports) {
                dump(r);
            }
            for (const auto& st : s.stability) {
                for (const auto& r : st.runs) {
                    dump(r);
                }
            }
        }
    }
    log << "verify." << cmd.suite << ".result=" << (ok ? "PASS" : "FAIL") << '\n';
    return ok ? exit_code::ok : exit_code::config_error;
}

int cmd_sweep(const SweepCommand& cmd, std::ostream& log, std::ostream& err) {
    std::vector<SolverConfig> runs;
    try {
        ConfigFile file = parse_config_file(cmd.config);
        if (cmd.seed) {
            file.solver.seed = *cmd.seed;
        }
        runs = expand_sweep(file);
        for (const auto& c : runs) {
            preflight(c);
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_code::config_error;
    }

    std::vector<RunOutcome> outcomes(runs.size());
    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < runs.size(); i = next++) {
            char name[16];
            std::snprintf(name, sizeof name, "run_%03zu", i);
            try {
                outcomes[i] = execute_run(runs[i], cmd.out / name);
            } catch (const std::exception& e) {
                outcomes[i].code = exit_code::config_error;
                outcomes[i].status = "error";
                outcomes[i].message = e.what();
            }
            std::lock_guard lock(log_mutex);
            log << name << " symbol=" << runs[i].symbol << " n=" << runs[i].n << " status=" << outcomes[i].status
                << '\n';
        }
    };
    const int jobs = std::clamp<int>(cmd.jobs, 1, static_cast<int>(std::max<std::size_t>(runs.size(), 1)));
    std::vector<std::jthread> pool;
    for (int j = 1; j < jobs; ++j) {
        pool.emplace_back(worker);
    }
    worker();
    pool.clear();

    fs::create_directories(cmd.out);
    std::ostringstream summary;
    summary << "run,symbol,n,dt,amplitude,exit_code,status,steps,t_final,u_l2,theta_l2,theta_linf,u_Hs,theta_Hs,"
               "monitor_violations,transport_worst_ratio\n";
    int failures = 0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const SolverConfig& c = runs[i];
        const RunOutcome& o = outcomes[i];
        failures += o.code != exit_code::ok;
        const double nan = std::numeric_limits<double>::quiet_NaN();
        const DiagnosticRecord last = o.last.value_or(DiagnosticRecord{nan, nan, nan, nan, nan});
        char name[16];
        std::snprintf(name, sizeof name, "run_%03zu", i);
        summary << name << ',' << c.symbol << ',' << c.n << ',' << g17(o.plan.dt) << ',' << g17(c.ic.amplitude)
                << ',' << o.code << ',' << o.status << ',' << o.plan.steps << ',' << g17(last.t) << ','
                << g17(last.u_l2) << ',' << g17(last.theta_l2) << ',' << g17(last.theta_linf) << ','
                << g17(last.u_hs) << ',' << g17(last.theta_hs) << ',' << o.monitor_violations << ','
                << g17(o.transport_worst_ratio) << '\n';
    }
    write_atomically(cmd.out / "summary.csv", summary.str());
    log << "sweep runs=" << runs.size() << " failed=" << failures << " out=" << cmd.out.string() << '\n';
    if (!runs.empty() && failures == static_cast<int>(runs.size())) {
        err << "every sweep run failed\n";
        return outcomes.front().code;
    }
    return exit_code::ok;
}

}  // namespace rbsim

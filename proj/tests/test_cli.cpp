#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rbsim/cli.hpp"

using namespace rbsim;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("rbsim_cli_" + name)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

fs::path write(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

long lines(const fs::path& p) {
    const std::string s = slurp(p);
    return std::count(s.begin(), s.end(), '\n');
}

const char* small = R"(
n = 32
dt = 0.05
t_end = 0.2
checkpoint_every = 2
)";

}  // namespace

TEST_CASE("run writes its outputs and a manifest") {
    TempDir dir("run");
    RunCommand cmd{write(dir.path / "c.toml", small), dir.path / "out", std::nullopt};
    std::ostringstream log, err;
    CHECK(cmd_run(cmd, log, err) == exit_code::ok);
    CHECK(lines(cmd.out / "series.csv") == 6);
    for (const char* f : {"monitor.txt", "transport.csv", "config.toml", "manifest.json"}) {
        CHECK(fs::exists(cmd.out / f));
    }
    CHECK(fs::exists(cmd.out / "checkpoints" / "step_00000000.csv"));
    CHECK(fs::exists(cmd.out / "checkpoints" / "step_00000004.csv"));
    CHECK_FALSE(fs::exists(cmd.out / "manifest.json.tmp"));

    const auto m = nlohmann::json::parse(slurp(cmd.out / "manifest.json"));
    CHECK(m["status"] == "ok");
    CHECK(m["exit_code"] == 0);
    CHECK(m["steps"] == 4);

    // the snapshot alone reproduces the run
    RunCommand again{write(dir.path / "snap.toml", m["config"].get<std::string>()), dir.path / "again", std::nullopt};
    CHECK(cmd_run(again, log, err) == exit_code::ok);
    CHECK(slurp(again.out / "series.csv") == slurp(cmd.out / "series.csv"));
}

TEST_CASE("configuration errors exit 1 without writing anything") {
    TempDir dir("bad");
    std::ostringstream log, err;
    RunCommand cmd{write(dir.path / "c.toml", "n = 32\nbogus = 1\n"), dir.path / "out", std::nullopt};
    CHECK(cmd_run(cmd, log, err) == exit_code::config_error);
    CHECK_FALSE(fs::exists(cmd.out));
    CHECK(err.str().find("bogus") != std::string::npos);

    cmd.config = write(dir.path / "ic.toml", "n = 32\n[ic]\nkind = \"file\"\nfile = \"missing.csv\"\n");
    CHECK(cmd_run(cmd, log, err) == exit_code::config_error);
    CHECK_FALSE(fs::exists(cmd.out));

    cmd.config = write(dir.path / "sw.toml", "n = 32\n[sweep]\nn = [32, 64]\n");
    CHECK(cmd_run(cmd, log, err) == exit_code::config_error);
    cmd.config = dir.path / "absent.toml";
    CHECK(cmd_run(cmd, log, err) == exit_code::config_error);
}

TEST_CASE("blow-up exits 2 with the partial series on disk") {
    TempDir dir("blowup");
    std::ostringstream log, err;
    RunCommand cmd{write(dir.path / "c.toml", R"(
n = 64
dt = 0.1
t_end = 5.0
[ic]
amplitude = 1000.0
theta_amplitude = 1000.0
[physics]
dissipation = false
)"),
                   dir.path / "out", std::nullopt};
    CHECK(cmd_run(cmd, log, err) == exit_code::blow_up);
    CHECK(lines(cmd.out / "series.csv") >= 2);
    const auto m = nlohmann::json::parse(slurp(cmd.out / "manifest.json"));
    CHECK(m["status"] == "blow-up");
    CHECK(m["exit_code"] == 2);
}

TEST_CASE("seed override") {
    TempDir dir("seed");
    std::ostringstream log, err;
    const fs::path cfg = write(dir.path / "c.toml", "n = 32\nt_end = 0.1\ndt = 0.05\n[ic]\nkind = \"random_band\"\n");
    RunCommand a{cfg, dir.path / "a", 5};
    RunCommand b{cfg, dir.path / "b", 6};
    CHECK(cmd_run(a, log, err) == 0);
    CHECK(cmd_run(b, log, err) == 0);
    CHECK(slurp(a.out / "series.csv") != slurp(b.out / "series.csv"));
    CHECK(nlohmann::json::parse(slurp(a.out / "manifest.json"))["seed"] == 5);
}

TEST_CASE("verify exit codes") {
    TempDir dir("verify");
    std::ostringstream log, err;
    VerifyCommand v;
    v.suite = "foo";
    CHECK(cmd_verify(v, log, err) == exit_code::config_error);
    v.suite = "partition";
    v.out = dir.path / "reports";
    CHECK(cmd_verify(v, log, err) == exit_code::ok);
    CHECK(log.str().find("PASS partition of unity") != std::string::npos);
    CHECK(fs::exists(dir.path / "reports" / "partition.txt"));
}

TEST_CASE("sweeps") {
    TempDir dir("sweep");
    std::ostringstream log, err;
    const fs::path cfg = write(dir.path / "s.toml", R"(
dt = 0.1
t_end = 0.2
[sweep]
symbol = ["constant:c0=1", "log:mu1=0.5", "log:mu1=1"]
n = [32, 64]
)");
    SweepCommand s{cfg, dir.path / "a", std::nullopt, 3};
    CHECK(cmd_sweep(s, log, err) == exit_code::ok);
    CHECK(lines(s.out / "summary.csv") == 7);
    CHECK(fs::exists(s.out / "run_005" / "series.csv"));
    SweepCommand again{cfg, dir.path / "b", std::nullopt, 1};
    CHECK(cmd_sweep(again, log, err) == exit_code::ok);
    CHECK(slurp(s.out / "summary.csv") == slurp(again.out / "summary.csv"));

    // a 1x1 sweep reproduces a plain run
    const fs::path one = write(dir.path / "one.toml", "n = 32\ndt = 0.1\nt_end = 0.2\n");
    SweepCommand single{one, dir.path / "single", std::nullopt, 1};
    CHECK(cmd_sweep(single, log, err) == exit_code::ok);
    RunCommand run{one, dir.path / "run", std::nullopt};
    CHECK(cmd_run(run, log, err) == exit_code::ok);
    CHECK(slurp(single.out / "run_000" / "series.csv") == slurp(run.out / "series.csv"));

    // every run blowing up fails the sweep
    const fs::path boom = write(dir.path / "boom.toml", R"(
n = 64
dt = 0.1
t_end = 5.0
[ic]
amplitude = 1000.0
theta_amplitude = 1000.0
[physics]
dissipation = false
[sweep]
amplitude = [1000.0, 2000.0]
)");
    SweepCommand fail{boom, dir.path / "boom", std::nullopt, 2};
    CHECK(cmd_sweep(fail, log, err) == exit_code::blow_up);
    CHECK(lines(fail.out / "summary.csv") == 3);
}

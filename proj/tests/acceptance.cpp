// Acceptance criteria 1-9. One PASS/FAIL line per criterion; a criterion that
// exceeds its runtime budget fails.
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

#include "rbsim/cli.hpp"
#include "rbsim/diagnostics.hpp"
#include "rbsim/run.hpp"
#include "rbsim/spectral.hpp"
#include "rbsim/verify.hpp"

using namespace rbsim;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
    void take(const SuiteOutput& s) {
        for (const auto& c : s.checks) {
            require(c.pass, c.name);
        }
        for (const auto& r : s.reports) {
            require(r.ok(), r.lemma + " p=" + std::to_string(r.params.count("p") ? r.params.at("p") : 0.0));
            worst = std::max(worst, r.empirical_constant);
        }
        for (const auto& st : s.stability) {
            require(st.stable, st.lemma + " stability");
            spread = std::max(spread, st.spread);
        }
    }
    double worst = -INFINITY;
    double spread = 0.0;
};

int failures = 0;

void criterion(int id, const std::string& title, double budget_s, const std::function<void(Outcome&)>& body) {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.pass = false;
        out.detail << " [exception: " << e.what() << "]";
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (elapsed > budget_s) {
        out.pass = false;
        out.detail << " [over budget]";
    }
    failures += !out.pass;
    std::cout << (out.pass ? "PASS" : "FAIL") << " criterion " << id << " " << title << ":" << out.detail.str()
              << " (" << std::setprecision(3) << elapsed << " s of " << budget_s << " s)" << std::endl;
}

PhysicsToggles linear_only() {
    PhysicsToggles p;
    p.advection = p.buoyancy = p.source = false;
    return p;
}

SolverConfig taylor_green(double t_end) {
    SolverConfig c;
    c.n = 128;
    c.symbol = "log:mu1=1";
    c.t_end = t_end;
    return c;
}

SolverState run_to(const RbSystem& sys, SolverState s, double t_end, long steps) {
    return integrate(sys, std::move(s), {t_end / static_cast<double>(steps), steps}, {});
}

double distance(const Grid2D& grid, const SolverState& a, const SolverState& b) {
    return std::sqrt(l2_norm_squared(grid, a.omega - b.omega) + l2_norm_squared(grid, a.theta - b.theta));
}

}  // namespace

int main() {
    std::cout << std::setprecision(4);
    const VerifyOptions opt;

    criterion(1, "operator algebra", 5.0, [&](Outcome& o) {
        SuiteOutput s = verify_operators(opt);
        std::erase_if(s.checks, [](const CheckResult& c) { return c.name.rfind("symbol ", 0) == 0 || c.name.rfind("fixture", 0) == 0; });
        o.take(s);
        double worst = 0.0;
        for (const auto& c : s.checks) {
            if (c.rule == CheckResult::Rule::at_most) {
                worst = std::max(worst, c.value);
            }
        }
        o.detail << " " << s.checks.size() << " identities, worst defect " << worst;
    });

    criterion(2, "symbol validation", 1.0, [&](Outcome& o) {
        const SuiteOutput s = verify_symbols(opt);
        o.take(s);
        o.detail << " log and loglog pass (a)-(c) at k_max=1e4, g(r)=r fails (c)";
    });

    criterion(3, "Littlewood-Paley", 10.0, [&](Outcome& o) {
        const SuiteOutput s = verify_partition(opt);
        o.take(s);
        double lo = INFINITY, hi = 0.0;
        for (const auto& c : s.checks) {
            if (c.name.rfind("B^s_22", 0) == 0) {
                lo = std::min(lo, c.value);
                hi = std::max(hi, c.value);
            }
        }
        o.detail << " partition defect " << s.checks.front().value << ", Besov/Sobolev ratios in [" << lo << ", " << hi
                 << "]";
    });

    criterion(4, "positivity and Bernstein suites", 60.0, [&](Outcome& o) {
        o.take(verify_positivity(opt));
        const double worst_gap = o.worst;
        o.take(verify_bernstein(opt));
        o.detail << " worst normalized positivity deficit " << worst_gap << ", largest stability spread " << o.spread;
    });

    criterion(5, "commutator and interpolation suites", 120.0, [&](Outcome& o) {
        o.take(verify_commutators(opt));
        o.take(verify_interpolation(opt));
        o.detail << " largest stability spread " << o.spread;
    });

    criterion(6, "dynamics fidelity", 300.0, [&](Outcome& o) {
        // (i) isolated modes under the exact propagator
        {
            const SymbolG g = SymbolG::log(1.0);
            const RbSystem sys(Grid2D(128), g, linear_only());
            double worst = 0.0;
            for (auto [m1, m2] : {std::pair{1, 0}, std::pair{3, 4}, std::pair{7, 24}, std::pair{20, 21}}) {
                const SolverState s0{cosine_mode(sys.grid(), m1, m2), SpectralField::Zero(128, 128), 0.0};
                const SolverState s1 = run_to(sys, s0, 1.0, 7);
                const double k = std::hypot(m1, m2);
                const SpectralField expect = std::exp(-k / g(k)) * s0.omega;
                worst = std::max(worst, (s1.omega - expect).abs().maxCoeff());
            }
            o.require(worst <= 1e-12, "linear decay");
            o.detail << " (i) decay defect " << worst;
        }
        // (ii) Richardson ratio against a dt/8 reference
        const RbSystem sys = make_system(taylor_green(0.5));
        const SolverState s0 = make_initial_state(sys, ICSpec{}, 0);
        {
            const SolverState ref = run_to(sys, s0, 0.5, 80);
            const double e1 = distance(sys.grid(), run_to(sys, s0, 0.5, 10), ref);
            const double e2 = distance(sys.grid(), run_to(sys, s0, 0.5, 20), ref);
            o.require(e1 / e2 >= 12.0 && e1 / e2 <= 20.0, "Richardson ratio");
            o.detail << "; (ii) Richardson ratio " << e1 / e2;
        }
        // (iii) energy balance along an auto-dt run
        {
            const RunResult r = run_simulation(taylor_green(1.0));
            const double e0 = Diagnostics(sys).energy(s0);
            double worst = 0.0;
            for (const auto& rec : r.records) {
                worst = std::max(worst, std::abs(rec.energy_balance_residual));
            }
            o.require(!r.blew_up && worst < 1e-6 * e0, "energy balance");
            o.detail << "; (iii) energy residual " << worst / e0 << " E(0) at dt " << r.plan.dt;
        }
        // (iv) G residual under step refinement, around the state at t = 0.25
        {
            const Diagnostics diag(sys);
            const SolverState mid = run_to(sys, s0, 0.25, 20);
            auto residual = [&](double h) {
                const SolverState a = sys.step(mid, h);
                return diag.g_equation_residual(mid, a, sys.step(a, h));
            };
            const double ratio = residual(0.05) / residual(0.025);
            o.require(ratio >= 3.5 && ratio <= 4.5, "G residual order");
            o.detail << "; (iv) G residual ratio " << ratio;
        }
    });

    criterion(7, "proof-ladder monitors", 600.0, [&](Outcome& o) {
        const SolverConfig c = taylor_green(2.0);
        const RunResult r = run_simulation(c);
        const MonitorReport& m = r.monitor;
        o.require(!r.blew_up, "no blow-up");
        o.require(m.ok(), "monitor violations");
        o.require(std::isfinite(m.final_u_hs) && std::isfinite(m.final_theta_hs) &&
                      std::isfinite(m.u_regularity_sq_integral),
                  "finite norms");

        const fs::path dir = fs::temp_directory_path() / "rbsim_acceptance_c7";
        fs::remove_all(dir);
        fs::create_directories(dir);
        std::ofstream(dir / "tg.toml") << "n = 128\nsymbol = \"log:mu1=1\"\nt_end = 2.0\n";
        std::ostringstream log, err;
        const int code = cmd_run({dir / "tg.toml", dir / "out", std::nullopt}, log, err);
        fs::remove_all(dir);
        o.require(code == exit_code::ok, "exit code 0");
        o.detail << " theta_inf margin " << m.theta_linf_worst_margin << ", |u|_H2 " << m.final_u_hs << ", |theta|_H2 "
                 << m.final_theta_hs << ", int |u|^2_B(2.5,g^-1/2) " << m.u_regularity_sq_integral << ", exit " << code;
    });

    criterion(8, "uniqueness and stability", 600.0, [&](Outcome& o) {
        const SolverConfig c = taylor_green(1.0);
        const TwinRunReport same = twin_run_stability(c, 0.0);
        o.require(same.identical, "identical twins");
        const TwinRunReport near = twin_run_stability(c, 1e-4);
        o.require(near.ok(), "Gronwall envelope");
        o.detail << " delta0=0 identical=" << same.identical << "; delta0=1e-4 worst D/envelope " << near.worst_ratio
                 << " with C=" << near.c_frozen << " (fit " << near.c_fit << ")";
    });

    criterion(9, "criticality contrast", 60.0, [&](Outcome& o) {
        const SymbolG lg = SymbolG::log(1.0), one = SymbolG::constant(1.0);
        const RbSystem sys_log(Grid2D(128), lg, linear_only());
        const RbSystem sys_one(Grid2D(128), one, linear_only());
        const double t = 0.5;
        double rate_defect = 0.0, ratio_defect = 0.0;
        for (auto [m1, m2] : {std::pair{1, 0}, std::pair{2, 2}, std::pair{5, 12}, std::pair{16, 30}, std::pair{42, 0}}) {
            const SolverState s0{cosine_mode(sys_log.grid(), m1, m2), SpectralField::Zero(128, 128), 0.0};
            const int a = sys_log.grid().index(m1), b = sys_log.grid().index(m2);
            const double k = std::hypot(m1, m2);
            const double r_log = -std::log(std::abs(run_to(sys_log, s0, t, 5).omega(a, b) / s0.omega(a, b))) / t;
            const double r_one = -std::log(std::abs(run_to(sys_one, s0, t, 5).omega(a, b) / s0.omega(a, b))) / t;
            rate_defect = std::max({rate_defect, std::abs(r_log - k / lg(k)) / (k / lg(k)), std::abs(r_one - k) / k});
            ratio_defect = std::max(ratio_defect, std::abs(r_log / r_one * std::log(std::numbers::e + k) - 1.0));
        }
        o.require(rate_defect <= 1e-12, "decay rate |k|/g");
        o.require(ratio_defect <= 1e-12, "rate ratio");
        o.detail << " relative rate defect " << rate_defect << ", ratio defect " << ratio_defect;
    });

    std::cout << (failures == 0 ? "ALL PASS" : "FAILURES: " + std::to_string(failures)) << std::endl;
    return failures == 0 ? 0 : 1;
}

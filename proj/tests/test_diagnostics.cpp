#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rbsim/checkpoint.hpp"
#include "rbsim/diagnostics.hpp"
#include "rbsim/multiplier.hpp"
#include "rbsim/run.hpp"
#include "rbsim/spectral.hpp"

using namespace rbsim;

namespace {

double max_abs(const SpectralField& f) { return f.abs().maxCoeff(); }

PhysicsToggles linear_only() {
    PhysicsToggles p;
    p.advection = p.buoyancy = p.source = false;
    return p;
}

SolverState random_state(const RbSystem& sys, std::uint64_t seed) {
    ICSpec ic;
    ic.kind = ICSpec::Kind::random_band;
    ic.k_hi = 6.0;
    return make_initial_state(sys, ic, seed);
}

std::vector<SolverState> trajectory(const RbSystem& sys, SolverState s, double h, int count) {
    std::vector<SolverState> out{s};
    for (int i = 1; i < count; ++i) {
        out.push_back(sys.step(out.back(), h));
    }
    return out;
}

std::string csv_of(const SolverConfig& c) {
    std::ostringstream out;
    write_csv_header(out);
    RunObserver obs;
    obs.on_record = [&](const DiagnosticRecord& r) { write_csv_row(out, r); };
    run_simulation(c, obs);
    return out.str();
}

SolverConfig small_run() {
    SolverConfig c;
    c.n = 32;
    c.t_end = 0.3;
    c.dt = 0.05;
    return c;
}

}  // namespace

TEST_CASE("combined quantity G") {
    const Grid2D grid(32);
    const SymbolG one = SymbolG::constant(1.0);
    const RbSystem sys(grid, one);
    SolverState s = random_state(sys, 1);
    const SpectralField theta = s.theta;
    s.theta.setZero();
    CHECK(max_abs(combined_G(grid, s, one) - s.omega) == 0.0);

    const SolverState m{SpectralField::Zero(32, 32), forward(grid, sample(grid, [](double x1, double) { return std::sin(x1); })), 0.0};
    CHECK(max_abs(combined_G(grid, m, one) + forward(grid, sample(grid, [](double x1, double) { return std::cos(x1); }))) < 1e-15);

    s.theta = theta;
    const SymbolG g = SymbolG::log(1.0);
    CHECK(max_abs(combined_G(grid, s, g) + op_Rg(g)(grid, s.theta) - s.omega) < 1e-12 * max_abs(s.omega));
}

TEST_CASE("G equation with the exact time derivative") {
    // dG/dt taken from the right-hand side itself, so only the algebra of
    // the G equation is tested.
    for (const SymbolG& g : {SymbolG::log(1.0), SymbolG::constant(1.0)}) {
        const RbSystem sys(Grid2D(64), g);
        const Diagnostics diag(sys);
        const SolverState s = random_state(sys, 8);
        const Tendency d = sys.full_rhs(s);
        const SpectralField dG = d.omega - op_Rg(g)(sys.grid(), d.theta);
        CHECK(max_abs(diag.g_equation_defect(s, dG)) < 1e-12 * max_abs(dG));
    }
}

TEST_CASE("G equation with g = 1 matches a plain Riesz transform") {
    const RbSystem sys(Grid2D(32), SymbolG::constant(1.0));
    const Grid2D& grid = sys.grid();
    const SolverState s = random_state(sys, 4);
    SpectralField riesz(32, 32);
    for (int b = 0; b < 32; ++b) {
        for (int a = 0; a < 32; ++a) {
            const double k1 = grid.k1()(a, b), k = grid.kmag()(a, b);
            riesz(a, b) = (k == 0.0 || grid.is_nyquist(a)) ? 0.0 : std::complex<double>(0.0, k1 / k);
        }
    }
    CHECK(max_abs(combined_G(grid, s, SymbolG::constant(1.0)) - (s.omega - riesz * s.theta)) < 1e-15);
}

TEST_CASE("G residual is second order in the step") {
    const RbSystem sys(Grid2D(64), SymbolG::log(1.0));
    const Diagnostics diag(sys);
    const SolverState s0 = make_initial_state(sys, ICSpec{}, 0);
    auto residual = [&](double h) {
        const auto tr = trajectory(sys, s0, h, 3);
        return diag.g_equation_residual(tr[0], tr[1], tr[2]);
    };
    const double ratio = residual(0.05) / residual(0.025);
    CHECK(ratio > 3.5);
    CHECK(ratio < 4.5);

    const RbSystem frozen(Grid2D(32), SymbolG::log(1.0), linear_only());
    const Diagnostics fd(frozen);
    SolverState still = random_state(frozen, 2);
    still.omega.setZero();
    const auto tr = trajectory(frozen, still, 0.1, 3);
    CHECK(fd.g_equation_residual(tr[0], tr[1], tr[2]) < 1e-10);
}

TEST_CASE("energy balance") {
    // omega = 0 without buoyancy: nothing moves
    PhysicsToggles no_buoyancy;
    no_buoyancy.buoyancy = false;
    const RbSystem still(Grid2D(32), SymbolG::log(1.0), no_buoyancy);
    SolverState s = random_state(still, 3);
    s.omega.setZero();
    const auto tr = trajectory(still, s, 0.1, 5);
    CHECK(Diagnostics(still).energy_balance_residual(tr) == 0.0);

    // one decaying mode: exact exponential, so only quadrature error remains
    const RbSystem lin(Grid2D(32), SymbolG::log(1.0), linear_only());
    const Diagnostics dl(lin);
    const SolverState m{cosine_mode(lin.grid(), 3, 1), SpectralField::Zero(32, 32), 0.0};
    const auto decay = trajectory(lin, m, 0.01, 5);
    CHECK(std::abs(dl.energy_balance_residual(decay)) < 1e-10 * dl.energy(m));
    // Simpson needs a finer window for the same accuracy
    const auto fine = trajectory(lin, m, 1e-3, 3);
    CHECK(std::abs(dl.energy_balance_residual(fine)) < 1e-10 * dl.energy(m));
    CHECK_THROWS_AS(dl.energy_balance_residual(std::span(decay).first(4)), Error);
}

TEST_CASE("energy rate matches the time derivative of the energy") {
    const RbSystem sys(Grid2D(64), SymbolG::log(1.0));
    const Diagnostics diag(sys);
    const SolverState s0 = random_state(sys, 6);
    const double h = 1e-3;
    const SolverState sp = sys.step(s0, h);
    const SolverState spp = sys.step(sp, h);
    // centred difference around the middle state
    const double dEdt = (diag.energy(spp) - diag.energy(s0)) / (2.0 * h);
    CHECK(dEdt == doctest::Approx(diag.energy_rate(sp)).epsilon(1e-5));
}

TEST_CASE("CSV layout") {
    std::ostringstream out;
    write_csv_header(out);
    const std::string head = out.str();
    CHECK(head.rfind("t,u_l2,theta_l2,", 0) == 0);
    CHECK(std::count(head.begin(), head.end(), ',') == static_cast<long>(DiagnosticRecord::column_count) - 1);

    DiagnosticRecord r;
    r.t = 0.1;
    std::ostringstream row;
    write_csv_row(row, r);
    CHECK(row.str().rfind("0.10000000000000001,0,", 0) == 0);
}

TEST_CASE("identical runs produce identical CSV bytes") {
    const std::string a = csv_of(small_run());
    CHECK(a == csv_of(small_run()));
    SolverConfig c = small_run();
    c.t_end = 0.0;
    const std::string single = csv_of(c);
    CHECK(std::count(single.begin(), single.end(), '\n') == 2);
}

TEST_CASE("a checkpoint reproduces its CSV row bit for bit") {
    const RbSystem sys(Grid2D(32), SymbolG::log(1.0));
    const Diagnostics diag(sys);
    const SolverState s = sys.step(random_state(sys, 12), 0.05);
    const auto path = std::filesystem::temp_directory_path() / "rbsim_test_checkpoint.csv";
    write_checkpoint(path, sys.grid(), s, sys.symbol().spec());
    const Checkpoint ck = read_checkpoint(path);
    std::filesystem::remove(path);
    CHECK(ck.n == 32);
    CHECK(ck.t == s.t);
    CHECK(ck.symbol == sys.symbol().spec());
    CHECK(max_abs(ck.state.omega - s.omega) == 0.0);
    std::ostringstream a, b;
    write_csv_row(a, diag.norms(s));
    write_csv_row(b, diag.norms(ck.state));
    CHECK(a.str() == b.str());
}

TEST_CASE("proposition monitor") {
    SolverConfig lin = small_run();
    lin.physics = linear_only();
    CHECK(run_simulation(lin).monitor.ok());

    SolverConfig cold = small_run();
    cold.ic.theta_amplitude = 0.0;
    cold.physics.buoyancy = false;
    cold.physics.source = false;
    const RunResult r = run_simulation(cold);
    CHECK(r.monitor.ok());
    for (const auto& rec : r.records) {
        CHECK(rec.theta_linf == 0.0);
    }

    std::vector<DiagnosticRecord> records = r.records;
    records.back().u_l2 = NAN;
    CHECK_FALSE(monitor_propositions(records).ok());
}

TEST_CASE("transport bound") {
    PhysicsToggles frozen = linear_only();
    frozen.dissipation = false;
    const RbSystem sys(Grid2D(32), SymbolG::log(1.0), frozen);
    const Diagnostics diag(sys);
    SolverState s = random_state(sys, 7);
    s.omega.setZero();
    const TransportReport rep = transport_besov_check(diag, trajectory(sys, s, 0.1, 4), INFINITY);
    CHECK(rep.finite);
    CHECK(rep.worst_ratio == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("twin runs") {
    SolverConfig c = small_run();
    const TwinRunReport same = twin_run_stability(c, 0.0);
    CHECK(same.identical);
    CHECK(same.ok());

    // without coupling or advection the perturbed temperature mode is frozen
    c.physics = linear_only();
    const TwinRunReport lin = twin_run_stability(c, 1e-6);
    CHECK(lin.final_difference == doctest::Approx(1e-6).epsilon(1e-9));
    CHECK(lin.ok());
}

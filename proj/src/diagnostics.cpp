#include "rbsim/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "rbsim/multiplier.hpp"
#include "rbsim/spectral.hpp"

namespace rbsim {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

BesovNormSpec weighted(double s, double p, double q, const SymbolG& g, double power) {
    BesovNormSpec spec;
    spec.s = s;
    spec.p = p;
    spec.q = q;
    spec.weight = {g, power};
    return spec;
}

double vector_besov(const DyadicPartition& partition, const SpectralVectorField& v,
                    const BesovNormSpec& spec) {
    const double a = besov_norm(partition, v.x1, spec);
    const double b = besov_norm(partition, v.x2, spec);
    return std::hypot(a, b);
}

}  // namespace

SpectralField combined_G(const Grid2D& grid, const SolverState& state, const SymbolG& g) {
    return state.omega - op_Rg(g).apply(grid, state.theta);
}

const std::array<const char*, DiagnosticRecord::column_count>& DiagnosticRecord::columns() {
    static const std::array<const char*, column_count> names{
        "t",
        "u_l2",
        "theta_l2",
        "theta_l3",
        "theta_linf",
        "lhalf_u_l2",
        "G_l2",
        "G_l3",
        "grad_u_linf",
        "grad_theta_linf",
        "omega_B0ginv_3inf",
        "G_B2/3_31",
        "u_Hs",
        "theta_Hs",
        "theta_B0g_inf1",
        "energy_balance_residual",
        "g_equation_residual",
        "u_linf",
        "u_Bs+1/2_g^-1/2_22",
    };
    return names;
}

std::array<double, DiagnosticRecord::column_count> DiagnosticRecord::values() const {
    return {t,
            u_l2,
            theta_l2,
            theta_l3,
            theta_linf,
            lhalf_u_l2,
            G_l2,
            G_l3,
            grad_u_linf,
            grad_theta_linf,
            omega_b0_ginv_3inf,
            G_b23_31,
            u_hs,
            theta_hs,
            theta_b0g_inf1,
            energy_balance_residual,
            g_equation_residual,
            u_linf,
            u_b_regularity};
}

bool DiagnosticRecord::all_finite() const {
    for (double v : values()) {
        if (!std::isfinite(v)) {
            return false;
        }
    }
    return true;
}

void write_csv_header(std::ostream& out) {
    const auto& names = DiagnosticRecord::columns();
    for (std::size_t i = 0; i < names.size(); ++i) {
        out << (i ? "," : "") << names[i];
    }
    out << '\n';
}

void write_csv_row(std::ostream& out, const DiagnosticRecord& record) {
    char buf[32];
    const auto values = record.values();
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", values[i]);
        out << (i ? "," : "") << buf;
    }
    out << '\n';
}

Diagnostics::Diagnostics(const RbSystem& system, double hs)
    : system_(system), partition_(system.grid()), hs_(hs) {
    const Grid2D& grid = system.grid();
    const SymbolG& g = system.symbol();
    l_symbol_ = op_L(g).symbol_on(grid).real();
    rg_symbol_ = op_Rg(g).symbol_on(grid);
    omega_spec_ = weighted(0.0, 3.0, inf, g, -1.0);
    G_spec_ = weighted(2.0 / 3.0, 3.0, 1.0, g, 0.0);
    theta_spec_ = weighted(0.0, inf, 1.0, g, 1.0);
    u_reg_spec_ = weighted(hs + 0.5, 2.0, 2.0, g, -0.5);
}

DiagnosticRecord Diagnostics::norms(const SolverState& state) const {
    const Grid2D& grid = system_.grid();
    DiagnosticRecord r;
    r.t = state.t;
    const SpectralVectorField u_hat = system_.velocity(state);
    const RealVectorField u = real_inverse(grid, u_hat);
    const RealField theta = real_inverse(grid, state.theta);
    const SpectralField G_hat = state.omega - rg_symbol_ * state.theta;
    const RealField G = real_inverse(grid, G_hat);

    r.u_l2 = std::sqrt(l2_norm_squared(grid, u_hat.x1) + l2_norm_squared(grid, u_hat.x2));
    r.u_linf = lp_norm(grid, u, inf);
    r.theta_l2 = std::sqrt(l2_norm_squared(grid, state.theta));
    r.theta_l3 = lp_norm(grid, theta, 3.0);
    r.theta_linf = lp_norm(grid, theta, inf);
    r.lhalf_u_l2 = std::sqrt(
        grid.area() * (l_symbol_ * (u_hat.x1.abs2() + u_hat.x2.abs2())).sum());
    r.G_l2 = std::sqrt(l2_norm_squared(grid, G_hat));
    r.G_l3 = lp_norm(grid, G, 3.0);
    r.grad_u_linf = gradient_magnitude(grid, u_hat).maxCoeff();
    r.grad_theta_linf = gradient_magnitude(grid, state.theta).maxCoeff();
    r.omega_b0_ginv_3inf = besov_norm(partition_, state.omega, omega_spec_);
    r.G_b23_31 = besov_norm(partition_, G_hat, G_spec_);
    r.u_hs = std::hypot(sobolev_norm(grid, u_hat.x1, hs_), sobolev_norm(grid, u_hat.x2, hs_));
    r.theta_hs = sobolev_norm(grid, state.theta, hs_);
    r.theta_b0g_inf1 = besov_norm(partition_, state.theta, theta_spec_);
    r.u_b_regularity = vector_besov(partition_, u_hat, u_reg_spec_);
    r.energy_balance_residual = nan;
    r.g_equation_residual = nan;
    return r;
}

double Diagnostics::energy(const SolverState& state) const {
    const Grid2D& grid = system_.grid();
    const SpectralVectorField u = system_.velocity(state);
    return 0.5 * (l2_norm_squared(grid, u.x1) + l2_norm_squared(grid, u.x2) +
                  l2_norm_squared(grid, state.theta));
}

double Diagnostics::energy_rate(const SolverState& state) const {
    const Grid2D& grid = system_.grid();
    const SpectralVectorField u = system_.velocity(state);
    const double dissipation =
        grid.area() * (system_.rate() * (u.x1.abs2() + u.x2.abs2())).sum();
    // int u2 theta by Parseval: area * sum u2_hat conj(theta_hat)
    const double work = grid.area() * (u.x2 * state.theta.conjugate()).sum().real();
    const PhysicsToggles& phys = system_.physics();
    const double couplings = (phys.buoyancy ? 1.0 : 0.0) + (phys.source ? 1.0 : 0.0);
    return couplings * work - dissipation;
}

double Diagnostics::energy_balance_residual(std::span<const SolverState> window) const {
    static constexpr double simpson[] = {1.0 / 3.0, 4.0 / 3.0, 1.0 / 3.0};
    static constexpr double boole[] = {14.0 / 45.0, 64.0 / 45.0, 24.0 / 45.0, 64.0 / 45.0,
                                       14.0 / 45.0};
    const std::size_t m = window.size();
    if (m != 3 && m != 5) {
        throw Error("energy balance needs a window of 3 or 5 states");
    }
    const double span = window.back().t - window.front().t;
    const double h = span / static_cast<double>(m - 1);
    for (std::size_t i = 1; i < m; ++i) {
        if (!(span > 0.0) || std::abs(window[i].t - window[i - 1].t - h) > 1e-9 * span) {
            throw Error("energy balance needs uniformly spaced states");
        }
    }
    const double* w = m == 3 ? simpson : boole;
    double source = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        source += w[i] * energy_rate(window[i]);
    }
    const double change = energy(window.back()) - energy(window.front());
    return (change - h * source) / span;
}

SpectralField Diagnostics::g_equation_defect(const SolverState& state,
                                             const SpectralField& dG_dt) const {
    const Grid2D& grid = system_.grid();
    const PhysicsToggles& phys = system_.physics();
    const bool dealiased = system_.dealiased();
    const SpectralVectorField u_hat = system_.velocity(state);
    const SpectralField rg_theta = rg_symbol_ * state.theta;
    const SpectralField G = state.omega - rg_theta;

    SpectralField out = dG_dt + l_symbol_ * G;
    if (phys.advection) {
        const RealVectorField u = real_inverse(grid, u_hat);
        const SpectralField u_grad_G = advect(grid, u, G, dealiased);
        const SpectralField commutator =
            rg_symbol_ * advect(grid, u, state.theta, dealiased) - advect(grid, u, rg_theta, dealiased);
        out += u_grad_G - commutator;
    }
    if (phys.source) {
        out += rg_symbol_ * u_hat.x2;
    }
    if (!phys.buoyancy) {
        out += partial1(grid, state.theta);
    }
    if (!phys.dissipation) {
        out -= l_symbol_ * state.omega;
    }
    return out;
}

double Diagnostics::g_equation_residual(const SolverState& s0, const SolverState& s1,
                                        const SolverState& s2, Stencil stencil) const {
    const double h0 = s1.t - s0.t;
    const double h1 = s2.t - s1.t;
    if (!(h0 > 0.0) || std::abs(h0 - h1) > 1e-9 * (h0 + h1)) {
        throw Error("g_equation_residual: states must be uniformly spaced in time");
    }
    const Grid2D& grid = system_.grid();
    const SymbolG& g = system_.symbol();
    const SpectralField G0 = combined_G(grid, s0, g);
    const SpectralField G1 = combined_G(grid, s1, g);
    const SpectralField G2 = combined_G(grid, s2, g);
    const double two_h = 2.0 * h0;
    switch (stencil) {
        case Stencil::forward:
            return std::sqrt(l2_norm_squared(
                grid, g_equation_defect(s0, (-3.0 * G0 + 4.0 * G1 - G2) / two_h)));
        case Stencil::backward:
            return std::sqrt(l2_norm_squared(
                grid, g_equation_defect(s2, (3.0 * G2 - 4.0 * G1 + G0) / two_h)));
        case Stencil::centered:
        default:
            return std::sqrt(l2_norm_squared(grid, g_equation_defect(s1, (G2 - G0) / two_h)));
    }
}

void PropositionMonitor::add(const DiagnosticRecord& record) {
    auto& rep = report_;
    auto finite_or_missing = [](double v) { return std::isfinite(v) || std::isnan(v); };
    const auto values = record.values();
    for (std::size_t i = 0; i < values.size(); ++i) {
        const bool residual = i == 15 || i == 16;
        if (residual ? !finite_or_missing(values[i]) : !std::isfinite(values[i])) {
            if (rep.all_finite) {
                rep.violations.push_back({"non-finite " + std::string(DiagnosticRecord::columns()[i]),
                                          record.t, -inf});
            }
            rep.all_finite = false;
        }
    }

    const double energy = record.u_l2 * record.u_l2 + record.theta_l2 * record.theta_l2;
    if (!history_.empty()) {
        const DiagnosticRecord& prev = history_.back();
        const double dt = record.t - prev.t;
        dissipation_integral_ += 0.5 * dt *
                                 (prev.lhalf_u_l2 * prev.lhalf_u_l2 +
                                  record.lhalf_u_l2 * record.lhalf_u_l2);
        u_linf_integral_ += 0.5 * dt * (prev.u_linf + record.u_linf);
        rep.omega_besov_sq_integral +=
            0.5 * dt *
            (prev.omega_b0_ginv_3inf * prev.omega_b0_ginv_3inf +
             record.omega_b0_ginv_3inf * record.omega_b0_ginv_3inf);
        rep.u_regularity_sq_integral +=
            0.5 * dt *
            (prev.u_b_regularity * prev.u_b_regularity + record.u_b_regularity * record.u_b_regularity);
    }
    const double ladder = energy + 2.0 * dissipation_integral_;

    if (history_.empty()) {
        rep.energy_worst_margin = inf;
        rep.theta_linf_worst_margin = inf;
    } else {
        const DiagnosticRecord& first = history_.front();
        const double e0 = first.u_l2 * first.u_l2 + first.theta_l2 * first.theta_l2;
        if (history_.size() == 1) {
            const double dt = record.t - first.t;
            rep.c_fit = e0 > 0.0 && dt > 0.0 ? std::max(0.0, std::log(ladder / e0) / dt) : 0.0;
            rep.c_frozen = std::max(rep.c_fit, rep.c_structural);
        }
        const double bound = e0 * std::exp(rep.c_frozen * (record.t - first.t));
        const double margin = (bound - ladder) / std::max(bound, 1e-300);
        rep.energy_worst_margin = std::min(rep.energy_worst_margin, margin);
        if (margin < -1e-12) {
            rep.violations.push_back({"energy growth bound", record.t, margin});
        }

        const double theta_bound = first.theta_linf + u_linf_integral_;
        const double theta_margin = theta_bound - record.theta_linf;
        rep.theta_linf_worst_margin = std::min(rep.theta_linf_worst_margin, theta_margin);
        if (theta_margin < -slack_ * std::max(theta_bound, 1e-300)) {
            rep.violations.push_back({"theta L^inf transport bound", record.t, theta_margin});
        }
    }
    rep.final_u_hs = record.u_hs;
    rep.final_theta_hs = record.theta_hs;
    history_.push_back(record);
}

MonitorReport monitor_propositions(const std::vector<DiagnosticRecord>& records, double slack) {
    PropositionMonitor monitor(slack);
    for (const auto& r : records) {
        monitor.add(r);
    }
    return monitor.report();
}

TransportMonitor::TransportMonitor(const Diagnostics& diagnostics, double p)
    : diagnostics_(diagnostics) {
    spec_ = weighted(0.0, p, 1.0, diagnostics.system().symbol(), 1.0);
    report_.p = p;
}

void TransportMonitor::add(const SolverState& state) {
    const RbSystem& system = diagnostics_.system();
    const Grid2D& grid = system.grid();
    const DyadicPartition& partition = diagnostics_.partition();
    const double lhs = besov_norm(partition, state.theta, spec_);
    const SpectralVectorField u = system.velocity(state);
    const double source =
        system.physics().source ? besov_norm(partition, u.x2, spec_) : 0.0;
    const double grad = gradient_magnitude(grid, u).maxCoeff();
    if (!last_t_) {
        theta0_ = lhs;
    } else {
        const double dt = state.t - *last_t_;
        source_integral_ += 0.5 * dt * (*last_source_ + source);
        grad_integral_ += 0.5 * dt * (*last_grad_ + grad);
    }
    last_t_ = state.t;
    last_source_ = source;
    last_grad_ = grad;
    const double rhs = (theta0_ + source_integral_) * (1.0 + grad_integral_);
    report_.t.push_back(state.t);
    report_.lhs.push_back(lhs);
    report_.rhs.push_back(rhs);
    if (!std::isfinite(lhs) || !std::isfinite(rhs)) {
        report_.finite = false;
    }
    const double ratio = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? inf : 0.0);
    report_.worst_ratio = std::max(report_.worst_ratio, ratio);
}

TransportReport transport_besov_check(const Diagnostics& diagnostics,
                                      const std::vector<SolverState>& trajectory, double p) {
    TransportMonitor monitor(diagnostics, p);
    for (const auto& s : trajectory) {
        monitor.add(s);
    }
    return monitor.report();
}

}  // namespace rbsim

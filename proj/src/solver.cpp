#include "rbsim/solver.hpp"

#include <cmath>
#include <sstream>

#include "rbsim/checkpoint.hpp"
#include "rbsim/spectral.hpp"

namespace rbsim {

namespace {

std::string time_stamp(double t) {
    std::ostringstream out;
    out.precision(17);
    out << t;
    return out.str();
}

}  // namespace

void SolverConfig::validate() const {
    if (n < 8 || (n & (n - 1)) != 0) {
        throw ConfigError("n must be a power of two >= 8");
    }
    if (!(box_length > 0.0) || !std::isfinite(box_length)) {
        throw ConfigError("box_length must be positive");
    }
    if (dt && !(*dt > 0.0 && std::isfinite(*dt))) {
        throw ConfigError("dt must be positive or \"auto\"");
    }
    if (!(cfl > 0.0 && cfl <= 1.0)) {
        throw ConfigError("cfl must lie in (0, 1]");
    }
    if (!(dt_max > 0.0)) {
        throw ConfigError("dt_max must be positive");
    }
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
        throw ConfigError("t_end must be finite and >= 0");
    }
    if (record_every < 1) {
        throw ConfigError("record_every must be >= 1");
    }
    if (checkpoint_every < 0) {
        throw ConfigError("checkpoint_every must be >= 0");
    }
    if (!std::isfinite(ic.amplitude) || !std::isfinite(ic.theta_amplitude)) {
        throw ConfigError("initial-condition amplitudes must be finite");
    }
    if (ic.kind == ICSpec::Kind::random_band &&
        !(ic.k_lo >= 0.0 && ic.k_hi >= ic.k_lo && ic.k_hi < n / 2.0)) {
        throw ConfigError("random_band IC band must satisfy 0 <= k_lo <= k_hi < n/2");
    }
    if (!(hs >= 0.0 && hs <= 8.0)) {
        throw ConfigError("hs must lie in [0, 8]");
    }
    if (!(transport_p >= 1.0)) {
        throw ConfigError("transport_p must be >= 1 or inf");
    }
    if (ic.kind == ICSpec::Kind::file && ic.file.empty()) {
        throw ConfigError("file IC requires ic.file");
    }
}

RbSystem::RbSystem(Grid2D grid, SymbolG g, PhysicsToggles physics, bool dealias)
    : grid_(std::move(grid)), g_(std::move(g)), physics_(physics), dealias_(dealias) {
    if (physics_.dissipation) {
        rate_ = g_.rate(grid_.kmag());
        rate_(0, 0) = 0.0;
    } else {
        rate_ = RealField::Zero(grid_.n(), grid_.n());
    }
}

SpectralField RbSystem::finish(SpectralField f) const {
    return dealias_ ? dealias(grid_, f) : f;
}

SpectralVectorField RbSystem::velocity(const SolverState& state) const {
    return biot_savart(grid_, state.omega);
}

SolverState RbSystem::project(SolverState state) const {
    state.omega(0, 0) = 0.0;
    state.omega = finish(std::move(state.omega));
    state.theta = finish(std::move(state.theta));
    return state;
}

Tendency RbSystem::nonlinear_rhs(const SolverState& state) const {
    const int n = grid_.n();
    if (!state.omega.allFinite() || !state.theta.allFinite()) {
        throw BlowUpError("non-finite state at t=" + time_stamp(state.t), state);
    }
    Tendency out{SpectralField::Zero(n, n), SpectralField::Zero(n, n)};
    const SpectralVectorField u_hat = velocity(state);
    if (physics_.advection) {
        const RealVectorField u = real_inverse(grid_, u_hat);
        try {
            out.omega -= advect(grid_, u, state.omega, dealias_);
            out.theta -= advect(grid_, u, state.theta, dealias_);
        } catch (const Error&) {
            // the only failure mode with finite input is product overflow
            throw BlowUpError("non-finite product at t=" + time_stamp(state.t), state);
        }
    }
    if (physics_.buoyancy) {
        out.omega += partial1(grid_, state.theta);
    }
    if (physics_.source) {
        out.theta += u_hat.x2;
    }
    if (!out.omega.allFinite() || !out.theta.allFinite()) {
        throw BlowUpError("non-finite nonlinear term at t=" + time_stamp(state.t), state);
    }
    return out;
}

Tendency RbSystem::full_rhs(const SolverState& state) const {
    Tendency out = nonlinear_rhs(state);
    out.omega -= rate_ * state.omega;
    return out;
}

SolverState RbSystem::step(const SolverState& state, double dt) const {
    if (!(dt > 0.0)) {
        throw Error("step: dt must be positive");
    }
    const RealField e_full = (-dt * rate_).exp();
    const RealField e_half = (-0.5 * dt * rate_).exp();
    const double h = 0.5 * dt;

    Tendency k1, k2, k3, k4;
    try {
        k1 = nonlinear_rhs(state);
        const SolverState s2{e_half * (state.omega + h * k1.omega), state.theta + h * k1.theta,
                             state.t + h};
        k2 = nonlinear_rhs(s2);
        const SolverState s3{e_half * state.omega + h * k2.omega, state.theta + h * k2.theta,
                             state.t + h};
        k3 = nonlinear_rhs(s3);
        const SolverState s4{e_full * state.omega + dt * e_half * k3.omega,
                             state.theta + dt * k3.theta, state.t + dt};
        k4 = nonlinear_rhs(s4);
    } catch (const BlowUpError& e) {
        throw BlowUpError(e.what(), state);
    }

    SolverState next;
    next.omega = e_full * state.omega +
                 dt / 6.0 * (e_full * k1.omega + 2.0 * e_half * (k2.omega + k3.omega) + k4.omega);
    next.theta = state.theta + dt / 6.0 * (k1.theta + 2.0 * (k2.theta + k3.theta) + k4.theta);
    next.t = state.t + dt;
    next.omega(0, 0) = 0.0;
    if (!next.omega.allFinite() || !next.theta.allFinite()) {
        throw BlowUpError("non-finite state after step to t=" + time_stamp(next.t), state);
    }
    return next;
}

double RbSystem::cfl_dt(const SolverState& state, double c_cfl, double dt_max) const {
    const RealVectorField u = real_inverse(grid_, velocity(state));
    const double umax = std::max(lp_norm(grid_, u, std::numeric_limits<double>::infinity()), 1e-8);
    return std::min(c_cfl * grid_.dx() / umax, dt_max);
}

SpectralField RbSystem::recover_pressure(const SolverState& state) const {
    const int n = grid_.n();
    SpectralField rhs = SpectralField::Zero(n, n);
    if (physics_.advection) {
        const SpectralVectorField u_hat = velocity(state);
        const RealVectorField u = real_inverse(grid_, u_hat);
        const SpectralVectorField adv{advect(grid_, u, u_hat.x1, dealias_),
                                      advect(grid_, u, u_hat.x2, dealias_)};
        rhs += divergence(grid_, adv);
    }
    if (physics_.buoyancy) {
        rhs -= partial2(grid_, state.theta);
    }
    RealField inv_k2 = grid_.kmag().square();
    inv_k2(0, 0) = 1.0;
    inv_k2 = inv_k2.inverse();
    inv_k2(0, 0) = 0.0;
    return rhs * inv_k2;
}

SolverState make_initial_state(const RbSystem& system, const ICSpec& ic, std::uint64_t seed) {
    const Grid2D& grid = system.grid();
    SolverState state;
    switch (ic.kind) {
        case ICSpec::Kind::taylor_green: {
            // sin(x1) sin(x2) = (cos(x1 - x2) - cos(x1 + x2)) / 2
            state.omega = cosine_mode(grid, 1, -1, 0.5 * ic.amplitude) -
                          cosine_mode(grid, 1, 1, 0.5 * ic.amplitude);
            state.theta = cosine_mode(grid, 1, 0, ic.theta_amplitude);
            break;
        }
        case ICSpec::Kind::random_band: {
            state.omega = random_band_field(grid, std::max(ic.k_lo, 1.0), ic.k_hi, ic.amplitude,
                                            seed);
            state.theta = random_band_field(grid, ic.k_lo, ic.k_hi, ic.theta_amplitude,
                                            seed ^ 0x9e3779b97f4a7c15ULL);
            break;
        }
        case ICSpec::Kind::file: {
            Checkpoint ck;
            try {
                ck = read_checkpoint(ic.file);
            } catch (const ConfigError&) {
                throw;
            } catch (const Error& e) {
                throw ConfigError(std::string("initial condition: ") + e.what());
            }
            if (ck.n != grid.n() || ck.box_length != grid.box_length()) {
                throw ConfigError("checkpoint " + ic.file + " does not match the configured grid");
            }
            state = std::move(ck.state);
            break;
        }
    }
    return system.project(std::move(state));
}

StepPlan plan_steps(const RbSystem& system, const SolverConfig& config,
                    const SolverState& initial) {
    if (config.t_end == 0.0) {
        return {config.dt.value_or(0.0), 0};
    }
    const double requested =
        config.dt ? *config.dt : system.cfl_dt(initial, config.cfl, config.dt_max);
    const long steps = std::max(1L, static_cast<long>(std::ceil(config.t_end / requested - 1e-9)));
    return {config.t_end / static_cast<double>(steps), steps};
}

SolverState integrate(const RbSystem& system, SolverState initial, const StepPlan& plan,
                      const StateObserver& observer) {
    SolverState state = std::move(initial);
    const double t0 = state.t;
    if (observer) {
        observer(state, 0);
    }
    for (long i = 1; i <= plan.steps; ++i) {
        state = system.step(state, plan.dt);
        // accumulate from t0 to avoid drift in record times
        state.t = t0 + static_cast<double>(i) * plan.dt;
        if (observer) {
            observer(state, i);
        }
    }
    return state;
}

RbSystem make_system(const SolverConfig& config) {
    config.validate();
    return RbSystem(Grid2D(config.n, config.box_length), SymbolG::parse(config.symbol),
                    config.physics, config.dealias);
}

}  // namespace rbsim

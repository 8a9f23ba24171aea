#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "rbsim/grid.hpp"
#include "rbsim/symbol.hpp"
#include "rbsim/types.hpp"

namespace rbsim {

/// Switches for the individual terms of the vorticity-temperature system.
/// All on reproduces the full Rayleigh-Benard dynamics.
struct PhysicsToggles {
    bool advection = true;    ///< u.grad omega and u.grad theta
    bool buoyancy = true;     ///< d1 theta in the vorticity equation
    bool source = true;       ///< u2 in the temperature equation
    bool dissipation = true;  ///< L omega
};

struct ICSpec {
    enum class Kind { taylor_green, random_band, file };
    Kind kind = Kind::taylor_green;
    double amplitude = 1.0;        ///< vorticity amplitude (A) or RMS
    double theta_amplitude = 1.0;  ///< temperature amplitude (B) or RMS
    double k_lo = 1.0;
    double k_hi = 8.0;
    std::string file;
};

struct SolverConfig {
    int n = 128;
    double box_length = 2.0 * std::numbers::pi;
    std::string symbol = "log:mu1=1";
    std::optional<double> dt;  ///< empty selects the CFL-based step
    double cfl = 0.5;
    double dt_max = 0.1;
    double t_end = 1.0;
    ICSpec ic;
    bool dealias = true;
    int record_every = 1;
    std::uint64_t seed = 0;
    PhysicsToggles physics;
    /// Sobolev index of the H^s columns in the diagnostic series.
    double hs = 2.0;
    /// Integrability index of the transport Besov check.
    double transport_p = std::numeric_limits<double>::infinity();
    /// Steps between checkpoint dumps; 0 disables them.
    int checkpoint_every = 0;

    void validate() const;
};

struct SolverState {
    SpectralField omega;
    SpectralField theta;
    double t = 0.0;
};

struct Tendency {
    SpectralField omega;
    SpectralField theta;
};

/// Raised when a non-finite coefficient appears; carries the last finite state.
class BlowUpError : public Error {
  public:
    BlowUpError(const std::string& what, SolverState last_good)
        : Error(what), last_good_(std::move(last_good)) {}
    const SolverState& last_good() const { return last_good_; }

  private:
    SolverState last_good_;
};

/// The Galerkin-truncated vorticity-temperature system on a periodic grid.
///
/// omega_t + u.grad omega + L omega = d1 theta
/// theta_t + u.grad theta = u2,      u = grad^perp Delta^-1 omega
///
/// L is integrated exactly by an integrating factor; the rest by classical
/// RK4 (Lawson's scheme). Products are formed on the lattice and dealiased
/// by the 2/3 rule when enabled.
class RbSystem {
  public:
    RbSystem(Grid2D grid, SymbolG g, PhysicsToggles physics = {}, bool dealias = true);

    const Grid2D& grid() const { return grid_; }
    const SymbolG& symbol() const { return g_; }
    const PhysicsToggles& physics() const { return physics_; }
    bool dealiased() const { return dealias_; }
    /// |k| / g(|k|) on the lattice (zero when dissipation is off).
    const RealField& rate() const { return rate_; }

    /// Nonlinear and coupling terms; L omega is excluded.
    Tendency nonlinear_rhs(const SolverState& state) const;
    /// Full right-hand side including -L omega.
    Tendency full_rhs(const SolverState& state) const;

    SolverState step(const SolverState& state, double dt) const;

    /// c_cfl dx / max(||u||_inf, 1e-8), capped at dt_max.
    double cfl_dt(const SolverState& state, double c_cfl, double dt_max = 0.1) const;

    /// p_hat = |k|^-2 [ i k . F(u.grad u) - i k2 theta_hat ], p_hat(0) = 0.
    SpectralField recover_pressure(const SolverState& state) const;

    SpectralVectorField velocity(const SolverState& state) const;

    /// Pins the vorticity mean to zero and dealiases both fields.
    SolverState project(SolverState state) const;

  private:
    SpectralField finish(SpectralField f) const;

    Grid2D grid_;
    SymbolG g_;
    PhysicsToggles physics_;
    bool dealias_;
    RealField rate_;
};

/// Initial state per spec; random fields are seeded by `seed`.
SolverState make_initial_state(const RbSystem& system, const ICSpec& ic, std::uint64_t seed);

/// Uniform step actually used for a run: the requested or CFL step, shrunk
/// so that an integer number of steps lands exactly on t_end.
struct StepPlan {
    double dt = 0.0;
    long steps = 0;
};

StepPlan plan_steps(const RbSystem& system, const SolverConfig& config,
                    const SolverState& initial);

/// Observer invoked with (state, step index) for step 0 and after every step.
using StateObserver = std::function<void(const SolverState&, long)>;

/// Integrates from `initial` with the planned uniform step. Throws
/// BlowUpError after notifying the observer of every healthy state.
SolverState integrate(const RbSystem& system, SolverState initial, const StepPlan& plan,
                      const StateObserver& observer = {});

RbSystem make_system(const SolverConfig& config);

}  // namespace rbsim

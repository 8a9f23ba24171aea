#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rbsim/littlewood_paley.hpp"
#include "rbsim/solver.hpp"

namespace rbsim {

/// G = omega - R_g theta.
SpectralField combined_G(const Grid2D& grid, const SolverState& state, const SymbolG& g);

/// One time sample of the tracked norms and balance residuals.
struct DiagnosticRecord {
    double t = 0.0;
    double u_l2 = 0.0;
    double theta_l2 = 0.0;
    double theta_l3 = 0.0;
    double theta_linf = 0.0;
    double lhalf_u_l2 = 0.0;  ///< ||L^{1/2} u||_2
    double G_l2 = 0.0;
    double G_l3 = 0.0;
    double grad_u_linf = 0.0;
    double grad_theta_linf = 0.0;
    double omega_b0_ginv_3inf = 0.0;  ///< ||omega||_{B^{0,g^-1}_{3,inf}}
    double G_b23_31 = 0.0;            ///< ||G||_{B^{2/3}_{3,1}}
    double u_hs = 0.0;
    double theta_hs = 0.0;
    double theta_b0g_inf1 = 0.0;  ///< ||theta||_{B^{0,g}_{inf,1}}
    double energy_balance_residual = 0.0;
    double g_equation_residual = 0.0;
    double u_linf = 0.0;
    double u_b_regularity = 0.0;  ///< ||u||_{B^{s+1/2, g^-1/2}_{2,2}}

    static constexpr std::size_t column_count = 19;
    static const std::array<const char*, column_count>& columns();
    std::array<double, column_count> values() const;
    bool all_finite() const;
};

void write_csv_header(std::ostream& out);
/// One row, IEEE doubles with 17 significant digits.
void write_csv_row(std::ostream& out, const DiagnosticRecord& record);

/// Computes diagnostics for states of one RbSystem. Immutable after
/// construction and safe to share between threads.
class Diagnostics {
  public:
    explicit Diagnostics(const RbSystem& system, double hs = 2.0);

    const RbSystem& system() const { return system_; }
    const DyadicPartition& partition() const { return partition_; }

    /// Norm columns; the two residual columns are left NaN.
    DiagnosticRecord norms(const SolverState& state) const;

    double energy(const SolverState& state) const;
    /// Right-hand side of the energy identity: buoyancy and source work minus
    /// ||L^{1/2}u||_2^2 (each term follows the physics toggles).
    double energy_rate(const SolverState& state) const;

    /// Residual of E(t_last) - E(t_first) = int (work - dissipation) over a
    /// window of 3 (Simpson) or 5 (Boole) uniformly spaced states, divided by
    /// the window length. The 5-state form keeps the quadrature error far
    /// below the time-stepping error at CFL step sizes.
    double energy_balance_residual(std::span<const SolverState> window) const;

    enum class Stencil { centered, forward, backward };
    /// L^2 norm of dG/dt + u.grad G + L G - [R_g, u.grad]theta + R_g u2 at
    /// the middle (centered), first (forward) or last (backward) state, with
    /// dG/dt from the second-order three-point difference.
    double g_equation_residual(const SolverState& s0, const SolverState& s1,
                               const SolverState& s2, Stencil stencil = Stencil::centered) const;

    /// The same residual with a G time derivative supplied by the caller.
    SpectralField g_equation_defect(const SolverState& state, const SpectralField& dG_dt) const;

  private:
    RbSystem system_;
    DyadicPartition partition_;
    double hs_;
    RealField l_symbol_;      // |k|/g
    SpectralField rg_symbol_;  // i k1 g/|k|
    BesovNormSpec omega_spec_, G_spec_, theta_spec_, u_reg_spec_;
};

/// Accumulates the trajectory checks of the a-priori estimates.
struct MonitorReport {
    struct Violation {
        std::string check;
        double t = 0.0;
        double margin = 0.0;  ///< bound minus observed; negative means violated
    };
    double c_fit = 0.0;         ///< growth rate fitted on the first interval
    double c_structural = 2.0;  ///< 4 int u2 theta <= 2 (|u|^2 + |theta|^2)
    double c_frozen = 0.0;
    double energy_worst_margin = 0.0;
    double theta_linf_worst_margin = 0.0;
    double omega_besov_sq_integral = 0.0;
    double u_regularity_sq_integral = 0.0;  ///< int ||u||^2_{B^{s+1/2,g^-1/2}_{2,2}}
    double final_u_hs = 0.0;
    double final_theta_hs = 0.0;
    bool all_finite = true;
    std::vector<Violation> violations;
    bool ok() const { return violations.empty() && all_finite; }
};

class PropositionMonitor {
  public:
    /// `slack` is the relative tolerance of the L^inf transport bound.
    explicit PropositionMonitor(double slack = 1e-6) : slack_(slack) {}
    void add(const DiagnosticRecord& record);
    const MonitorReport& report() const { return report_; }

  private:
    double slack_;
    MonitorReport report_;
    std::vector<DiagnosticRecord> history_;
    double dissipation_integral_ = 0.0;
    double u_linf_integral_ = 0.0;
};

MonitorReport monitor_propositions(const std::vector<DiagnosticRecord>& records,
                                   double slack = 1e-6);

/// Weighted-Besov transport bound along a run:
///   ||theta(t)|| <= (||theta0|| + int ||f||) (1 + int ||grad u||_inf)
/// with the norm B^{0,g}_{p,1} and f the temperature source u2.
struct TransportReport {
    double p = 0.0;
    double worst_ratio = 0.0;  ///< max over t of lhs / rhs
    std::vector<double> t, lhs, rhs;
    bool finite = true;
};

class TransportMonitor {
  public:
    TransportMonitor(const Diagnostics& diagnostics, double p);
    void add(const SolverState& state);
    const TransportReport& report() const { return report_; }

  private:
    const Diagnostics& diagnostics_;
    BesovNormSpec spec_;
    TransportReport report_;
    double theta0_ = 0.0;
    double source_integral_ = 0.0;
    double grad_integral_ = 0.0;
    std::optional<double> last_t_, last_source_, last_grad_;
};

TransportReport transport_besov_check(const Diagnostics& diagnostics,
                                      const std::vector<SolverState>& trajectory, double p);

}  // namespace rbsim

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rbsim/diagnostics.hpp"
#include "rbsim/solver.hpp"

namespace rbsim {

struct RunObserver {
    /// Called once per record, in time order, as soon as its residual
    /// window is complete.
    std::function<void(const DiagnosticRecord&)> on_record;
    /// Called for every healthy state, including the initial one.
    std::function<void(const SolverState&, long step)> on_state;
};

struct RunResult {
    StepPlan plan;
    std::vector<DiagnosticRecord> records;
    MonitorReport monitor;
    TransportReport transport;
    SolverState final_state;
    bool blew_up = false;
    std::string message;
};

/// Integrates `config` from its initial condition to t_end. Records are taken
/// every record_every steps and at t_end. Residual columns use windows
/// centred on the record where possible and one-sided near the ends; they are
/// NaN when the run has fewer than three states. A blow-up is reported in the
/// result after all records up to the last healthy state have been emitted.
RunResult run_simulation(const SolverConfig& config, const RunObserver& observer = {});

struct TwinRunReport {
    double delta0 = 0.0;
    double c_fit = 0.0;
    double c_structural = 2.0;
    double c_frozen = 0.0;
    double calibration_time = 0.0;
    /// max over t of D(t) / envelope(t) with D = |u1-u2|^2 + |theta1-theta2|^2
    double worst_ratio = 0.0;
    double final_difference = 0.0;  ///< sqrt(D) at t_end
    bool identical = false;  ///< every coefficient equal at every step
    bool blew_up = false;
    std::vector<double> t, difference, envelope;
    bool ok() const;
};

/// Runs `config` twice, the second time with theta perturbed in the (2,1)
/// cosine mode so that the initial difference has L^2 norm delta0. Checks
///   D(t) <= delta0^2 exp(C int (1 + |grad u2|_inf + |grad theta2|_inf))
/// with C = max(C_fit, 2), C_fit fitted on [0, calibration_fraction t_end].
TwinRunReport twin_run_stability(const SolverConfig& config, double delta0,
                                 double calibration_fraction = 0.1);

}  // namespace rbsim

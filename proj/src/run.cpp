#include "rbsim/run.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "rbsim/spectral.hpp"

namespace rbsim {

namespace {

struct Pending {
    long step;
    DiagnosticRecord record;
};

// Last five healthy states, oldest first.
class StateWindow {
  public:
    void push(long step, const SolverState& state) {
        states_.push_back(state);
        last_ = step;
        if (states_.size() > 5) {
            states_.pop_front();
        }
    }
    long last() const { return last_; }
    long count() const { return last_ + 1; }
    const SolverState& at(long step) const {
        return states_.at(static_cast<std::size_t>(step - (last_ + 1 - static_cast<long>(states_.size()))));
    }
    std::vector<SolverState> range(long first, int size) const {
        std::vector<SolverState> out;
        for (int i = 0; i < size; ++i) {
            out.push_back(at(first + i));
        }
        return out;
    }

  private:
    std::deque<SolverState> states_;
    long last_ = -1;
};

void fill_residuals(const Diagnostics& diagnostics, const StateWindow& window, Pending& p) {
    const long last = window.last();
    const long j = p.step;
    if (window.count() >= 5) {
        const long first = std::clamp(j - 2, 0L, last - 4);
        p.record.energy_balance_residual =
            diagnostics.energy_balance_residual(window.range(first, 5));
    } else if (window.count() >= 3) {
        const long first = std::clamp(j - 1, 0L, last - 2);
        p.record.energy_balance_residual =
            diagnostics.energy_balance_residual(window.range(first, 3));
    }
    if (window.count() >= 3) {
        using S = Diagnostics::Stencil;
        if (j == 0) {
            p.record.g_equation_residual =
                diagnostics.g_equation_residual(window.at(0), window.at(1), window.at(2), S::forward);
        } else if (j == last) {
            p.record.g_equation_residual = diagnostics.g_equation_residual(
                window.at(j - 2), window.at(j - 1), window.at(j), S::backward);
        } else {
            p.record.g_equation_residual = diagnostics.g_equation_residual(
                window.at(j - 1), window.at(j), window.at(j + 1), S::centered);
        }
    }
}

double difference_sq(const Grid2D& grid, const RbSystem& system, const SolverState& a,
                     const SolverState& b) {
    SolverState d{a.omega - b.omega, a.theta - b.theta, a.t};
    const SpectralVectorField u = system.velocity(d);
    return l2_norm_squared(grid, u.x1) + l2_norm_squared(grid, u.x2) +
           l2_norm_squared(grid, d.theta);
}

}  // namespace

RunResult run_simulation(const SolverConfig& config, const RunObserver& observer) {
    const RbSystem system = make_system(config);
    const Diagnostics diagnostics(system, config.hs);
    const SolverState initial = make_initial_state(system, config.ic, config.seed);

    RunResult result;
    result.plan = plan_steps(system, config, initial);
    PropositionMonitor monitor;
    TransportMonitor transport(diagnostics, config.transport_p);
    StateWindow window;
    std::deque<Pending> pending;

    auto emit = [&](Pending& p) {
        fill_residuals(diagnostics, window, p);
        monitor.add(p.record);
        result.records.push_back(p.record);
        if (observer.on_record) {
            observer.on_record(p.record);
        }
    };

    const long steps = result.plan.steps;
    auto on_state = [&](const SolverState& state, long step) {
        window.push(step, state);
        if (observer.on_state) {
            observer.on_state(state, step);
        }
        if (step % config.record_every == 0 || step == steps) {
            pending.push_back({step, diagnostics.norms(state)});
            transport.add(state);
        }
        while (!pending.empty() && step >= std::max(pending.front().step + 2, 4L)) {
            emit(pending.front());
            pending.pop_front();
        }
        result.final_state = state;
    };

    try {
        integrate(system, initial, result.plan, on_state);
    } catch (const BlowUpError& e) {
        result.blew_up = true;
        result.message = e.what();
    }
    while (!pending.empty()) {
        emit(pending.front());
        pending.pop_front();
    }
    result.monitor = monitor.report();
    result.transport = transport.report();
    return result;
}

bool TwinRunReport::ok() const {
    if (blew_up) {
        return false;
    }
    if (delta0 == 0.0) {
        return identical;
    }
    return worst_ratio <= 1.0 + 1e-9;
}

TwinRunReport twin_run_stability(const SolverConfig& config, double delta0,
                                 double calibration_fraction) {
    if (!(delta0 >= 0.0) || !std::isfinite(delta0)) {
        throw ConfigError("twin run perturbation must be finite and >= 0");
    }
    const RbSystem system = make_system(config);
    const Grid2D& grid = system.grid();
    SolverState a = make_initial_state(system, config.ic, config.seed);
    SolverState b = a;
    // cos mode has ||.||_2^2 = area amp^2 / 2
    b.theta += cosine_mode(grid, 2, 1, delta0 * std::sqrt(2.0 / grid.area()));
    const StepPlan plan = plan_steps(system, config, a);

    TwinRunReport rep;
    rep.delta0 = delta0;
    rep.identical = true;
    rep.calibration_time = calibration_fraction * config.t_end;
    const double d0 = delta0 * delta0;

    auto weight = [&](const SolverState& s) {
        return 1.0 + gradient_magnitude(grid, system.velocity(s)).maxCoeff() +
               gradient_magnitude(grid, s.theta).maxCoeff();
    };

    std::vector<double> t{a.t}, d{difference_sq(grid, system, a, b)}, integral{0.0};
    double w_prev = weight(b);
    try {
        for (long i = 1; i <= plan.steps; ++i) {
            a = system.step(a, plan.dt);
            b = system.step(b, plan.dt);
            a.t = b.t = static_cast<double>(i) * plan.dt;
            if (rep.identical && ((a.omega != b.omega).any() || (a.theta != b.theta).any())) {
                rep.identical = false;
            }
            const double w = weight(b);
            integral.push_back(integral.back() + 0.5 * plan.dt * (w_prev + w));
            w_prev = w;
            t.push_back(a.t);
            d.push_back(difference_sq(grid, system, a, b));
        }
    } catch (const BlowUpError&) {
        rep.blew_up = true;
        rep.identical = false;
    }

    for (std::size_t i = 1; i < t.size(); ++i) {
        if (t[i] > rep.calibration_time + 1e-12 && i > 2) {
            break;
        }
        if (d0 > 0.0 && d[i] > 0.0 && integral[i] > 0.0) {
            rep.c_fit = std::max(rep.c_fit, std::log(d[i] / d0) / integral[i]);
        }
    }
    rep.c_frozen = std::max(rep.c_fit, rep.c_structural);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double env = d0 * std::exp(rep.c_frozen * integral[i]);
        rep.t.push_back(t[i]);
        rep.difference.push_back(d[i]);
        rep.envelope.push_back(env);
        const double ratio = env > 0.0 ? d[i] / env : (d[i] > 0.0 ? INFINITY : 0.0);
        rep.worst_ratio = std::max(rep.worst_ratio, ratio);
    }
    rep.final_difference = std::sqrt(d.back());
    return rep;
}

}  // namespace rbsim

#include "rbsim/multiplier.hpp"

#include <cmath>
#include <sstream>

#include "rbsim/spectral.hpp"

namespace rbsim {

MultiplierOp::MultiplierOp(std::string name, std::function<double(double)> radial, Parity parity,
                           double zero_mode_value, bool requires_mean_free)
    : name_(std::move(name)),
      radial_(std::move(radial)),
      parity_(parity),
      zero_mode_value_(zero_mode_value),
      requires_mean_free_(requires_mean_free) {}

std::complex<double> MultiplierOp::symbol(double k1, double k2) const {
    const double k = std::hypot(k1, k2);
    if (k == 0.0) {
        return parity_ == Parity::even ? zero_mode_value_ : 0.0;
    }
    const double h = radial_(k);
    if (parity_ == Parity::even) {
        return h;
    }
    return {0.0, k1 * h};
}

SpectralField MultiplierOp::symbol_on(const Grid2D& grid) const {
    const int n = grid.n();
    SpectralField out(n, n);
    for (int b = 0; b < n; ++b) {
        for (int a = 0; a < n; ++a) {
            out(a, b) = symbol(grid.k1()(a, b), grid.k2()(a, b));
        }
    }
    if (parity_ == Parity::odd_x1) {
        out.row(n / 2).setZero();
    }
    return out;
}

SpectralField MultiplierOp::apply(const Grid2D& grid, const SpectralField& f) const {
    if (f.rows() != grid.n() || f.cols() != grid.n()) {
        throw Error(name_ + ": field shape does not match grid");
    }
    if (requires_mean_free_ && std::abs(f(0, 0)) > 1e-13) {
        std::ostringstream msg;
        msg << name_ << ": input must be mean-free, mean mode is " << std::abs(f(0, 0));
        throw Error(msg.str());
    }
    return symbol_on(grid) * f;
}

MultiplierOp op_L(const SymbolG& g) {
    return {"L", [g](double k) { return k / g(k); }, MultiplierOp::Parity::even};
}

MultiplierOp op_L_half(const SymbolG& g) {
    return {"L^1/2", [g](double k) { return std::sqrt(k / g(k)); }, MultiplierOp::Parity::even};
}

MultiplierOp op_Rg(const SymbolG& g) {
    return {"R_g", [g](double k) { return g(k) / k; }, MultiplierOp::Parity::odd_x1};
}

MultiplierOp op_lambda(double s) {
    if (!(s >= -2.0 && s <= 4.0)) {
        throw Error("Lambda^s requires s in [-2, 4], got " + std::to_string(s));
    }
    const double zero = s == 0.0 ? 1.0 : 0.0;
    return {"Lambda^" + std::to_string(s), [s](double k) { return std::pow(k, s); },
            MultiplierOp::Parity::even, zero, s < 0.0};
}

MultiplierOp linear_propagator(const SymbolG& g, double dt) {
    if (!(dt > 0.0)) {
        throw Error("linear_propagator requires dt > 0");
    }
    return {"exp(-dt L)", [g, dt](double k) { return std::exp(-dt * k / g(k)); },
            MultiplierOp::Parity::even, 1.0};
}

PositivityReport pointwise_positivity_check(const Grid2D& grid, const RealField& f,
                                            const SymbolG& g, double p) {
    if (!(p >= 2.0)) {
        throw Error("positivity check requires p >= 2");
    }
    const MultiplierOp L = op_L(g);
    const MultiplierOp L_half = op_L_half(g);
    const RealField abs_f = f.abs();
    const RealField Lf = real_inverse(grid, L(grid, forward(grid, f)));
    const RealField weight = abs_f.pow(p - 2.0) * f;  // |f|^{p-2} f

    const RealField L_abs_p = real_inverse(grid, L(grid, forward(grid, abs_f.pow(p))));
    const RealField gap = weight * Lf - L_abs_p / p;

    const double lhs_integral = integral(grid, weight * Lf);
    const SpectralField half_power = L_half(grid, forward(grid, abs_f.pow(p / 2.0)));
    const double rhs_integral = 2.0 / p * l2_norm_squared(grid, half_power);

    PositivityReport report;
    report.p = p;
    report.min_pointwise_gap = gap.minCoeff();
    report.integral_gap = lhs_integral - rhs_integral;
    const double max_rate = L.symbol_on(grid).real().maxCoeff();
    report.scale = std::pow(abs_f.maxCoeff(), p) * max_rate;
    report.tolerance = 1e-8 * report.scale;
    report.pass = report.min_pointwise_gap >= -report.tolerance &&
                  report.integral_gap >= -report.tolerance * grid.area();
    return report;
}

}  // namespace rbsim

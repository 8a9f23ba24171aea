#pragma once

#include <functional>
#include <string>

#include "rbsim/grid.hpp"
#include "rbsim/symbol.hpp"
#include "rbsim/types.hpp"

namespace rbsim {

/// Diagonal Fourier operator. Even multipliers have a real radial symbol
/// m(|k|); odd multipliers have the purely imaginary symbol i k1 h(|k|),
/// which vanishes on the k1 Nyquist line so real fields stay real.
class MultiplierOp {
  public:
    enum class Parity { even, odd_x1 };

    MultiplierOp(std::string name, std::function<double(double)> radial, Parity parity,
                 double zero_mode_value = 0.0, bool requires_mean_free = false);

    const std::string& name() const { return name_; }
    Parity parity() const { return parity_; }

    /// Symbol at a physical wavenumber (Nyquist handling is grid-level).
    std::complex<double> symbol(double k1, double k2) const;
    /// Symbol evaluated on every lattice point.
    SpectralField symbol_on(const Grid2D& grid) const;

    SpectralField apply(const Grid2D& grid, const SpectralField& f) const;
    SpectralField operator()(const Grid2D& grid, const SpectralField& f) const {
        return apply(grid, f);
    }

  private:
    std::string name_;
    std::function<double(double)> radial_;
    Parity parity_;
    double zero_mode_value_;
    bool requires_mean_free_;
};

/// L with symbol |k| / g(|k|).
MultiplierOp op_L(const SymbolG& g);
/// L^{1/2} with symbol sqrt(|k| / g(|k|)).
MultiplierOp op_L_half(const SymbolG& g);
/// R_g = L^{-1} d1 with symbol i k1 g(|k|) / |k|.
MultiplierOp op_Rg(const SymbolG& g);
/// Lambda^s with symbol |k|^s, s in [-2, 4]. For s < 0 the input must be
/// mean-free (checked to 1e-13).
MultiplierOp op_lambda(double s);
/// exp(-dt |k| / g(|k|)).
MultiplierOp linear_propagator(const SymbolG& g, double dt);

struct PositivityReport {
    double p = 2.0;
    /// min_x [ |f|^{p-2} f Lf - (1/p) L(|f|^p) ]
    double min_pointwise_gap = 0.0;
    /// int |f|^{p-2} f Lf - (2/p) ||L^{1/2}(|f|^{p/2})||_2^2
    double integral_gap = 0.0;
    /// ||f||_inf^p * max_k |k|/g(|k|); the tolerance is 1e-8 * scale.
    double scale = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Pointwise and integrated positivity of L evaluated through its Fourier
/// symbol on the lattice.
PositivityReport pointwise_positivity_check(const Grid2D& grid, const RealField& f,
                                            const SymbolG& g, double p);

}  // namespace rbsim

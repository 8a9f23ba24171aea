#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

#include "rbsim/grid.hpp"
#include "rbsim/types.hpp"

namespace rbsim {

/// Discrete Fourier coefficients c_k = n^-2 sum_x f(x) exp(-i k.x).
/// Throws Error on non-finite samples.
SpectralField forward(const Grid2D& grid, const RealField& real);

/// Real samples of sum_k c_k exp(i k.x). Throws Error naming the worst mode
/// when c(-k) != conj(c(k)) beyond 1e-12 of the largest coefficient.
RealField inverse(const Grid2D& grid, const SpectralField& spec);

struct HermitianDefect {
    double max_defect = 0.0;  ///< max |c(k) - conj(c(-k))|
    int mode1 = 0;
    int mode2 = 0;
};

HermitianDefect hermitian_defect(const Grid2D& grid, const SpectralField& spec);

/// Replaces every coefficient pair by its Hermitian average.
SpectralField symmetrize(const Grid2D& grid, const SpectralField& spec);

SpectralVectorField gradient(const Grid2D& grid, const SpectralField& spec);
SpectralField divergence(const Grid2D& grid, const SpectralVectorField& v);
/// Scalar curl d1 v2 - d2 v1.
SpectralField curl(const Grid2D& grid, const SpectralVectorField& v);
SpectralField partial1(const Grid2D& grid, const SpectralField& spec);
SpectralField partial2(const Grid2D& grid, const SpectralField& spec);

/// u = grad^perp Delta^-1 omega. Rejects a mean mode above 1e-13.
SpectralVectorField biot_savart(const Grid2D& grid, const SpectralField& omega);

/// 2/3 rule: zero every mode with max(|m1|,|m2|) > n/3.
SpectralField dealias(const Grid2D& grid, const SpectralField& spec);

RealVectorField inverse(const Grid2D& grid, const SpectralVectorField& v);

/// Inverse transform of the Hermitian part of `spec`, without the symmetry
/// check. For fields derived from real data, whose asymmetry is roundoff.
RealField real_inverse(const Grid2D& grid, const SpectralField& spec);
RealVectorField real_inverse(const Grid2D& grid, const SpectralVectorField& v);
SpectralVectorField forward(const Grid2D& grid, const RealVectorField& v);

/// Collocation L^p norm (sum |f|^p dx^2)^(1/p); p = infinity gives the
/// lattice maximum, which is a lower bound for the true supremum.
template <typename Derived>
double lp_norm(const Grid2D& grid, const Eigen::ArrayBase<Derived>& f, double p) {
    if (!(p >= 1.0)) {
        throw Error("L^p norm requires p >= 1, got " + std::to_string(p));
    }
    if (std::isinf(p)) {
        return f.abs().maxCoeff();
    }
    if (p == 2.0) {
        return std::sqrt(f.abs2().sum() * grid.cell_area());
    }
    if (p == 1.0) {
        return f.abs().sum() * grid.cell_area();
    }
    // scale out the maximum to keep high powers in range
    const double peak = f.abs().maxCoeff();
    if (peak == 0.0) {
        return 0.0;
    }
    const double sum = (f.abs() / peak).pow(p).sum();
    return peak * std::pow(sum * grid.cell_area(), 1.0 / p);
}

/// L^p norm of the pointwise Euclidean magnitude of a vector field.
double lp_norm(const Grid2D& grid, const RealVectorField& v, double p);

/// Pointwise Frobenius magnitude of the gradient matrix.
RealField gradient_magnitude(const Grid2D& grid, const SpectralField& spec);
RealField gradient_magnitude(const Grid2D& grid, const SpectralVectorField& v);

/// area * sum |c_k|^2, the squared L^2 norm by Parseval.
double l2_norm_squared(const Grid2D& grid, const SpectralField& spec);

/// Inhomogeneous H^s norm (area * sum (1+|k|^2)^s |c_k|^2)^(1/2).
double sobolev_norm(const Grid2D& grid, const SpectralField& spec, double s);
/// Homogeneous norm with weight |k|^{2s}; the mean mode is excluded.
double homogeneous_sobolev_norm(const Grid2D& grid, const SpectralField& spec, double s);

double integral(const Grid2D& grid, const RealField& f);

/// Pointwise product formed in physical space, optionally dealiased.
SpectralField product(const Grid2D& grid, const SpectralField& a, const SpectralField& b,
                      bool dealiased = true);

/// F(u . grad f) with u given on the lattice.
SpectralField advect(const Grid2D& grid, const RealVectorField& u, const SpectralField& f,
                     bool dealiased = true);

/// Real random field with flat spectrum on k_lo <= |m| <= k_hi (integer
/// wavenumbers) and RMS value `rms`. Coefficients are drawn in a canonical
/// mode order, so the same seed yields the same function on every grid that
/// resolves the band.
SpectralField random_band_field(const Grid2D& grid, double k_lo, double k_hi, double rms,
                                std::uint64_t seed);

/// Single real Fourier mode amplitude * cos(m.x) or amplitude * sin(m.x).
SpectralField cosine_mode(const Grid2D& grid, int m1, int m2, double amplitude = 1.0);
SpectralField sine_mode(const Grid2D& grid, int m1, int m2, double amplitude = 1.0);

/// Samples f(x1, x2) on the lattice.
template <typename Fn>
RealField sample(const Grid2D& grid, Fn&& fn) {
    RealField out(grid.n(), grid.n());
    for (int b = 0; b < grid.n(); ++b) {
        for (int a = 0; a < grid.n(); ++a) {
            out(a, b) = fn(grid.x(a), grid.x(b));
        }
    }
    return out;
}

}  // namespace rbsim

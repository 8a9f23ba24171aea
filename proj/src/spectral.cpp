#include "rbsim/spectral.hpp"

#include <random>
#include <sstream>

#include "fft_plans.hpp"

namespace rbsim {

namespace {

constexpr std::complex<double> I{0.0, 1.0};

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

void check_shape(const Grid2D& grid, const auto& field, const char* what) {
    if (field.rows() != grid.n() || field.cols() != grid.n()) {
        std::ostringstream msg;
        msg << what << ": field is " << field.rows() << "x" << field.cols() << ", grid is "
            << grid.n() << "x" << grid.n();
        throw Error(msg.str());
    }
}

}  // namespace

SpectralField forward(const Grid2D& grid, const RealField& real) {
    check_shape(grid, real, "forward");
    if (!real.allFinite()) {
        throw Error("forward transform: field contains non-finite samples");
    }
    SpectralField in = real.cast<std::complex<double>>();
    SpectralField out(grid.n(), grid.n());
    fftw_execute_dft(grid.plans().forward, as_fftw(in.data()), as_fftw(out.data()));
    out /= static_cast<double>(grid.n()) * grid.n();
    return out;
}

HermitianDefect hermitian_defect(const Grid2D& grid, const SpectralField& spec) {
    check_shape(grid, spec, "hermitian_defect");
    const int n = grid.n();
    HermitianDefect worst;
    for (int b = 0; b < n; ++b) {
        const int bb = (n - b) % n;
        for (int a = 0; a < n; ++a) {
            const int aa = (n - a) % n;
            const double d = std::abs(spec(a, b) - std::conj(spec(aa, bb)));
            if (d > worst.max_defect) {
                worst = {d, grid.mode(a), grid.mode(b)};
            }
        }
    }
    return worst;
}

SpectralField symmetrize(const Grid2D& grid, const SpectralField& spec) {
    check_shape(grid, spec, "symmetrize");
    const int n = grid.n();
    SpectralField out(n, n);
    for (int b = 0; b < n; ++b) {
        const int bb = (n - b) % n;
        for (int a = 0; a < n; ++a) {
            const int aa = (n - a) % n;
            out(a, b) = 0.5 * (spec(a, b) + std::conj(spec(aa, bb)));
        }
    }
    return out;
}

RealField inverse(const Grid2D& grid, const SpectralField& spec) {
    check_shape(grid, spec, "inverse");
    const double scale = spec.abs().maxCoeff();
    if (!std::isfinite(scale)) {
        throw Error("inverse transform: non-finite coefficients");
    }
    const HermitianDefect defect = hermitian_defect(grid, spec);
    if (defect.max_defect > 1e-12 * scale) {
        std::ostringstream msg;
        msg << "inverse transform: Hermitian symmetry violated at mode (" << defect.mode1 << ","
            << defect.mode2 << "), defect " << defect.max_defect << " vs coefficient scale "
            << scale;
        throw Error(msg.str());
    }
    return real_inverse(grid, spec);
}

RealVectorField inverse(const Grid2D& grid, const SpectralVectorField& v) {
    return {inverse(grid, v.x1), inverse(grid, v.x2)};
}

RealField real_inverse(const Grid2D& grid, const SpectralField& spec) {
    check_shape(grid, spec, "inverse");
    SpectralField in = spec;
    SpectralField out(grid.n(), grid.n());
    fftw_execute_dft(grid.plans().backward, as_fftw(in.data()), as_fftw(out.data()));
    return out.real();
}

RealVectorField real_inverse(const Grid2D& grid, const SpectralVectorField& v) {
    return {real_inverse(grid, v.x1), real_inverse(grid, v.x2)};
}

SpectralVectorField forward(const Grid2D& grid, const RealVectorField& v) {
    return {forward(grid, v.x1), forward(grid, v.x2)};
}

SpectralField partial1(const Grid2D& grid, const SpectralField& spec) {
    check_shape(grid, spec, "partial1");
    return grid.d1() * spec;
}

SpectralField partial2(const Grid2D& grid, const SpectralField& spec) {
    check_shape(grid, spec, "partial2");
    return grid.d2() * spec;
}

SpectralVectorField gradient(const Grid2D& grid, const SpectralField& spec) {
    return {partial1(grid, spec), partial2(grid, spec)};
}

SpectralField divergence(const Grid2D& grid, const SpectralVectorField& v) {
    return partial1(grid, v.x1) + partial2(grid, v.x2);
}

SpectralField curl(const Grid2D& grid, const SpectralVectorField& v) {
    return partial1(grid, v.x2) - partial2(grid, v.x1);
}

SpectralVectorField biot_savart(const Grid2D& grid, const SpectralField& omega) {
    check_shape(grid, omega, "biot_savart");
    if (std::abs(omega(0, 0)) > 1e-13) {
        std::ostringstream msg;
        msg << "biot_savart: vorticity has nonzero mean " << std::abs(omega(0, 0))
            << "; periodic velocity requires a mean-free vorticity";
        throw Error(msg.str());
    }
    RealField inv_k2 = grid.kmag().square();
    inv_k2(0, 0) = 1.0;
    inv_k2 = inv_k2.inverse();
    inv_k2(0, 0) = 0.0;
    const SpectralField psi = -omega * inv_k2;  // stream function, Delta psi = omega
    return {-partial2(grid, psi), partial1(grid, psi)};
}

SpectralField dealias(const Grid2D& grid, const SpectralField& spec) {
    check_shape(grid, spec, "dealias");
    return spec * grid.dealias_mask();
}

double lp_norm(const Grid2D& grid, const RealVectorField& v, double p) {
    const RealField magnitude = (v.x1.square() + v.x2.square()).sqrt();
    return lp_norm(grid, magnitude, p);
}

RealField gradient_magnitude(const Grid2D& grid, const SpectralField& spec) {
    const RealVectorField g = real_inverse(grid, gradient(grid, spec));
    return (g.x1.square() + g.x2.square()).sqrt();
}

RealField gradient_magnitude(const Grid2D& grid, const SpectralVectorField& v) {
    const RealVectorField g1 = real_inverse(grid, gradient(grid, v.x1));
    const RealVectorField g2 = real_inverse(grid, gradient(grid, v.x2));
    return (g1.x1.square() + g1.x2.square() + g2.x1.square() + g2.x2.square()).sqrt();
}

double l2_norm_squared(const Grid2D& grid, const SpectralField& spec) {
    return grid.area() * spec.abs2().sum();
}

double sobolev_norm(const Grid2D& grid, const SpectralField& spec, double s) {
    const RealField weight = (1.0 + grid.kmag().square()).pow(s);
    return std::sqrt(grid.area() * (weight * spec.abs2()).sum());
}

double homogeneous_sobolev_norm(const Grid2D& grid, const SpectralField& spec, double s) {
    RealField weight = grid.kmag().pow(2.0 * s);
    weight(0, 0) = 0.0;
    return std::sqrt(grid.area() * (weight * spec.abs2()).sum());
}

double integral(const Grid2D& grid, const RealField& f) { return f.sum() * grid.cell_area(); }

SpectralField product(const Grid2D& grid, const SpectralField& a, const SpectralField& b,
                      bool dealiased) {
    const RealField pa = real_inverse(grid, a);
    const RealField pb = real_inverse(grid, b);
    SpectralField out = forward(grid, pa * pb);
    return dealiased ? dealias(grid, out) : out;
}

SpectralField advect(const Grid2D& grid, const RealVectorField& u, const SpectralField& f,
                     bool dealiased) {
    const RealVectorField grad = real_inverse(grid, gradient(grid, f));
    SpectralField out = forward(grid, u.x1 * grad.x1 + u.x2 * grad.x2);
    return dealiased ? dealias(grid, out) : out;
}

SpectralField random_band_field(const Grid2D& grid, double k_lo, double k_hi, double rms,
                                std::uint64_t seed) {
    if (!(k_lo >= 0.0) || !(k_hi >= k_lo)) {
        throw Error("random_band_field: need 0 <= k_lo <= k_hi");
    }
    const int kmax = static_cast<int>(std::floor(k_hi));
    if (kmax >= grid.n() / 2) {
        throw Error("random_band_field: band edge " + std::to_string(k_hi) +
                    " is not resolved on an n=" + std::to_string(grid.n()) + " grid");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    SpectralField out = SpectralField::Zero(grid.n(), grid.n());
    for (int m1 = 0; m1 <= kmax; ++m1) {
        for (int m2 = -kmax; m2 <= kmax; ++m2) {
            if (m1 == 0 && m2 <= 0) {
                continue;
            }
            const double re = normal(rng);
            const double im = normal(rng);
            const double k = std::hypot(m1, m2);
            if (k < k_lo || k > k_hi) {
                continue;
            }
            const std::complex<double> c{re, im};
            out(grid.index(m1), grid.index(m2)) = c;
            out(grid.index(-m1), grid.index(-m2)) = std::conj(c);
        }
    }
    const double mean_square = out.abs2().sum();
    if (mean_square > 0.0) {
        out *= rms / std::sqrt(mean_square);
    }
    return out;
}

SpectralField cosine_mode(const Grid2D& grid, int m1, int m2, double amplitude) {
    SpectralField out = SpectralField::Zero(grid.n(), grid.n());
    if (m1 == 0 && m2 == 0) {
        out(0, 0) = amplitude;
        return out;
    }
    out(grid.index(m1), grid.index(m2)) += 0.5 * amplitude;
    out(grid.index(-m1), grid.index(-m2)) += 0.5 * amplitude;
    return out;
}

SpectralField sine_mode(const Grid2D& grid, int m1, int m2, double amplitude) {
    SpectralField out = SpectralField::Zero(grid.n(), grid.n());
    if (m1 == 0 && m2 == 0) {
        return out;
    }
    out(grid.index(m1), grid.index(m2)) += -0.5 * I * amplitude;
    out(grid.index(-m1), grid.index(-m2)) += 0.5 * I * amplitude;
    return out;
}

}  // namespace rbsim

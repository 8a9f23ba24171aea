#include "rbsim/grid.hpp"

#include <cmath>
#include <mutex>

#include "fft_plans.hpp"

namespace rbsim {

namespace detail {

namespace {
// The FFTW planner is not re-entrant; execution with the new-array interface is.
std::mutex planner_mutex;
}  // namespace

FftPlans::FftPlans(int n) : n(n) {
    std::lock_guard lock(planner_mutex);
    fftw_complex* in = fftw_alloc_complex(static_cast<size_t>(n) * n);
    fftw_complex* out = fftw_alloc_complex(static_cast<size_t>(n) * n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward = fftw_plan_dft_2d(n, n, in, out, FFTW_FORWARD, flags);
    backward = fftw_plan_dft_2d(n, n, in, out, FFTW_BACKWARD, flags);
    fftw_free(in);
    fftw_free(out);
}

FftPlans::~FftPlans() {
    std::lock_guard lock(planner_mutex);
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
}

}  // namespace detail

struct Grid2D::Tables {
    RealField k1, k2, kmag, mask;
    SpectralField d1, d2;
    double retained_kmax = 0.0;
};

Grid2D::Grid2D(int n, double box_length) : n_(n), box_length_(box_length) {
    if (n < 8 || (n & (n - 1)) != 0) {
        throw Error("grid size must be a power of two >= 8, got " + std::to_string(n));
    }
    if (!(box_length > 0.0) || !std::isfinite(box_length)) {
        throw Error("box length must be positive and finite");
    }
    auto tables = std::make_shared<Tables>();
    tables->k1.resize(n, n);
    tables->k2.resize(n, n);
    tables->mask.resize(n, n);
    const double scale = wavenumber_scale();
    const int cutoff = n / 3;
    double kmax = 0.0;
    for (int b = 0; b < n; ++b) {
        for (int a = 0; a < n; ++a) {
            const int m1 = mode(a);
            const int m2 = mode(b);
            tables->k1(a, b) = scale * m1;
            tables->k2(a, b) = scale * m2;
            const bool kept = std::abs(m1) <= cutoff && std::abs(m2) <= cutoff;
            tables->mask(a, b) = kept ? 1.0 : 0.0;
            if (kept) {
                kmax = std::max(kmax, scale * std::hypot(m1, m2));
            }
        }
    }
    tables->kmag = (tables->k1.square() + tables->k2.square()).sqrt();
    tables->d1 = tables->k1.cast<std::complex<double>>() * std::complex<double>(0.0, 1.0);
    tables->d2 = tables->k2.cast<std::complex<double>>() * std::complex<double>(0.0, 1.0);
    tables->d1.row(n / 2).setZero();
    tables->d2.col(n / 2).setZero();
    tables->retained_kmax = kmax;
    tables_ = std::move(tables);
    plans_ = std::make_shared<detail::FftPlans>(n);
}

const RealField& Grid2D::k1() const { return tables_->k1; }
const RealField& Grid2D::k2() const { return tables_->k2; }
const RealField& Grid2D::kmag() const { return tables_->kmag; }
const SpectralField& Grid2D::d1() const { return tables_->d1; }
const SpectralField& Grid2D::d2() const { return tables_->d2; }
const RealField& Grid2D::dealias_mask() const { return tables_->mask; }
double Grid2D::retained_kmax() const { return tables_->retained_kmax; }

}  // namespace rbsim

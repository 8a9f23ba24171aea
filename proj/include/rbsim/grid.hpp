#pragma once

#include <memory>
#include <numbers>

#include "rbsim/types.hpp"

namespace rbsim {

namespace detail {
struct FftPlans;
}

/// Periodic n x n lattice on [0, L)^2 with cached wavenumbers and FFT plans.
///
/// Index a along an axis maps to the integer wavenumber a for a < n/2 and
/// a - n otherwise, so the Nyquist index n/2 carries -n/2. Physical
/// wavenumbers are the integers scaled by 2*pi/L. Copies share the
/// immutable wavenumber tables and plans.
class Grid2D {
  public:
    explicit Grid2D(int n, double box_length = 2.0 * std::numbers::pi);

    int n() const { return n_; }
    double box_length() const { return box_length_; }
    double dx() const { return box_length_ / n_; }
    double cell_area() const { return dx() * dx(); }
    double area() const { return box_length_ * box_length_; }
    double wavenumber_scale() const { return 2.0 * std::numbers::pi / box_length_; }

    /// Signed integer wavenumber of an axis index.
    int mode(int index) const { return index < n_ / 2 ? index : index - n_; }
    /// Axis index of a signed integer wavenumber in [-n/2, n/2).
    int index(int mode) const { return mode >= 0 ? mode : mode + n_; }
    bool is_nyquist(int index) const { return index == n_ / 2; }

    /// Physical wavenumber components and magnitude on the lattice.
    const RealField& k1() const;
    const RealField& k2() const;
    const RealField& kmag() const;
    /// Symbols i*k1 and i*k2 of the first derivatives, zero on the Nyquist
    /// line of the differentiated axis so real fields stay real.
    const SpectralField& d1() const;
    const SpectralField& d2() const;
    /// 1 where max(|m1|,|m2|) <= n/3, 0 elsewhere.
    const RealField& dealias_mask() const;
    /// Largest retained physical wavenumber magnitude after dealiasing.
    double retained_kmax() const;

    /// Physical coordinate of a lattice index.
    double x(int index) const { return index * dx(); }

    const detail::FftPlans& plans() const { return *plans_; }

    bool same_shape(const Grid2D& other) const {
        return n_ == other.n_ && box_length_ == other.box_length_;
    }

  private:
    struct Tables;

    int n_;
    double box_length_;
    std::shared_ptr<const Tables> tables_;
    std::shared_ptr<const detail::FftPlans> plans_;
};

}  // namespace rbsim

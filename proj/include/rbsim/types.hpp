#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace rbsim {

template <typename Scalar>
using Array2 = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using ComplexArray2 = Array2<std::complex<Scalar>>;

/// Real samples on the n x n collocation lattice, indexed (i1, i2) <-> (x1, x2).
using RealField = Array2<double>;

/// Fourier coefficients indexed like the lattice; (0,0) is the mean mode.
/// Normalised so that f(x) = sum_k c_k exp(i k.x).
using SpectralField = ComplexArray2<double>;

/// Two-component field in either representation.
template <typename Field>
struct VectorField {
    Field x1;
    Field x2;
};

using RealVectorField = VectorField<RealField>;
using SpectralVectorField = VectorField<SpectralField>;

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Raised for malformed configuration files and invalid parameter ranges.
class ConfigError : public Error {
  public:
    using Error::Error;
};

}  // namespace rbsim

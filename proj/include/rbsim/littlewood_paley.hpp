#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rbsim/grid.hpp"
#include "rbsim/symbol.hpp"
#include "rbsim/types.hpp"

namespace rbsim {

/// Smooth radial cutoff: 1 on [0, 1], 0 on [4/3, inf), monotone in between,
/// built from the exp(-1/x) bump.
double lp_chi(double r);
/// phi(r) = chi(r/2) - chi(r), supported in [1, 8/3].
double lp_phi(double r);

/// Littlewood-Paley blocks evaluated on the lattice. Block -1 is chi(|k|),
/// block j >= 0 is phi(2^-j |k|). The largest block index is
/// floor(log2(n/3)), which covers the whole dealiased band.
class DyadicPartition {
  public:
    explicit DyadicPartition(const Grid2D& grid);

    const Grid2D& grid() const { return grid_; }
    int j_max() const { return j_max_; }
    /// Lattice weights of block j, j in [-1, j_max].
    const RealField& weights(int j) const;

    SpectralField delta(const SpectralField& f, int j) const;
    /// S_j f = sum_{-1 <= k <= j-1} Delta_k f, j in [0, j_max + 1].
    SpectralField low_pass(const SpectralField& f, int j) const;

    /// max |chi + sum_j phi_j - 1| over the dealiased band.
    double partition_defect() const;

  private:
    void check_block(int j) const;

    Grid2D grid_;
    int j_max_;
    std::vector<RealField> weights_;  // index j + 1
};

SpectralField delta_j(const DyadicPartition& partition, const SpectralField& f, int j);
SpectralField s_j(const DyadicPartition& partition, const SpectralField& f, int j);

/// Block weight w(2^j) = g(2^j)^power; block -1 evaluates w at 1/2.
struct BesovWeight {
    std::optional<SymbolG> g;
    double power = 0.0;

    double operator()(int j) const;
};

struct BesovNormSpec {
    double s = 0.0;
    double p = 2.0;
    double q = 2.0;
    BesovWeight weight;
    /// Homogeneous norm: the mean mode is removed first. On the torus the
    /// homogeneous blocks of a mean-free field coincide with the
    /// inhomogeneous ones, so the same sum over j >= -1 is used.
    bool homogeneous = false;

    /// Parses "B:s=0.5,p=2,q=2,w=g^-0.5" (w=none, g, g^-1, g^0.5, ... and
    /// "hom" flag). `g` supplies the symbol for weighted norms.
    static BesovNormSpec parse(const std::string& text, const std::optional<SymbolG>& g = {});
};

/// l^q over blocks of 2^{js} w(2^j) ||Delta_j f||_{L^p}.
double besov_norm(const DyadicPartition& partition, const SpectralField& f,
                  const BesovNormSpec& spec);

/// Per-block L^p norms ||Delta_j f||_p for j = -1..j_max.
std::vector<double> block_norms(const DyadicPartition& partition, const SpectralField& f,
                                double p);

struct BonyParts {
    SpectralField low_high;   ///< T_u v = sum_j S_{j-1}u Delta_j v
    SpectralField high_low;   ///< T_v u = sum_j S_{j-1}v Delta_j u
    SpectralField remainder;  ///< R(u,v) = sum_j Delta_j u (Delta_{j-1}+Delta_j+Delta_{j+1}) v
};

/// Paraproduct split of the dealiased product uv.
BonyParts bony_decompose(const DyadicPartition& partition, const SpectralField& u,
                         const SpectralField& v);

}  // namespace rbsim

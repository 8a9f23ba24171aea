#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "rbsim/symbol.hpp"

namespace rbsim {

/// Seeded ensemble of random band-limited fields. Sample i draws its fields
/// from seeds derived from (seed, i), so batches with different seeds are
/// disjoint and the same sample is reproduced at any resolution.
struct EnsembleSpec {
    int n = 128;
    std::uint64_t seed = 1;
    int size = 100;
    double k_lo = 1.0;
    double k_hi = 8.0;
    double rms = 1.0;
    int threads = 1;

    std::uint64_t sample_seed(int sample, int stream = 0) const;
};

/// Outcome of checking one inequality with constant 1 over an ensemble.
/// Each sample contributes one ratio LHS/RHS per tested block; the worst ratio
/// is the empirical constant. A violation is a ratio that is not finite, or
/// for the positivity checks a gap below the tolerance.
struct InequalityReport {
    struct Sample {
        int sample = 0;
        int block = 0;
        double lhs = 0.0;
        double rhs = 0.0;
        double ratio = 0.0;
    };
    std::string lemma;
    int n = 0;
    std::uint64_t seed = 0;
    int ensemble_size = 0;
    double worst_ratio = -std::numeric_limits<double>::infinity();
    double empirical_constant = 0.0;
    int violations = 0;
    std::map<std::string, double> params;
    std::vector<Sample> samples;

    void add(const Sample& s, bool violation);
    bool ok() const { return violations == 0 && std::isfinite(empirical_constant); }
    void write_text(std::ostream& out) const;
    void write_csv(std::ostream& out) const;
};

struct BernsteinParams {
    double alpha = 0.5;
    double p = 2.0;
    double q = 4.0;
};
/// Low-pass form: ||(-Delta)^alpha S_j f||_q against 2^{2 alpha j + 2j(1/p-1/q)} ||S_j f||_p.
InequalityReport check_bernstein_lowpass(const EnsembleSpec& e, const BernsteinParams& b);
/// Annulus upper form on blocks j >= 0.
InequalityReport check_bernstein_upper(const EnsembleSpec& e, const BernsteinParams& b);
/// Annulus lower form: 2^{2 alpha j} ||Delta_j f||_q against ||(-Delta)^alpha Delta_j f||_q.
InequalityReport check_bernstein_lower(const EnsembleSpec& e, const BernsteinParams& b);

/// Ratio is the normalized deficit -gap/scale; a violation is a gap below
/// -1e-8 scale.
InequalityReport check_positivity_pointwise(const EnsembleSpec& e, const SymbolG& g, double p);
InequalityReport check_positivity_integral(const EnsembleSpec& e, const SymbolG& g, double p);

/// 2^j g^{-1}(2^j) ||Delta_j f||_p^p against int |Delta_j f|^{p-2} Delta_j f L Delta_j f.
InequalityReport check_dissipative_bernstein(const EnsembleSpec& e, const SymbolG& g, double p);

struct ConvolutionCommutatorParams {
    double delta = 0.5;
    double p1 = 2.0, p2 = 4.0, p3 = 4.0;  // delta in (0,1)
    double p = 2.0, r1 = 1.0, r2 = std::numeric_limits<double>::infinity();  // delta = 1
    int j_lo = 0, j_hi = 3;
};
/// ||h*(fg) - f(h*g)|| with h the kernel of Delta_j, against the kernel
/// moment times the norms of f and g.
InequalityReport check_convolution_commutator(const EnsembleSpec& e,
                                              const ConvolutionCommutatorParams& c);

struct KatoPonceParams {
    double s = 1.0;
    double r = 2.0;
    double p1 = std::numeric_limits<double>::infinity(), q1 = 2.0;
    double p2 = 4.0, q2 = 4.0;
};
InequalityReport check_kato_ponce(const EnsembleSpec& e, const KatoPonceParams& k);

struct RgCommutatorParams {
    double p1 = 2.0, p2 = 4.0, p3 = 4.0;
    double q = 2.0;
    double s = 0.25;
    double delta = 0.5;
};
InequalityReport check_rg_commutator(const EnsembleSpec& e, const SymbolG& g,
                                     const RgCommutatorParams& r);

struct InterpolationParams {
    double beta = 4.0;
    double s = 0.25;
    double eps = 0.5;
};
/// First inequality of the chain (Besov middle term).
InequalityReport check_interpolation_besov(const EnsembleSpec& e, const InterpolationParams& ip);
/// Outer inequality (Sobolev right-hand side).
InequalityReport check_interpolation_sobolev(const EnsembleSpec& e, const InterpolationParams& ip);

/// Empirical constants of one check at (64, seed A), (128, seed A) and
/// (128, seed B). Stable means all finite, positive, zero violations and
/// max/min <= 2.
struct StabilityReport {
    std::string lemma;
    std::vector<InequalityReport> runs;
    double spread = std::numeric_limits<double>::infinity();
    bool stable = false;
    void write_text(std::ostream& out) const;
};

using EnsembleCheck = std::function<InequalityReport(const EnsembleSpec&)>;
StabilityReport check_stability(const EnsembleCheck& check, const EnsembleSpec& base,
                                std::uint64_t seed_a = 1, std::uint64_t seed_b = 1001);

/// Transport bound along short runs at n = 64 and 128, with and without the
/// temperature source. Ratios are reported as constants.
StabilityReport check_transport(std::uint64_t seed, double p);

}  // namespace rbsim

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "rbsim/lemmas.hpp"

using namespace rbsim;

namespace {

EnsembleSpec small(int n = 64, std::uint64_t seed = 1) {
    EnsembleSpec e;
    e.n = n;
    e.seed = seed;
    e.size = 12;
    return e;
}

}  // namespace

TEST_CASE("ensemble seeds") {
    const EnsembleSpec e = small();
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 100; ++i) {
        for (int stream = 0; stream < 3; ++stream) {
            seen.insert(e.sample_seed(i, stream));
        }
    }
    CHECK(seen.size() == 300);
    CHECK(small(64, 2).sample_seed(0) != e.sample_seed(0));
    CHECK(small(128, 1).sample_seed(5) == e.sample_seed(5));
}

TEST_CASE("reports are deterministic and thread-count independent") {
    EnsembleSpec e = small();
    const InequalityReport a = check_bernstein_lowpass(e, {});
    e.threads = 3;
    const InequalityReport b = check_bernstein_lowpass(e, {});
    CHECK(a.empirical_constant == b.empirical_constant);
    CHECK(a.samples.size() == b.samples.size());
    std::ostringstream ta, tb;
    a.write_csv(ta);
    b.write_csv(tb);
    CHECK(ta.str() == tb.str());
    CHECK(a.ok());
    CHECK(a.ensemble_size == 12);
}

TEST_CASE("Bernstein forms") {
    const EnsembleSpec e = small();
    for (const auto& r : {check_bernstein_lowpass(e, {}), check_bernstein_upper(e, {}), check_bernstein_lower(e, {})}) {
        CHECK(r.ok());
        CHECK(r.empirical_constant > 0.0);
        CHECK(r.empirical_constant < 10.0);
    }
    BernsteinParams bad;
    bad.q = 1.0;  // q < p
    CHECK_THROWS_AS(check_bernstein_lowpass(e, bad), ConfigError);
}

TEST_CASE("positivity gaps") {
    const EnsembleSpec e = small();
    for (double p : {2.0, 3.0, 4.0}) {
        const InequalityReport pw = check_positivity_pointwise(e, SymbolG::log(1.0), p);
        const InequalityReport in = check_positivity_integral(e, SymbolG::log(1.0), p);
        CHECK(pw.violations == 0);
        CHECK(in.violations == 0);
    }
    CHECK_THROWS_AS(check_positivity_pointwise(e, SymbolG::log(1.0), 1.0), ConfigError);
}

TEST_CASE("dissipative Bernstein with g = 1 stays within the annulus bound") {
    const InequalityReport r = check_dissipative_bernstein(small(), SymbolG::constant(1.0), 2.0);
    CHECK(r.ok());
    CHECK(r.empirical_constant <= 4.0 / 3.0);
    CHECK(check_dissipative_bernstein(small(), SymbolG::log(1.0), 3.0).ok());
}

TEST_CASE("commutator and interpolation checks") {
    const EnsembleSpec e = small();
    CHECK(check_convolution_commutator(e, {}).ok());
    ConvolutionCommutatorParams lip;
    lip.delta = 1.0;
    CHECK(check_convolution_commutator(e, lip).ok());
    CHECK(check_kato_ponce(e, {}).ok());
    CHECK(check_rg_commutator(e, SymbolG::log(1.0), {}).ok());
    CHECK(check_interpolation_besov(e, {}).ok());
    CHECK(check_interpolation_sobolev(e, {}).ok());

    ConvolutionCommutatorParams bad;
    bad.p1 = 1.0;  // breaks 1/p1 = 1/p2 + 1/p3
    CHECK_THROWS_AS(check_convolution_commutator(e, bad), ConfigError);
    KatoPonceParams kp;
    kp.s = -1.0;
    CHECK_THROWS_AS(check_kato_ponce(e, kp), ConfigError);
    InterpolationParams ip;
    ip.eps = 0.0;
    CHECK_THROWS_AS(check_interpolation_besov(e, ip), ConfigError);
}

TEST_CASE("stability report") {
    EnsembleSpec e = small();
    const StabilityReport s = check_stability([](const EnsembleSpec& x) { return check_bernstein_upper(x, {}); }, e, 1, 1001);
    REQUIRE(s.runs.size() == 3);
    CHECK(s.runs[0].n == 64);
    CHECK(s.runs[2].seed == 1001);
    CHECK(s.stable);
    CHECK(s.spread >= 1.0);
    CHECK(s.spread <= 2.0);
}

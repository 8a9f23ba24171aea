#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rbsim/littlewood_paley.hpp"
#include "rbsim/spectral.hpp"

using namespace rbsim;

namespace {

double max_abs(const SpectralField& f) { return f.abs().maxCoeff(); }

}  // namespace

TEST_CASE("cutoff profiles") {
    CHECK(lp_chi(0.0) == 1.0);
    CHECK(lp_chi(1.0) == 1.0);
    CHECK(lp_chi(4.0 / 3.0) == 0.0);
    CHECK(lp_phi(0.5) == 0.0);
    CHECK(lp_phi(8.0 / 3.0) == 0.0);
    double prev = 1.0;
    for (double r = 1.0; r <= 4.0 / 3.0; r += 1e-3) {
        CHECK(lp_chi(r) <= prev);
        prev = lp_chi(r);
    }
    // chi + sum phi(2^-j .) at xi = (1,0)
    double sum = lp_chi(1.0);
    for (int j = 0; j < 10; ++j) {
        sum += lp_phi(std::ldexp(1.0, -j));
    }
    CHECK(std::abs(sum - 1.0) < 1e-12);
}

TEST_CASE("partition on the lattice") {
    const Grid2D grid(128);
    const DyadicPartition part(grid);
    CHECK(part.j_max() == 5);
    CHECK(part.partition_defect() < 1e-12);
    for (int j = -1; j <= part.j_max(); ++j) {
        for (int jj = j + 2; jj <= part.j_max(); ++jj) {
            CHECK((part.weights(j) * part.weights(jj)).maxCoeff() == 0.0);
        }
    }
    CHECK_THROWS_AS(part.weights(part.j_max() + 1), Error);
    CHECK(DyadicPartition(Grid2D(64)).j_max() == 4);
}

TEST_CASE("single mode (3,0) sits in block 1") {
    const Grid2D grid(128);
    const DyadicPartition part(grid);
    const SpectralField f = cosine_mode(grid, 3, 0);
    for (int j = -1; j <= part.j_max(); ++j) {
        CHECK(max_abs(part.delta(f, j) - (j == 1 ? f : SpectralField::Zero(128, 128))) == 0.0);
    }
}

TEST_CASE("constants live in block -1") {
    const Grid2D grid(64);
    const DyadicPartition part(grid);
    const SpectralField c = cosine_mode(grid, 0, 0, 2.0);
    CHECK(max_abs(part.delta(c, -1) - c) == 0.0);
    for (int j = 0; j <= part.j_max(); ++j) {
        CHECK(max_abs(part.delta(c, j)) == 0.0);
    }
}

TEST_CASE("reconstruction and low-pass telescoping") {
    const Grid2D grid(128);
    const DyadicPartition part(grid);
    const SpectralField f = dealias(grid, random_band_field(grid, 0.0, 60.0, 1.0, 17));
    SpectralField sum = SpectralField::Zero(128, 128);
    for (int j = -1; j <= part.j_max(); ++j) {
        sum += delta_j(part, f, j);
    }
    CHECK(max_abs(sum - f) < 1e-12 * max_abs(f));
    CHECK(max_abs(s_j(part, f, part.j_max() + 1) - f) < 1e-12 * max_abs(f));
    CHECK(max_abs(s_j(part, f, 0) - delta_j(part, f, -1)) == 0.0);
    for (int j = 0; j <= part.j_max(); ++j) {
        const SpectralField d = s_j(part, f, j + 1) - s_j(part, f, j) - delta_j(part, f, j);
        CHECK(max_abs(d) < 1e-12 * max_abs(f));
    }
}

TEST_CASE("Besov norms") {
    const Grid2D grid(128);
    const DyadicPartition part(grid);
    BesovNormSpec spec;
    spec.p = 2.0;
    spec.q = INFINITY;
    CHECK(besov_norm(part, SpectralField::Zero(128, 128), spec) == 0.0);

    const SpectralField f = cosine_mode(grid, 3, 0);
    const double l2 = std::sqrt(l2_norm_squared(grid, f));
    for (double s : {0.0, 0.5, 1.5}) {
        spec.s = s;
        CHECK(besov_norm(part, f, spec) == doctest::Approx(std::pow(2.0, s) * l2).epsilon(1e-13));
    }

    for (double s : {0.5, 1.0, 2.0}) {
        BesovNormSpec b;
        b.s = s;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const SpectralField h = random_band_field(grid, 1.0, 42.0, 1.0, seed);
            const double ratio = besov_norm(part, h, b) / sobolev_norm(grid, h, s);
            CHECK(ratio >= 0.25);
            CHECK(ratio <= 4.0);
        }
    }
}

TEST_CASE("Besov spec parsing") {
    const SymbolG g = SymbolG::log(1.0);
    const BesovNormSpec b = BesovNormSpec::parse("B:s=0.5,p=3,q=inf,w=g^-1,hom", g);
    CHECK(b.s == 0.5);
    CHECK(b.p == 3.0);
    CHECK(std::isinf(b.q));
    CHECK(b.weight.power == -1.0);
    CHECK(b.homogeneous);
    CHECK_THROWS_AS(BesovNormSpec::parse("B:s=0.5,p=0.5,q=2"), ConfigError);
    CHECK_THROWS_AS(BesovNormSpec::parse("B:s=0.5,p=2,q=2,w=g"), ConfigError);
}

TEST_CASE("paraproduct decomposition") {
    const Grid2D grid(64);
    const DyadicPartition part(grid);
    const SpectralField m = cosine_mode(grid, 2, 3);
    const BonyParts single = bony_decompose(part, m, m);
    const SpectralField exact = product(grid, m, m, true);
    CHECK(max_abs(single.low_high + single.high_low + single.remainder - exact) < 1e-15);

    const SpectralField u = random_band_field(grid, 0.0, 20.0, 1.0, 5);
    const SpectralField c = cosine_mode(grid, 0, 0, 1.5);
    const BonyParts withc = bony_decompose(part, u, c);
    // c only has block -1: T_u c vanishes, R keeps (Delta_-1 + Delta_0) u times c
    CHECK(max_abs(withc.low_high) < 1e-15);
    const SpectralField near = part.delta(u, -1) + part.delta(u, 0);
    CHECK(max_abs(withc.remainder - dealias(grid, 1.5 * near)) < 1e-13);
    CHECK(max_abs(withc.low_high + withc.high_low + withc.remainder - product(grid, u, c, true)) < 1e-12);

    const SpectralField v = random_band_field(grid, 0.0, 20.0, 1.0, 6);
    const BonyParts p = bony_decompose(part, u, v);
    CHECK(max_abs(p.low_high + p.high_low + p.remainder - product(grid, u, v, true)) < 1e-10);
}

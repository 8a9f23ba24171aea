#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rbsim/spectral.hpp"

using namespace rbsim;
using std::numbers::pi;

namespace {

template <typename Derived>
double max_abs(const Eigen::ArrayBase<Derived>& f) {
    return f.abs().maxCoeff();
}

}  // namespace

TEST_CASE("forward transform of simple fields") {
    const Grid2D grid(32);
    CHECK(max_abs(forward(grid, RealField::Zero(32, 32))) == 0.0);

    const SpectralField c = forward(grid, sample(grid, [](double x1, double) { return std::cos(x1); }));
    CHECK(std::abs(c(1, 0) - 0.5) < 1e-15);
    CHECK(std::abs(c(grid.index(-1), 0) - 0.5) < 1e-15);
    SpectralField rest = c;
    rest(1, 0) = rest(grid.index(-1), 0) = 0.0;
    CHECK(max_abs(rest) < 1e-15);
}

TEST_CASE("inverse transform and its symmetry contract") {
    const Grid2D grid(32);
    CHECK(max_abs(inverse(grid, SpectralField::Zero(32, 32))) == 0.0);

    SpectralField c = SpectralField::Zero(32, 32);
    c(1, 0) = c(31, 0) = 0.5;
    const RealField expect = sample(grid, [](double x1, double) { return std::cos(x1); });
    CHECK(max_abs(inverse(grid, c) - expect) < 1e-15);

    c(31, 0) = {0.5, 0.25};
    CHECK_THROWS_AS(inverse(grid, c), Error);
}

TEST_CASE("round trip on a smooth random field") {
    const Grid2D grid(64);
    const RealField f = real_inverse(grid, random_band_field(grid, 0.0, 12.0, 1.0, 7));
    CHECK(max_abs(inverse(grid, forward(grid, f)) - f) < 1e-12 * max_abs(f));
}

TEST_CASE("gradient of single modes and constants") {
    const Grid2D grid(32);
    const SpectralVectorField g = gradient(grid, forward(grid, sample(grid, [](double x1, double) { return std::sin(x1); })));
    CHECK(max_abs(inverse(grid, g.x1) - sample(grid, [](double x1, double) { return std::cos(x1); })) < 1e-14);
    CHECK(max_abs(inverse(grid, g.x2)) < 1e-14);

    const SpectralVectorField z = gradient(grid, cosine_mode(grid, 0, 0, 3.0));
    CHECK(max_abs(z.x1) == 0.0);
    CHECK(max_abs(z.x2) == 0.0);
}

TEST_CASE("spectral d1 agrees with centred differences to second order") {
    // The same function on two lattices; the finite-difference error must
    // drop by four when dx halves.
    auto fd_error = [](int n) {
        const Grid2D grid(n);
        const SpectralField f = random_band_field(grid, 1.0, 4.0, 1.0, 3);
        const RealField phys = real_inverse(grid, f);
        RealField fd(n, n);
        for (int b = 0; b < n; ++b) {
            for (int a = 0; a < n; ++a) {
                fd(a, b) = (phys((a + 1) % n, b) - phys((a + n - 1) % n, b)) / (2.0 * grid.dx());
            }
        }
        return max_abs(fd - real_inverse(grid, partial1(grid, f)));
    };
    const double ratio = fd_error(64) / fd_error(128);
    CHECK(ratio > 3.9);
    CHECK(ratio < 4.1);
}

TEST_CASE("Biot-Savart") {
    const Grid2D grid(32);
    const SpectralVectorField u = biot_savart(grid, forward(grid, sample(grid, [](double x1, double) { return std::sin(x1); })));
    CHECK(max_abs(inverse(grid, u.x1)) < 1e-15);
    CHECK(max_abs(inverse(grid, u.x2) + sample(grid, [](double x1, double) { return std::cos(x1); })) < 1e-15);

    const SpectralVectorField z = biot_savart(grid, SpectralField::Zero(32, 32));
    CHECK(max_abs(z.x1) == 0.0);

    const Grid2D g64(64);
    SpectralField w = random_band_field(g64, 1.0, 20.0, 1.0, 11);
    w(0, 0) = 0.0;
    CHECK(max_abs(curl(g64, biot_savart(g64, w)) - w) < 1e-12 * max_abs(w));
    CHECK(max_abs(divergence(g64, biot_savart(g64, w))) < 1e-12 * max_abs(w));
    w(0, 0) = 1.0;
    CHECK_THROWS_AS(biot_savart(g64, w), Error);
}

TEST_CASE("dealiasing") {
    const Grid2D grid(64);
    const SpectralField low = random_band_field(grid, 0.0, 16.0, 1.0, 5);
    CHECK(max_abs(dealias(grid, low) - low) == 0.0);

    SpectralField nyq = SpectralField::Zero(64, 64);
    nyq(32, 0) = 1.0;
    nyq(0, 32) = 1.0;
    nyq(32, 32) = 1.0;
    CHECK(max_abs(dealias(grid, nyq)) == 0.0);
}

TEST_CASE("dealiased product equals the exact convolution on the retained band") {
    const int n = 32;
    const Grid2D grid(n);
    const SpectralField a = dealias(grid, random_band_field(grid, 0.0, 15.0, 1.0, 21));
    const SpectralField b = dealias(grid, random_band_field(grid, 0.0, 15.0, 1.0, 22));
    const SpectralField prod = product(grid, a, b, true);

    const int band = n / 3;
    double worst = 0.0;
    for (int k1 = -band; k1 <= band; ++k1) {
        for (int k2 = -band; k2 <= band; ++k2) {
            std::complex<double> sum = 0.0;
            for (int p1 = -band; p1 <= band; ++p1) {
                for (int p2 = -band; p2 <= band; ++p2) {
                    const int q1 = k1 - p1, q2 = k2 - p2;
                    if (std::abs(q1) > band || std::abs(q2) > band) {
                        continue;
                    }
                    sum += a(grid.index(p1), grid.index(p2)) * b(grid.index(q1), grid.index(q2));
                }
            }
            worst = std::max(worst, std::abs(sum - prod(grid.index(k1), grid.index(k2))));
        }
    }
    CHECK(worst < 1e-14);
    // outside the band everything is removed
    CHECK(max_abs(prod - dealias(grid, prod)) == 0.0);
}

TEST_CASE("Lp norms") {
    const Grid2D grid(64);
    CHECK(lp_norm(grid, RealField::Ones(64, 64), 2.0) == doctest::Approx(2.0 * pi).epsilon(1e-14));
    for (double p : {1.0, 2.0, 3.5, std::numeric_limits<double>::infinity()}) {
        CHECK(lp_norm(grid, RealField::Zero(64, 64), p) == 0.0);
    }
    const RealField s = sample(grid, [](double x1, double) { return std::sin(x1); });
    CHECK(lp_norm(grid, s, 2.0) == doctest::Approx(std::sqrt(2.0) * pi).epsilon(1e-14));
    CHECK(lp_norm(grid, s, INFINITY) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(l2_norm_squared(grid, forward(grid, s)) == doctest::Approx(2.0 * pi * pi).epsilon(1e-14));
}

TEST_CASE("random band fields do not depend on the resolution") {
    const Grid2D g64(64), g128(128);
    const SpectralField a = random_band_field(g64, 1.0, 8.0, 1.0, 99);
    const SpectralField b = random_band_field(g128, 1.0, 8.0, 1.0, 99);
    double worst = 0.0;
    for (int m1 = -8; m1 <= 8; ++m1) {
        for (int m2 = -8; m2 <= 8; ++m2) {
            worst = std::max(worst, std::abs(a(g64.index(m1), g64.index(m2)) - b(g128.index(m1), g128.index(m2))));
        }
    }
    CHECK(worst == 0.0);
    CHECK(std::sqrt(l2_norm_squared(g64, a) / g64.area()) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hermitian_defect(g64, a).max_defect == 0.0);
}

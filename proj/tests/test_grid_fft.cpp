#include "doctest.h"
#include "test_util.hpp"

#include "gpscat/fft.hpp"
#include "gpscat/grid.hpp"
#include "gpscat/norms.hpp"

using namespace gps;
using gps::testing::random_complex;

TEST_CASE("make_grid validates its arguments") {
    CHECK_THROWS_AS(make_grid(0, 16, 1.0), GridError);
    CHECK_THROWS_AS(make_grid(4, 16, 1.0), GridError);
    CHECK_THROWS_AS(make_grid(1, 12, 1.0), GridError);
    CHECK_THROWS_AS(make_grid(1, 4, 1.0), GridError);
    CHECK_THROWS_AS(make_grid(1, 15, 1.0), GridError);
    CHECK_THROWS_AS(make_grid(1, 16, 0.0), GridError);
    CHECK_THROWS_AS(make_grid(1, 16, -2.0), GridError);
}

TEST_CASE("lattice examples") {
    Grid g = make_grid(1, 8, 2 * M_PI);
    CHECK(g.dk() == doctest::Approx(1.0));
    std::vector<int> ks;
    for (std::size_t i = 0; i < g.size(); ++i) ks.push_back(g.wave_index(i)[0]);
    std::sort(ks.begin(), ks.end());
    CHECK(ks == std::vector<int>{-4, -3, -2, -1, 0, 1, 2, 3});

    Grid g3 = make_grid(3, 64, 40.0);
    CHECK(g3.dk() == doctest::Approx(0.15708).epsilon(1e-5));

    Grid g2 = make_grid(2, 16, 10.0);
    double mx = 0;
    for (std::size_t i = 0; i < g2.size(); ++i) mx = std::max(mx, std::abs(g2.xi(i)[0]));
    CHECK(mx == doctest::Approx(M_PI * 16 / 10.0));
}

TEST_CASE("coordinates are centered") {
    Grid g = make_grid(2, 8, 4.0);
    CHECK(g.x(0)[0] == doctest::Approx(-2.0));
    CHECK(g.x(0)[1] == doctest::Approx(-2.0));
    CHECK(g.x(g.size() - 1)[0] == doctest::Approx(1.5));
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(g.flatten(g.unflatten(i)) == i);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(g.flat_of_wave(g.wave_index(i)) == i);
}

// Independent oracle: the quadrature sum h^d sum_x f(x) e^{-i x.xi}.
TEST_CASE("forward transform equals the quadrature of the continuum transform") {
    for (int d = 1; d <= 3; ++d) {
        Grid g = make_grid(d, 8, 3.7);
        Field f = random_complex(g, 11 + d);
        Field s = f.to_spectral();
        double hd = std::pow(g.h(), d);
        double err = 0, mx = 0;
        for (std::size_t k = 0; k < g.size(); ++k) {
            Vec3 xi = g.xi(k);
            cplx acc = 0;
            for (std::size_t j = 0; j < g.size(); ++j) acc += f[j] * std::exp(cplx(0, -dot(g.x(j), xi)));
            acc *= hd;
            err = std::max(err, std::abs(acc - s[k]));
            mx = std::max(mx, std::abs(acc));
        }
        CHECK(err <= 1e-12 * mx);
    }
}

TEST_CASE("round trip and Plancherel") {
    for (int d = 1; d <= 3; ++d) {
        Grid g = make_grid(d, 16, 5.0);
        Field f = random_complex(g, 3 * d);
        Field r = f.to_spectral().to_physical();
        CHECK(max_abs_diff(r, f) <= 1e-12 * max_abs(f));
        double phys = lp_norm(f, 2.0);
        double spec = 0;
        Field s = f.to_spectral();
        for (auto& v : s.data()) spec += std::norm(v);
        spec = std::sqrt(spec / g.volume());
        CHECK(spec == doctest::Approx(phys).epsilon(1e-12));
    }
}

TEST_CASE("real fields have conjugate-symmetric spectra") {
    Grid g = make_grid(2, 16, 7.0);
    Field f = gps::testing::random_bandlimited(g, 8, 5);
    Field s = f.to_spectral();
    double mx = max_abs(s), err = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        Index3 k = g.wave_index(i);
        Index3 m{-k[0], -k[1], 0};
        for (int a = 0; a < 2; ++a)
            if (m[a] == g.n / 2) m[a] = -g.n / 2;
        err = std::max(err, std::abs(s[g.flat_of_wave(m)] - std::conj(s[i])));
    }
    CHECK(err <= 1e-12 * mx);
}

TEST_CASE("Gaussian transform approximates the continuum transform") {
    // int e^{-x^2} e^{-i x xi} dx = sqrt(pi) e^{-xi^2/4}
    Grid g = make_grid(1, 256, 40.0);
    Field f = Field::from_real_function(g, [](const Vec3& x) { return std::exp(-x[0] * x[0]); }).to_spectral();
    double err = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double xi = g.xi(i)[0];
        err = std::max(err, std::abs(f[i] - std::sqrt(M_PI) * std::exp(-xi * xi / 4)));
    }
    CHECK(err < 1e-13);
}

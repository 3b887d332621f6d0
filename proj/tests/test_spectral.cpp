#include "doctest.h"
#include "test_util.hpp"

#include "gpscat/norms.hpp"
#include "gpscat/spectral.hpp"

using namespace gps;
using gps::testing::random_bandlimited;

namespace {
Field plane_wave(const Grid& g, const Index3& k) {
    Vec3 xi0{g.dk() * k[0], g.dk() * k[1], g.dk() * k[2]};
    return Field::from_function(g, [xi0](const Vec3& x) { return std::exp(cplx(0, dot(x, xi0))); });
}
}  // namespace

TEST_CASE("multiplier examples") {
    Grid g = make_grid(2, 16, 2 * M_PI);
    Field one = Field::from_real_function(g, [](const Vec3&) { return 1.0; });
    Field b = apply_symbol1(sym::bracket_pow(1.0), one, Repr::physical);
    for (auto& v : b.data()) CHECK(std::abs(v - std::sqrt(2.0)) < 1e-12);
    Field u = apply_symbol1(sym::U_pow(1.0), one, Repr::physical);
    CHECK(max_abs(u) < 1e-14);
    CHECK(b.is_real());

    // |xi0| = sqrt(2): H = sqrt(2) * 2
    Field w = plane_wave(g, {1, 1, 0});
    Field h = apply_symbol1(sym::H(), w, Repr::physical);
    double expect = std::sqrt(2.0) * std::sqrt(2.0 + 2.0);
    CHECK(max_abs_diff(h, expect * w) < 1e-12);
}

TEST_CASE("singular multipliers enforce the zero-mode policy") {
    Grid g = make_grid(1, 32, 10.0);
    Field f = random_bandlimited(g, 8, 1);
    CHECK_THROWS_AS(apply_symbol1(sym::U_pow(-1.0), f), ZeroModeError);
    Field m = project_mean_free(f);
    Field r = apply_symbol1(sym::U_pow(-1.0), m);
    CHECK(r[0] == cplx(0.0));
    // U U^{-1} = identity on mean-free fields
    Field back = apply_symbol1(sym::U_pow(1.0), r, Repr::physical);
    CHECK(max_abs_diff(back, m) < 1e-12 * max_abs(m));
}

TEST_CASE("symbol identities on the lattice") {
    Grid g = make_grid(3, 16, 9.0);
    double e1 = 0, e2 = 0;
    for (std::size_t i = 1; i < g.size(); ++i) {
        Vec3 x = g.xi(i);
        e1 = std::max(e1, std::abs(symU(x) * bracket(x) - norm(x)) / norm(x));
        e2 = std::max(e2, std::abs(symH(x) / symU(x) - (2 + norm2(x))) / (2 + norm2(x)));
    }
    CHECK(e1 <= 1e-14);
    CHECK(e2 <= 1e-14);
}

TEST_CASE("group speed is bounded below by sqrt 2") {
    for (int d = 1; d <= 3; ++d) {
        Grid g = make_grid(d, 32, 50.0);
        CHECK(min_group_speed(g) >= std::sqrt(2.0) - 1e-12);
    }
    // analytic form against a centered difference of H
    for (double r : {0.01, 0.3, 1.0, 4.0}) {
        double h = 1e-5;
        double fd = (symH_r(r + h) - symH_r(r - h)) / (2 * h);
        CHECK(group_speed(r) == doctest::Approx(fd).epsilon(1e-8));
    }
}

TEST_CASE("cutoff shape") {
    CHECK(chi(0.0) == 1.0);
    CHECK(chi(1.0) == 1.0);
    CHECK(chi(2.0) == 0.0);
    CHECK(chi(3.0) == 0.0);
    CHECK(chi(1.5) == doctest::Approx(0.5));
    double prev = 1.0;
    for (double x = 1.0; x <= 2.0; x += 0.01) {
        CHECK(chi(x) <= prev + 1e-15);
        prev = chi(x);
    }
    CHECK(chi_shell(4.0, 4.0) == 1.0);
    CHECK(chi_shell(16.0, 4.0) == 0.0);
}

TEST_CASE("shells partition the resolvable lattice") {
    for (int d = 1; d <= 3; ++d) {
        Grid g = make_grid(d, 16, 13.0);
        auto ks = resolvable_shells(g);
        double err = 0;
        for (std::size_t i = 1; i < g.size(); ++i) {
            double r = norm(g.xi(i)), s = 0;
            for (double k : ks) s += chi_shell(r, k);
            err = std::max(err, std::abs(s - 1.0));
        }
        CHECK(err <= 1e-12);
    }
}

TEST_CASE("Littlewood-Paley pieces") {
    Grid g = make_grid(2, 32, 2 * M_PI);
    Field w = plane_wave(g, {4, 0, 0});
    CHECK(max_abs_diff(littlewood_paley(w, 4.0, Repr::physical), w) < 1e-12);
    Field w16 = plane_wave(g, {0, 16 - 1, 0});
    CHECK(max_abs(littlewood_paley(w16, 3.0, Repr::physical)) < 1e-14);

    Field f = random_bandlimited(g, 16, 7);
    Field sum = Field(g, Repr::spectral, ValueKind::complex);
    for (double k : resolvable_shells(g)) sum += littlewood_paley(f, k);
    sum[0] += f.to_spectral()[0];
    CHECK(max_abs_diff(sum.to_physical(), f) <= 1e-10 * max_abs(f));
}

TEST_CASE("frequency split") {
    Grid g = make_grid(2, 32, 11.0);
    Field f = random_bandlimited(g, 16, 9);
    auto [lo, hi] = freq_split(f, 2.0, Repr::physical);
    CHECK(max_abs_diff(lo + hi, f) <= 1e-10 * max_abs(f));

    double top = 2 * std::sqrt(2.0) * M_PI * g.n / g.L;
    auto [lo2, hi2] = freq_split(f, 2 * top, Repr::physical);
    CHECK(max_abs_diff(lo2, f) < 1e-12 * max_abs(f));
    CHECK(max_abs(hi2) < 1e-12 * max_abs(f));

    auto [lo3, hi3] = freq_split(f, 0.5 * g.dk(), Repr::physical);
    cplx m = mean(f);
    for (auto& v : lo3.data()) CHECK(std::abs(v - m) < 1e-12);
    CHECK(max_abs_diff(hi3, project_mean_free(f)) < 1e-12);
}

TEST_CASE("decay constants") {
    auto a = lp_decay_constants(3, 6, 0);
    CHECK(a.rate == doctest::Approx(1.0));
    CHECK(a.U_exponent == doctest::Approx(1.0 / 3));
    CHECK(a.bracket_exponent == doctest::Approx(0.0));
    CHECK(lp_decay_constants(3, 4, 2.0 / 3).rate == doctest::Approx(7.0 / 12));
    CHECK(lp_decay_constants(3, 2, 0.4).rate == 0.0);
    CHECK_THROWS(lp_decay_constants(3, 1.5, 0));
}

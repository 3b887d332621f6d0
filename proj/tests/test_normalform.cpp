#include "doctest.h"
#include "test_util.hpp"

#include "gpscat/dynamics.hpp"
#include "gpscat/multilinear.hpp"
#include "gpscat/normalform.hpp"
#include "gpscat/norms.hpp"
#include "gpscat/spectral.hpp"
#include "gpscat/symbols.hpp"

using namespace gps;
using gps::testing::random_bandlimited;

namespace {

EnergyPoint random_point(const Grid& g, unsigned seed, double amp) {
    return EnergyPoint::from(random_bandlimited(g, g.n / 4 - 1, seed, amp),
                             random_bandlimited(g, g.n / 4 - 1, seed + 101, amp));
}

// Three consecutive states around mid_t, spaced by dt.
std::vector<StateU> triple(const StateU& s0, double dt, double mid_t) {
    EvolutionConfig c;
    c.dt = dt;
    c.T = mid_t + dt;
    c.scheme = Scheme::lawson_rk4;
    c.dealias = false;
    c.enforce_horizon = false;
    c.cadence = 1;
    std::vector<StateU> all;
    evolve(s0, c, [&](const StateU& s) { all.push_back(s); }, false);
    std::size_t k = all.size();
    return {all[k - 3], all[k - 2], all[k - 1]};
}

StateU resolved_gaussian(double eps) {
    Grid g = make_grid(1, 128, 20.0);
    return gaussian_data(g, {eps, 1.5, 0.7, {0, 0, 0}});
}

}  // namespace

TEST_CASE("distance on the energy space") {
    Grid g = make_grid(2, 16, 8.0);
    EnergyPoint f = random_point(g, 3, 0.4), h = random_point(g, 9, 0.4);
    EnergyPoint zero = EnergyPoint::from(Field(g, Repr::spectral, ValueKind::real),
                                         Field(g, Repr::spectral, ValueKind::real));
    CHECK(delta_distance(f, f) <= 1e-14);
    CHECK(delta_distance(f, h) == doctest::Approx(delta_distance(h, f)).epsilon(1e-13));
    // delta(u, 0)^2 is the energy E1(u).
    StateU s = make_state(f.re(), f.im());
    CHECK(delta_distance(f, zero) * delta_distance(f, zero) == doctest::Approx(energy_E1(s)).epsilon(1e-12));
    CHECK(delta_distance(f, h) <= delta_distance(f, zero) + delta_distance(zero, h) + 1e-12);
}

TEST_CASE("energy mapping identity") {
    for (int d = 1; d <= 3; ++d) {
        Grid g = make_grid(d, d == 3 ? 8 : 16, 6.0);
        for (double amp : {0.05, 1.0, 5.0}) {
            EnergyPoint f = random_point(g, 11 * d, amp), h = random_point(g, 17 * d, amp);
            MappingTerms t = energy_mapping_terms(f, h);
            CAPTURE(d);
            CAPTURE(amp);
            CHECK(t.delta_sq > 0.0);
            CHECK(t.residual <= 1e-12);
        }
    }
    SUBCASE("100 random pairs") {
        Grid g2 = make_grid(2, 16, 7.0);
        double worst = 0.0;
        for (unsigned k = 0; k < 100; ++k) {
            double amp = 0.01 * std::pow(1.06, double(k));
            worst = std::max(worst, energy_mapping_check(random_point(g2, 1000 + k, amp), random_point(g2, 5000 + k, amp)));
        }
        CHECK(worst <= 1e-10);
    }
    SUBCASE("cached charge density") {
        EnergyPoint f = random_point(make_grid(2, 16, 7.0), 77, 0.5);
        Field q = 2.0 * f.re();
        q += modulus_sq(f.re(), f.im());
        CHECK(max_abs_diff(q, f.q) <= 1e-14);
    }
    SUBCASE("grid mismatch") {
        EnergyPoint a = random_point(make_grid(1, 16, 6.0), 1, 0.1), b = random_point(make_grid(1, 32, 6.0), 1, 0.1);
        CHECK_THROWS_AS(energy_mapping_terms(a, b), GridError);
    }
}

TEST_CASE("inverse of M") {
    Grid g = make_grid(2, 32, 12.0);

    SUBCASE("zero data converges immediately") {
        auto [p, rep] = inverse_R(Field(g, Repr::spectral, ValueKind::complex));
        CHECK(rep.converged);
        CHECK(rep.iterations == 1);
        CHECK(max_abs(p.f) == 0.0);
    }

    SUBCASE("round trip through M") {
        Field u1 = random_bandlimited(g, 5, 21, 0.05), u2 = random_bandlimited(g, 5, 22, 0.05, true);
        Field z = transform_M(u1, u2);
        auto [p, rep] = inverse_R(z);
        CHECK(rep.converged);
        CHECK(rep.small);
        CHECK(max_abs_diff(p.re(), u1.to_spectral()) <= 1e-9);
        CHECK(max_abs_diff(p.im(), u2.to_spectral()) <= 1e-9);
        // |delta(R f, 0)|^2 = ||<grad> f||^2 + 1/2 ||U |R f|^2||^2
        EnergyPoint zero = EnergyPoint::from(Field(g, Repr::spectral, ValueKind::real),
                                             Field(g, Repr::spectral, ValueKind::real));
        MappingTerms t = energy_mapping_terms(p, zero);
        double hz = sobolev_norm(z, 1.0);
        CHECK(t.h1_sq == doctest::Approx(hz * hz).epsilon(1e-8));
    }

    SUBCASE("50 random round trips") {
        Grid gs = make_grid(2, 16, 8.0);
        double worst = 0.0;
        for (unsigned k = 0; k < 50; ++k) {
            Field u1 = random_bandlimited(gs, 3, 300 + k, 0.02), u2 = random_bandlimited(gs, 3, 400 + k, 0.02, true);
            Field f = transform_M(u1, u2);
            REQUIRE(lp_norm(f, 6.0) <= 0.05);
            auto [p, rep] = inverse_R(f);
            REQUIRE(rep.converged);
            worst = std::max(worst, sobolev_norm(transform_M(p.re(), p.im()) - f, 1.0));
        }
        CHECK(worst <= 1e-9);
    }

    SUBCASE("iteration count grows with the amplitude") {
        int last = 0;
        for (double eps : {1e-3, 1e-2, 1e-1}) {
            Field u1 = random_bandlimited(g, 5, 31, eps), u2 = random_bandlimited(g, 5, 32, eps, true);
            auto [p, rep] = inverse_R(transform_M(u1, u2));
            CAPTURE(eps);
            CHECK(rep.converged);
            CHECK(rep.iterations >= last);
            CHECK(rep.contraction < 0.5);
            last = rep.iterations;
        }
        CHECK(last > 2);
    }

    SUBCASE("imaginary part with a mean is rejected") {
        Field f = Field::from_function(g, [](const Vec3&) { return cplx(0.0, 0.3); });
        CHECK_THROWS_AS(inverse_R(f), ZeroModeError);
    }

    SUBCASE("Lipschitz bound for small data") {
        for (unsigned seed : {41u, 43u, 47u}) {
            Field a = make_complex(random_bandlimited(g, 5, seed, 0.03), random_bandlimited(g, 5, seed + 1, 0.03, true));
            Field b = make_complex(random_bandlimited(g, 5, seed + 2, 0.03), random_bandlimited(g, 5, seed + 3, 0.03, true));
            double r = inverse_lipschitz_ratio(a, b);
            CAPTURE(seed);
            CHECK(r > 0.5);
            CHECK(r <= 2.0);
        }
    }
}

TEST_CASE("nonlinearity of the z equation") {
    Grid g = make_grid(2, 32, 10.0);
    Field zero(g, Repr::spectral, ValueKind::real);
    CHECK(max_abs(nonlinearity_NO(zero, zero)) == 0.0);

    SUBCASE("constants are annihilated") {
        Field c1 = Field::from_real_function(g, [](const Vec3&) { return 0.3; });
        Field c2 = Field::from_real_function(g, [](const Vec3&) { return -0.2; });
        CHECK(max_abs(nonlinearity_NO(c1, c2)) <= 1e-14);
    }

    SUBCASE("restriction to u2 = 0") {
        Field u1 = random_bandlimited(g, 3, 4, 0.5);
        Field poly = 2.0 * dealiased_product(u1, u1);
        poly += dealiased_product(dealiased_product(u1, u1), u1);
        Field expect = apply_symbol1(sym::U_pow(1.0), poly);
        CHECK(max_abs_diff(nonlinearity_NO(u1, zero), expect.as_complex()) <= 1e-14);
    }

    SUBCASE("split with u1 = 0 against direct substitution") {
        // u1 = 0: q = u2^2, the U parts cancel and the pieces carry 2 u2^2 grad u2
        // and u2^2 grad u2, i.e. -i <grad>^{-2} Lap(u2^3) in total.
        Field u2 = random_bandlimited(g, 3, 12, 0.5);
        Field cube = dealiased_product(dealiased_product(u2, u2), u2);
        Field expect = apply_symbol1(sym::product(sym::bracket_pow(-2.0), sym::laplacian()), cube).as_complex();
        expect *= cplx(0.0, -1.0);
        auto [n1, n2] = nonlinearity_NO_split(zero, u2);
        CHECK(max_abs_diff(n1 + n2, expect) <= 1e-13);
        CHECK(max_abs_diff(nonlinearity_NO(zero, u2), expect) <= 1e-13);
    }

    SUBCASE("regrouped split sums to the original") {
        // kcut <= n/8 - 1 keeps every iterated product on the lattice.
        Field u1 = random_bandlimited(g, 3, 5, 0.7), u2 = random_bandlimited(g, 3, 6, 0.7);
        Field n0 = nonlinearity_NO(u1, u2);
        auto [n1, n2] = nonlinearity_NO_split(u1, u2);
        CHECK(max_abs(n0) > 0.1);
        CHECK(max_abs_diff(n1 + n2, n0) <= 1e-12 * max_abs(n0));
        // The second piece is cubic in u2 and vanishes with it.
        auto [m1, m2] = nonlinearity_NO_split(u1, zero);
        CHECK(max_abs(m2) == 0.0);
    }

    SUBCASE("quadratic scaling") {
        Field u1 = random_bandlimited(g, 3, 7, 1.0), u2 = random_bandlimited(g, 3, 8, 1.0);
        double e = 1e-4;
        Field a = nonlinearity_NO(e * u1, e * u2), b = nonlinearity_NO(2 * e * u1, 2 * e * u2);
        CHECK(max_abs(b) / max_abs(a) == doctest::Approx(4.0).epsilon(1e-3));
    }
}

TEST_CASE("transformed equations hold along trajectories") {
    StateU s0 = resolved_gaussian(0.1);
    const double t_mid = 0.4;
    std::vector<double> rz, rZ, rZmut;
    for (double dt : {0.02, 0.01, 0.005}) {
        auto st = triple(s0, dt, t_mid);
        CHECK(st[1].t == doctest::Approx(t_mid));
        rz.push_back(z_equation_residual(st[0], st[1], st[2]).l2);
        rZ.push_back(Z_equation_residual(st[0], st[1], st[2]).l2);
        NZOptions mut;
        mut.B4_sign = -1.0;
        rZmut.push_back(Z_equation_residual(st[0], st[1], st[2], mut).l2);
    }
    for (std::size_t i = 1; i < rz.size(); ++i) {
        CAPTURE(i);
        CHECK(std::log2(rz[i - 1] / rz[i]) == doctest::Approx(2.0).epsilon(0.1));
        CHECK(std::log2(rZ[i - 1] / rZ[i]) == doctest::Approx(2.0).epsilon(0.1));
    }
    // A sign flip in B4 leaves a defect that does not shrink with dt.
    CHECK(rZmut.back() > 20.0 * rZ.back());
    CHECK(rZmut.back() / rZmut.front() > 0.5);

    SUBCASE("unequal spacing is rejected") {
        auto st = triple(s0, 0.01, 0.1);
        StateU late = st[2];
        late.t += 0.003;
        CHECK_THROWS_AS(z_equation_residual(st[0], st[1], late), std::invalid_argument);
    }
}

#include "doctest.h"
#include "test_util.hpp"

#include <cmath>

#include "gpscat/analysis.hpp"
#include "gpscat/norms.hpp"
#include "gpscat/symbols.hpp"
#include "gpscat/transforms.hpp"

using namespace gps;

namespace {

Field gaussian(const Grid& g, double w, Vec3 k0 = {0, 0, 0}, Vec3 c = {0, 0, 0}) {
    return Field::from_function(g, [=](const Vec3& x) {
        Vec3 y = x - c;
        return std::exp(-norm2(y) / (w * w)) * std::exp(cplx(0.0, dot(k0, y)));
    });
}

Field times_x(const Field& f, int j) {
    Field g = f.to_physical().as_complex();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] *= g.grid().x(i)[j];
    return g;
}

Field flow(const Field& f, double t) { return apply_symbol1(sym::propagator(t), f, Repr::spectral); }

std::vector<double> geometric_times(double t0, double t1, int n) {
    std::vector<double> t;
    for (int i = 0; i < n; ++i) t.push_back(t0 * std::pow(t1 / t0, double(i) / (n - 1)));
    return t;
}

}  // namespace

TEST_CASE("J operator") {
    Grid g = make_grid(2, 128, 32.0);
    Field f = gaussian(g, 1.0, {0.5, -0.3, 0}, {1.0, 0.5, 0});

    SUBCASE("t = 0 is multiplication by x") {
        JResult J = apply_J(f, 0.0);
        REQUIRE(J.components.size() == 2);
        CHECK(J.localized);
        for (int j = 0; j < 2; ++j) CHECK(testing::rel_diff(J.components[j], times_x(f, j)) <= 1e-12);
    }
    SUBCASE("time reversal for real data") {
        Field r = real_part(f).as_real();
        for (double t : {0.3, 1.0}) CHECK(J_h1_norm(r, t) == doctest::Approx(J_h1_norm(r, -t)).epsilon(1e-12));
    }
    SUBCASE("commutator with <grad> and the closed form") {
        // The cone of H at xi = 0 gives e^{itH} f algebraic tails unless the
        // spectrum of f vanishes there to high order, hence Lap^3 of a Gaussian.
        Grid gf = make_grid(2, 256, 32.0);
        const Symbol1 lap3 = sym::product(sym::laplacian(), sym::product(sym::laplacian(), sym::laplacian()));
        Field h = apply_symbol1(lap3, gaussian(gf, 1.0, {0.5, -0.3, 0}, {1.0, 0.5, 0}));
        const Symbol1 br = sym::bracket_pow(1.0), ibr = sym::bracket_pow(-1.0);
        for (double t : {0.0, 0.1}) {
            CAPTURE(t);
            JResult J = apply_J(h, t);
            REQUIRE(J.localized);
            JResult Jb = apply_J(apply_symbol1(br, h), t);
            double acc = 0.0;
            for (int j = 0; j < 2; ++j) {
                Field c = apply_symbol1(br, J.components[j]) - Jb.components[j];
                c += apply_symbol1(ibr, apply_symbol1(sym::derivative(j), h)).as_complex();
                acc += std::pow(lp_norm(c, 2.0), 2);
                // J_j = x_j - t (d_j H)(D)
                Symbol1 dH{"dH", [j](const Vec3& k) { return cplx(gradH(k)[j]); }, false, true};
                Field closed = times_x(h, j).to_spectral() - t * apply_symbol1(dH, h);
                CHECK(lp_norm(J.components[j] - closed, 2.0) <= 1e-7 * lp_norm(closed, 2.0));
            }
            CHECK(std::sqrt(acc) <= 1e-8 * sobolev_norm(h, 1.0));
        }
        CHECK_FALSE(apply_J(h, 1.0).localized);
    }
    SUBCASE("localization flag") {
        Field wide = gaussian(g, 6.0);
        CHECK(central_mass_fraction(f) > 1 - 1e-12);
        CHECK_FALSE(apply_J(wide, 0.0).localized);
    }
}

TEST_CASE("X norm") {
    Grid g = make_grid(2, 128, 32.0);
    Field Z0 = gaussian(g, 1.2, {0.7, 0.2, 0});
    CHECK(norm_X(Field(g, Repr::spectral, ValueKind::complex), 1.0) == 0.0);
    double direct = sobolev_norm(Z0, 1.0) + std::hypot(sobolev_norm(times_x(Z0, 0), 1.0),
                                                       sobolev_norm(times_x(Z0, 1), 1.0));
    CHECK(norm_X(Z0, 0.0) == doctest::Approx(direct).epsilon(1e-12));
    for (double t : {0.5, 1.5}) {
        CAPTURE(t);
        CHECK(std::abs(norm_X(flow(Z0, t), t) - norm_X(Z0, 0.0)) <= 1e-10 * norm_X(Z0, 0.0));
    }
}

TEST_CASE("S norm") {
    Grid g = make_grid(2, 64, 24.0);
    // A derivative of a Gaussian has no mean, so U^{-1/6} applies cleanly.
    Field Z0 = apply_symbol1(sym::derivative(0), gaussian(g, 1.0, {0.5, 0, 0}));
    auto traj = [&](int n) {
        std::vector<Snapshot> s;
        for (int k = 0; k <= n; ++k) {
            double t = 2.0 * k / n;
            s.push_back({t, flow(Z0, t)});
        }
        return s;
    };
    CHECK(norm_S({}) == 0.0);
    CHECK(norm_S({{0.0, Field(g, Repr::spectral, ValueKind::complex)}, {1.0, Field(g, Repr::spectral, ValueKind::complex)}}) == 0.0);
    CHECK(norm_S({{0.5, Z0}}) == doctest::Approx(sobolev_norm(Z0, 1.0)).epsilon(1e-14));
    double coarse = norm_S(traj(20)), fine = norm_S(traj(40));
    CHECK(coarse > sobolev_norm(Z0, 1.0));
    CHECK(std::abs(coarse - fine) <= 0.01 * fine);
    CHECK_THROWS_AS(norm_S({{0.0, gaussian(g, 1.0)}, {1.0, gaussian(g, 1.0)}}), ZeroModeError);
    CHECK_THROWS_AS(norm_S({{1.0, Z0}, {0.5, Z0}}), std::invalid_argument);
}

TEST_CASE("decay fits") {
    SUBCASE("d = 3 L6 decay of the linear flow") {
        Grid g = make_grid(3, 128, 96.0);
        Field f = gaussian(g, 1.0, {2, 0, 0});
        double hz = dispersive_horizon(f);
        CHECK(hz >= wraparound_horizon(g));
        std::vector<double> t = geometric_times(0.6, 0.8 * hz, 9), v;
        for (double s : t) v.push_back(lp_norm(apply_symbol1(sym::propagator(s), f, Repr::physical), 6.0));
        DecayFitOptions opt;
        opt.t0 = 0.6;
        opt.horizon = hz;
        DecayReport r = decay_fit("L6", t, v, lp_decay_constants(3, 6.0, 0.0).rate * -1.0, opt);
        CHECK(r.predicted == doctest::Approx(-1.0));
        CHECK(r.fitted == doctest::Approx(-1.0).epsilon(0.1));
        CHECK(r.pass);
        CHECK(r.samples_in_window == 9);
    }
    SUBCASE("conserved L2 norm") {
        Grid g = make_grid(1, 512, 200.0);
        Field f = gaussian(g, 1.0, {2, 0, 0});
        double hz = dispersive_horizon(f);
        std::vector<double> t = geometric_times(1.0, 0.8 * hz, 12), v;
        for (double s : t) v.push_back(lp_norm(flow(f, s), 2.0));
        DecayFitOptions opt;
        opt.horizon = hz;
        opt.tol = 0.02;
        DecayReport r = decay_fit("L2", t, v, 0.0, opt);
        CHECK(std::abs(r.fitted) <= 1e-10);
        CHECK(r.pass);
    }
    SUBCASE("verdicts and window rules") {
        std::vector<double> t = geometric_times(1.0, 10.0, 11), v;
        for (double s : t) v.push_back(std::pow(s, -0.5));
        DecayFitOptions opt;
        opt.horizon = 10.0;
        opt.upper_bound = true;
        CHECK(decay_fit("p", t, v, -0.6, opt).pass);  // -0.5 <= -0.6 + 0.15
        CHECK_FALSE(decay_fit("p", t, v, -0.7, opt).pass);
        opt.threshold = -0.55;
        CHECK_FALSE(decay_fit("p", t, v, -0.6, opt).pass);
        opt.threshold.reset();
        opt.t1 = 12.0;
        CHECK_THROWS_AS(decay_fit("p", t, v, -0.5, opt), HorizonError);
        opt.t1 = 0.0;
        std::vector<double> ts = geometric_times(1.0, 10.0, 6), vs(6, 1.0);
        CHECK_THROWS_AS(decay_fit("p", ts, vs, 0.0, opt), std::invalid_argument);
        opt.horizon = 0.0;
        CHECK_THROWS_AS(decay_fit("p", t, v, -0.5, opt), std::invalid_argument);
    }
}

TEST_CASE("scattering profile") {
    Grid g = make_grid(2, 64, 24.0);
    Field Z0 = gaussian(g, 1.0, {0.5, 0, 0});
    std::vector<Snapshot> traj;
    for (double t : {0.0, 0.5, 1.0, 1.5, 2.0}) traj.push_back({t, flow(Z0, t)});
    ScatterProfile p = extract_profile(traj);
    CHECK(p.cauchy.size() == 4);
    CHECK(p.vanishing);
    CHECK(p.pass);
    for (double c : p.cauchy) CHECK(c <= 1e-13 * sobolev_norm(Z0, 1.0));
    CHECK(testing::rel_diff(p.v_plus, Z0.to_spectral()) <= 1e-12);

    // A profile converging like t^{-1}: Z(t) = e^{-itH}(Z0 + Z0/t).
    std::vector<Snapshot> slow;
    for (double t : geometric_times(1.0, 8.0, 10)) slow.push_back({t, flow((1.0 + 1.0 / t) * Z0, t)});
    ScatterProfile q = extract_profile(slow, 6);
    CHECK_FALSE(q.vanishing);
    CHECK(q.fitted < -0.4);
    CHECK(q.pass);
    CHECK(q.max_increase <= 0.0);
    CHECK_THROWS_AS(extract_profile(slow, 2), std::invalid_argument);
}

TEST_CASE("normal-form comparison") {
    Grid g = make_grid(1, 64, 32.0);
    auto data = [&](double eps) { return gaussian_data(g, {eps, 1.5, 0.3}); };

    EquivalenceReport zero = normalform_equivalence({zero_state(g)});
    CHECK(zero.rows[0].z_minus_v == 0.0);
    CHECK(zero.rows[0].Z_minus_v == 0.0);
    CHECK(zero.pass);

    StateU s = data(1e-3);
    EquivalenceReport r = normalform_equivalence({s});
    Field v = make_v(s.u1, s.u2).to_spectral().as_complex();
    CHECK(r.rows[0].Z_minus_v ==
          doctest::Approx(norm_X(transform_Z(s.u1, s.u2).to_spectral().as_complex() - v, 0.0)).epsilon(1e-14));
    CHECK(r.rows[0].z_minus_v ==
          doctest::Approx(norm_X(transform_M(s.u1, s.u2).to_spectral().as_complex() - v, 0.0)).epsilon(1e-14));

    EquivalenceReport r2 = normalform_equivalence({data(2e-3)});
    CHECK(r2.rows[0].Z_minus_v / r.rows[0].Z_minus_v == doctest::Approx(4.0).epsilon(1e-3));
    CHECK(r2.rows[0].z_minus_v / r.rows[0].z_minus_v == doctest::Approx(4.0).epsilon(1e-3));
    CHECK(r2.K == doctest::Approx(r.K).epsilon(1e-2));
}

TEST_CASE("2D correction integrand") {
    Grid g = make_grid(2, 32, 2 * M_PI);  // dk = 1
    CHECK(max_abs(correction_profile_2d(Field(g, Repr::physical, ValueKind::complex))) == 0.0);
    CHECK_THROWS_AS(correction_profile_2d(Field(make_grid(1, 32, 6.0), Repr::physical, ValueKind::complex)),
                    std::invalid_argument);

    SUBCASE("real data: the correction term is imaginary") {
        Field z = testing::random_bandlimited(g, 5, 3);
        Field out = correction_profile_2d(z);
        Field Uz = apply_symbol1(sym::U_pow(1.0), z, Repr::physical);
        for (std::size_t i = 0; i < out.size(); ++i) {
            double m = std::norm(Uz[i]);
            CHECK(std::abs(out[i].real() - m) <= 1e-12 * (1 + m));
        }
    }
    SUBCASE("two modes") {
        // z = a e^{ik.x} + b e^{ip.x}, evaluated by hand in Fourier variables.
        const Vec3 k{2, 1, 0}, p{-1, 3, 0};
        const cplx a(0.7, -0.2), b(-0.4, 0.5);
        Field z = Field::from_function(g, [&](const Vec3& x) {
            return a * std::exp(cplx(0, dot(k, x))) + b * std::exp(cplx(0, dot(p, x)));
        });
        const double Uk = symU(k), Up = symU(p);
        const Vec3 q = p - k;
        // div(U zbar grad z) = conj(a) b Uk i p.i q e^{iqx} + conj(b) a Up i k.(-i q) e^{-iqx}
        const cplx c1 = std::conj(a) * b * Uk * (-dot(p, q)) / symH(q);
        const cplx c2 = std::conj(b) * a * Up * dot(k, q) / symH(q);
        Field out = correction_profile_2d(z);
        double err = 0.0;
        for (std::size_t i = 0; i < out.size(); ++i) {
            Vec3 x = g.x(i);
            cplx Uz = a * Uk * std::exp(cplx(0, dot(k, x))) + b * Up * std::exp(cplx(0, dot(p, x)));
            cplx w = c1 * std::exp(cplx(0, dot(q, x))) + c2 * std::exp(cplx(0, -dot(q, x)));
            cplx want = std::norm(Uz) + cplx(0, 2.0 * w.imag());
            err = std::max(err, std::abs(out[i] - want));
        }
        CHECK(err <= 1e-12);
    }
    SUBCASE("trapezoid") {
        Field f = testing::random_bandlimited(g, 3, 5);
        std::vector<double> t{0.0, 0.5, 2.0};
        Field I = trapezoid(t, {f, f, f});
        CHECK(testing::rel_diff(I, 2.0 * f.to_physical()) <= 1e-14);
        CHECK(max_abs(trapezoid({1.0}, {f})) == 0.0);
        CHECK_THROWS_AS(trapezoid({0.0, 1.0}, {f}), std::invalid_argument);
    }
}

#include "doctest.h"
#include "test_util.hpp"

#include "gpscat/norms.hpp"

using namespace gps;
using gps::testing::random_bandlimited;

TEST_CASE("Lebesgue norm of a constant") {
    Grid g = make_grid(2, 16, 3.0);
    Field c = Field::from_real_function(g, [](const Vec3&) { return -2.5; });
    for (double p : {1.0, 2.0, 3.0, 6.0}) CHECK(lp_norm(c, p) == doctest::Approx(2.5 * std::pow(9.0, 1.0 / p)));
    CHECK(lp_norm(c, INFINITY) == doctest::Approx(2.5));
}

TEST_CASE("Sobolev norm of a single mode") {
    Grid g = make_grid(3, 8, 2 * M_PI);
    Vec3 xi0{1, 2, 0};
    Field w = Field::from_function(g, [xi0](const Vec3& x) { return std::exp(cplx(0, dot(x, xi0))); });
    CHECK(sobolev_norm(w, 1.0) == doctest::Approx(bracket(xi0) * std::pow(2 * M_PI, 1.5)));
    CHECK(norm(w, NormSpec::parse("H1")) == doctest::Approx(bracket(xi0) * std::pow(2 * M_PI, 1.5)));
    CHECK(hom_sobolev_norm(w, 1.0) == doctest::Approx(std::sqrt(5.0) * std::pow(2 * M_PI, 1.5)));
}

TEST_CASE("H^{0,2} equals L^2 and the shell identity holds") {
    Grid g = make_grid(2, 32, 9.0);
    Field f = random_bandlimited(g, 12, 4);
    CHECK(sobolev_norm(f, 0.0) == doctest::Approx(lp_norm(f, 2.0)).epsilon(1e-12));
    CHECK(norm(f, NormSpec::H(0.0, 2.0)) == doctest::Approx(lp_norm(f, 2.0)).epsilon(1e-12));
    // ||f||^2 = sum_k <P_k f, f> + |mean|^2 L^d
    double acc = std::norm(mean(f)) * g.volume();
    for (double k : resolvable_shells(g)) acc += inner(littlewood_paley(f, k), f).real();
    CHECK(acc == doctest::Approx(std::pow(lp_norm(f, 2.0), 2)).epsilon(1e-10));
}

TEST_CASE("homogeneous negative order needs zero mean") {
    Grid g = make_grid(1, 32, 9.0);
    Field f = random_bandlimited(g, 8, 2);
    CHECK_THROWS_AS(hom_sobolev_norm(f, -1.0), ZeroModeError);
    CHECK(hom_sobolev_norm(project_mean_free(f), -1.0) > 0);
}

TEST_CASE("Lorentz norm") {
    Grid g = make_grid(2, 16, 5.0);
    Field f = random_bandlimited(g, 8, 8);
    for (double p : {2.0, 4.0, 6.0}) CHECK(lorentz_norm(f, p, p) == doctest::Approx(lp_norm(f, p)).epsilon(1e-12));
    // Nesting L^{p,q1} in L^{p,q2} for q1 < q2: ||f||_{p,q2} <= C ||f||_{p,q1}; for step
    // functions with this normalization the weak norm is below the strong one.
    CHECK(lorentz_norm(f, 4.0, INFINITY) <= lorentz_norm(f, 4.0, 4.0) * (1 + 1e-12));
    // Characteristic function of a set of measure m: ||1_E||_{p,q} = (p/q)^{1/q} m^{1/p}
    Field e = Field::from_real_function(g, [](const Vec3& x) { return std::abs(x[0]) < 1.0 ? 1.0 : 0.0; });
    double m = 0;
    for (auto& v : e.data()) m += v.real();
    m *= g.h() * g.h();
    CHECK(lorentz_norm(e, 4.0, 2.0) == doctest::Approx(std::sqrt(2.0) * std::pow(m, 0.25)));
}

TEST_CASE("Besov norm with q = 2, s = 0 matches L^2 up to shell overlap") {
    Grid g = make_grid(1, 64, 20.0);
    Field f = project_mean_free(random_bandlimited(g, 20, 3));
    double b = besov_norm(f, 0.0, 2.0, 2.0);
    double l2 = lp_norm(f, 2.0);
    // Overlapping smooth shells: sum chi_k^2 lies in [1/2, 1].
    CHECK(b <= l2 * (1 + 1e-12));
    CHECK(b >= l2 / std::sqrt(2.0) * (1 - 1e-12));
}

TEST_CASE("norm spec parsing") {
    CHECK(NormSpec::parse("L2").kind == NormSpec::Kind::Lp);
    CHECK(std::isinf(NormSpec::parse("Linf").p));
    CHECK(NormSpec::parse("H1,6").p == 6.0);
    CHECK(NormSpec::parse("Hdot-1").s == -1.0);
    CHECK(NormSpec::parse("B0.5,2,1").q == 1.0);
    CHECK(NormSpec::parse("Lorentz4,2").kind == NormSpec::Kind::Lorentz);
    CHECK_THROWS(NormSpec::parse("X3"));
}

#include "doctest.h"

#include <cmath>

#include "gpscat/gp_symbols.hpp"
#include "gpscat/mixed_norm.hpp"
#include "gpscat/resonance.hpp"
#include "gpscat/spectral.hpp"

using namespace gps;

namespace {

SymbolBi from_lambda(std::function<cplx(const Vec3&, const Vec3&)> f) {
    SymbolBi b;
    b.name = "test";
    b.eval = std::move(f);
    return b;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= x.size();
    my /= y.size();
    double a = 0, b = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        a += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
        b += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    }
    return a / b;
}

SymbolBi b3_piece(double a, double b, double c) {
    SymbolBi B3 = gp::B3();
    return from_lambda([=](const Vec3& e, const Vec3& z) {
        return chi_shell(norm(e + z), a) * chi_shell(norm(e), b) * chi_shell(norm(z), c) * B3(e, z);
    });
}

}  // namespace

TEST_CASE("mixed symbol norms") {
    Grid eg = make_grid(2, 16, 8.0);
    std::vector<Vec3> xs = {{0.3, 0, 0}, {1, -1, 0}, {0, 2, 0}};

    SUBCASE("zero symbol") {
        SymbolBi z = from_lambda([](const Vec3&, const Vec3&) { return cplx(0.0); });
        for (MixedFlavor f : {MixedFlavor::Hdot, MixedFlavor::Bdot21, MixedFlavor::Bdot2inf})
            CHECK(symbol_mixed_norm(z, {0.5, MixedCoords::xi_eta, f}, xs, eg) == 0.0);
    }
    SUBCASE("single eta mode") {
        // B = w(xi) e^{i eta.y0}: its transform is L^d at y0, so the value is
        // |y0|^s |w| L^{d/2} (box-normalized plane wave).
        const int ky = 3;
        Vec3 y0{ky * eg.dk(), -2 * eg.dk(), 0};
        VectorSymbol v;
        v.eval = [&](const Vec3& xi, const Vec3& eta, cplx* out) {
            out[0] = (1.0 + norm(xi)) * std::exp(cplx(0.0, dot(eta, y0)));
        };
        const double wmax = 3.0;  // 1 + |xi| at xi = (0, 2)
        for (double s : {0.0, 0.5, 1.0}) {
            double got = symbol_mixed_norm(v, {s, MixedCoords::xi_eta, MixedFlavor::Hdot}, xs, eg);
            CAPTURE(s);
            CHECK(got == doctest::Approx(std::pow(norm(y0), s) * wmax * eg.L).epsilon(1e-10));
        }
        double b21 = symbol_mixed_norm(v, {0.5, MixedCoords::xi_eta, MixedFlavor::Bdot21}, xs, eg);
        double binf = symbol_mixed_norm(v, {0.5, MixedCoords::xi_eta, MixedFlavor::Bdot2inf}, xs, eg);
        CHECK(binf <= b21);
        CHECK(b21 >= 0.5 * std::pow(norm(y0), 0.5) * wmax * eg.L / 2.0);
        CHECK(b21 <= 2.0 * std::pow(norm(y0), 0.5) * wmax * eg.L);
    }
    SUBCASE("order out of range") {
        SymbolBi one = gp::constant_one();
        CHECK_THROWS_AS(symbol_mixed_norm(one, {-0.1, MixedCoords::xi_eta, MixedFlavor::Hdot}, xs, eg),
                        std::invalid_argument);
        CHECK_THROWS_AS(symbol_mixed_norm(one, {1.01, MixedCoords::xi_eta, MixedFlavor::Hdot}, xs, eg),
                        std::invalid_argument);
        CHECK_NOTHROW(symbol_mixed_norm(one, {1.0, MixedCoords::xi_eta, MixedFlavor::Hdot}, xs, eg));
    }
    SUBCASE("zeta coordinates swap the legs") {
        auto bump = [](const Vec3& v) { return std::exp(-norm2(v - Vec3{0.5, 0, 0})); };
        SymbolBi left = from_lambda([&](const Vec3& e, const Vec3&) { return cplx(bump(e)); });
        SymbolBi right = from_lambda([&](const Vec3&, const Vec3& z) { return cplx(bump(z)); });
        double a = symbol_mixed_norm(left, {1.0, MixedCoords::xi_eta, MixedFlavor::Hdot}, xs, eg);
        double b = symbol_mixed_norm(right, {1.0, MixedCoords::xi_zeta, MixedFlavor::Hdot}, xs, eg);
        CHECK(a == doctest::Approx(b).epsilon(1e-12));
        // The sum-space norm picks the cheaper coordinate.
        double s = sum_space_norm(as_vector_symbol(left), 1.0, MixedFlavor::Hdot, xs, eg);
        CHECK(s <= a * (1 + 1e-12));
    }
    SUBCASE("frequency lattice grid") {
        Grid g = make_grid(2, 16, 10.0);
        Grid f = frequency_lattice_grid(g);
        for (std::size_t i = 0; i < g.size(); i += 7) {
            bool found = false;
            for (std::size_t j = 0; j < f.size() && !found; ++j) found = norm(f.x(j) - g.xi(i)) < 1e-12;
            CHECK(found);
        }
    }
}

TEST_CASE("time divisor scales with the low frequency and the high frequency") {
    // ZbarZbar time divisor on cells (M, l, M), s = 1: ~ l^{1/2} <M>^{-1} (<M>/M).
    auto cellnorm = [](double M, double l, double s) {
        VectorSymbol B = res::divisor_sampler(res::Interaction::conj_conj, 3, {M, l, M}, res::DivisorKind::B3);
        std::vector<Vec3> xs;
        for (double mag : {0.8, 1.0, 1.25})
            for (Vec3 d : {Vec3{1, 0, 0}, Vec3{0.6, 0.8, 0}}) xs.push_back((mag * M) * d);
        return symbol_mixed_norm(B, {s, MixedCoords::xi_eta, MixedFlavor::Hdot}, xs, make_grid(3, 16, 5 * l));
    };
    std::vector<double> ls, vl, Ms, vM;
    for (int k = -8; k <= -4; ++k) {
        ls.push_back(std::exp2(k));
        vl.push_back(cellnorm(4.0, ls.back(), 1.0));
    }
    for (int k = 1; k <= 5; ++k) {
        Ms.push_back(std::exp2(k));
        vM.push_back(cellnorm(Ms.back(), 1.0 / 16, 1.0));
    }
    CHECK(fit_slope(ls, vl) == doctest::Approx(0.5).epsilon(0.5));  // +-0.25
    CHECK(std::abs(fit_slope(Ms, vM) + 1.0) <= 0.25);
}

TEST_CASE("bilinear inequality harness") {
    SUBCASE("exponent rules") {
        CHECK(sbil_exponents_valid(1, 0.0, 2.0, 2.0));  // s = 0: Plancherel
        CHECK(sbil_exponents_valid(1, 0.5, 4.0, 4.0));
        CHECK(sbil_exponents_valid(1, 0.5, 2.0, INFINITY));
        CHECK(sbil_exponents_valid(2, 0.5, 8.0 / 3, 8.0 / 3));
        CHECK_FALSE(sbil_exponents_valid(1, 0.5, INFINITY, INFINITY));
        CHECK_FALSE(sbil_exponents_valid(1, 0.0, 4.0, 4.0));
        CHECK_FALSE(sbil_exponents_valid(2, 0.5, 2.0, 8.0));  // q2 > q(s) = 4
        CHECK_FALSE(sbil_exponents_valid(1, 0.6, 4.0, 4.0));
        CHECK_THROWS_AS(sbil_inequality_harness(gp::B3(), make_grid(1, 16, 16.0), 0.0, 3.0, 3.0),
                        std::invalid_argument);
    }
    SUBCASE("zero symbol") {
        SymbolBi z = from_lambda([](const Vec3&, const Vec3&) { return cplx(0.0); });
        SbilReport r = sbil_inequality_harness(z, make_grid(1, 16, 16.0), 0.25, 8.0 / 3, 8.0 / 3, {3, 1});
        CHECK(r.max_ratio == 0.0);
        for (double v : r.ratios) CHECK(v == 0.0);
    }
    SUBCASE("ratios are stable under refinement") {
        SymbolBi conc = from_lambda([](const Vec3& e, const Vec3& z) {
            return cplx(std::exp(-(norm2(e - Vec3{1, 0.5, 0}) + norm2(z - Vec3{-0.5, 0, 0})) / 0.25));
        });
        SymbolBi piece = b3_piece(1, 1, 1);
        for (const SymbolBi* B : {&conc, &piece})
            for (int d : {1, 2}) {
                std::vector<double> r;
                for (int n : {16, 32, d == 1 ? 64 : 0}) {
                    if (n == 0) continue;
                    double s = 0.25 * d, q = 8.0 / 3;
                    r.push_back(sbil_inequality_harness(*B, make_grid(d, n, 16.0), s, q, q, {4, 7}).max_ratio);
                }
                for (std::size_t k = 1; k < r.size(); ++k) {
                    CAPTURE(d);
                    CAPTURE(k);
                    CHECK(r[k] > 0.0);
                    CHECK(r[k] / r[k - 1] <= 2.0);
                    CHECK(r[k] / r[k - 1] >= 0.5);
                }
            }
    }
}

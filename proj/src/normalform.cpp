#include "gpscat/normalform.hpp"

#include <cmath>

#include "gpscat/fft.hpp"
#include "gpscat/multilinear.hpp"
#include "gpscat/norms.hpp"
#include "gpscat/parallel.hpp"
#include "gpscat/symbols.hpp"

namespace gps {

namespace {

// Real pair (f1, f2) interpolated to the 2n grid: spectra and samples.
struct PaddedPair {
    Grid P;
    Field a, b;               // spectral, real
    std::vector<double> x1, x2;  // physical samples
};

PaddedPair pad_pair(const Field& f1, const Field& f2) {
    const Grid& G = f1.grid();
    PaddedPair p;
    p.P = G.resampled(2 * G.n);
    p.a = interpolate_real(f1, p.P);
    p.b = interpolate_real(f2, p.P);
    std::vector<cplx> w(p.P.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = p.a[i] + cplx(0.0, 1.0) * p.b[i];
    fft::inverse(p.P, w);
    p.x1.resize(w.size());
    p.x2.resize(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        p.x1[i] = w[i].real();
        p.x2[i] = w[i].imag();
    }
    return p;
}

Field ddx(int j, const Field& f) { return apply_symbol1(sym::derivative(j), f); }

Field dp(const Field& f, const Field& g) { return dealiased_product(f, g); }

// -i <grad>^{-2} div(V)
Field minus_i_smoothed_div(const std::vector<Field>& V) {
    Field div = ddx(0, V[0]);
    for (std::size_t j = 1; j < V.size(); ++j) div += ddx(int(j), V[j]);
    Field out = apply_symbol1(sym::bracket_pow(-2.0), div).as_complex();
    out *= cplx(0.0, -1.0);
    return out;
}

Field real_spectral(const Field& f) { return (f.is_real() ? f : real_part(f)).to_spectral(); }

EquationResidual residual_from(const Field& Xp, const Field& Xm, const Field& Xn, const Field& N, double dt2,
                               double t) {
    Field Xt = (1.0 / dt2) * (Xn - Xp);
    Field R = Xt;
    R += cplx(0.0, 1.0) * apply_symbol1(sym::H(), Xm);
    R += cplx(0.0, 1.0) * N;
    EquationResidual r;
    r.t = t;
    r.l2 = lp_norm(R, 2.0);
    r.linf = max_abs(R.to_physical());
    r.scale = lp_norm(Xt, 2.0);
    return r;
}

double spacing(const StateU& p, const StateU& m, const StateU& n) {
    double d1 = m.t - p.t, d2 = n.t - m.t;
    if (!(d1 > 0.0) || std::abs(d1 - d2) > 1e-9 * d1)
        throw std::invalid_argument("equation residual: states must be equally spaced in time");
    return d1 + d2;
}

}  // namespace

//----------------------------------------------------------------------------
// Energy points and the distance
//----------------------------------------------------------------------------
EnergyPoint EnergyPoint::from(const Field& f) { return from(real_part(f), imag_part(f)); }

EnergyPoint EnergyPoint::from(const Field& f1, const Field& f2) {
    Field a = real_spectral(f1), b = real_spectral(f2);
    EnergyPoint e;
    e.f = a.as_complex();
    e.f.axpy(cplx(0.0, 1.0), b);
    e.modsq = modulus_sq(a, b);
    e.q = 2.0 * a;
    e.q += e.modsq;
    return e;
}

Field EnergyPoint::re() const { return real_part(f).to_spectral(); }
Field EnergyPoint::im() const { return imag_part(f).to_spectral(); }

MappingTerms energy_mapping_terms(const EnergyPoint& f, const EnergyPoint& g) {
    if (f.f.grid() != g.f.grid()) throw GridError("energy_mapping: grid mismatch");
    PaddedPair F = pad_pair(f.re(), f.im()), Gp = pad_pair(g.re(), g.im());
    const Grid& P = F.P;
    const std::size_t N = P.size();
    const double inv_vol = 1.0 / P.volume(), hd = std::pow(P.h(), P.d);

    std::vector<cplx> m(N);
    std::vector<double> qd(N);
    for (std::size_t i = 0; i < N; ++i) {
        double mf = F.x1[i] * F.x1[i] + F.x2[i] * F.x2[i];
        double mg = Gp.x1[i] * Gp.x1[i] + Gp.x2[i] * Gp.x2[i];
        double d = mf + 2.0 * F.x1[i] - mg - 2.0 * Gp.x1[i];
        qd[i] = d * d;
        m[i] = mf - mg;
    }
    fft::forward(P, m);
    std::vector<double> grad(N), h1(N), uu(N);
    for (std::size_t i = 0; i < N; ++i) {
        double r2 = norm2(P.xi(i)), b2 = 2.0 + r2;
        cplx d1 = F.a[i] - Gp.a[i], d2 = F.b[i] - Gp.b[i];
        grad[i] = r2 * (std::norm(d1) + std::norm(d2));
        cplx dz = d1 + m[i] / b2 + cplx(0.0, 1.0) * std::sqrt(r2 / b2) * d2;
        h1[i] = b2 * std::norm(dz);
        uu[i] = r2 / b2 * std::norm(m[i]);
    }
    MappingTerms t;
    t.delta_sq = pairwise_sum(grad.data(), N) * inv_vol + 0.5 * pairwise_sum(qd.data(), N) * hd;
    t.h1_sq = pairwise_sum(h1.data(), N) * inv_vol;
    t.u_sq = pairwise_sum(uu.data(), N) * inv_vol;
    t.residual = std::abs(t.delta_sq - t.h1_sq - 0.5 * t.u_sq) / (1.0 + t.delta_sq);
    return t;
}

double delta_distance(const EnergyPoint& f, const EnergyPoint& g) {
    return std::sqrt(energy_mapping_terms(f, g).delta_sq);
}

double energy_mapping_check(const EnergyPoint& f, const EnergyPoint& g) {
    return energy_mapping_terms(f, g).residual;
}

//----------------------------------------------------------------------------
// Inverse of M
//----------------------------------------------------------------------------
std::pair<EnergyPoint, FixedPointReport> inverse_R(const Field& f, const InverseOptions& opt) {
    Field f1 = real_part(f).to_spectral(), f2 = imag_part(f).to_spectral();
    FixedPointReport rep;
    rep.l6_norm = lp_norm(f, 6.0);
    rep.small = rep.l6_norm <= opt.kappa;

    // f2 can be pure rounding noise, so its mean is judged against all of f.
    const double f_l2 = lp_norm(f, 2.0);
    if (f_l2 > 0.0 && std::abs(f2[0]) / std::sqrt(f2.grid().volume()) <= opt.zero_mode.rel_tol * f_l2) f2[0] = 0.0;
    Field g2 = apply_symbol1(sym::U_pow(-1.0), f2, Repr::spectral, opt.zero_mode).as_real();
    Field g2sq = dp(g2, g2);
    Symbol1 smooth = sym::bracket_pow(-2.0);
    auto Rf = [&](const Field& g1) {
        Field s = dp(g1, g1);
        s += g2sq;
        Field out = f1;
        out -= apply_symbol1(smooth, s);
        return out.as_real();
    };

    Field g1 = f1;
    double prev = 0.0;
    for (int k = 1; k <= opt.max_iter; ++k) {
        Field next = Rf(g1);
        double diff = sobolev_norm(next - g1, 1.0);
        rep.history.push_back(diff);
        rep.iterations = k;
        rep.residual = diff;
        if (k > 1 && prev > 0.0) rep.contraction = diff / prev;
        if (diff <= opt.tol) {
            rep.converged = true;
            break;
        }
        if (!std::isfinite(diff)) break;
        prev = diff;
        g1 = next;
    }
    return {EnergyPoint::from(g1, g2), rep};
}

double inverse_lipschitz_ratio(const Field& f, const Field& g, const InverseOptions& opt) {
    auto rf = inverse_R(f, opt), rg = inverse_R(g, opt);
    if (!rf.second.converged || !rg.second.converged)
        throw std::runtime_error("inverse_lipschitz_ratio: fixed point did not converge");
    double num = delta_distance(rf.first, rg.first);
    double den = sobolev_norm(f - g, 1.0);
    return den > 0.0 ? num / den : 0.0;
}

//----------------------------------------------------------------------------
// Nonlinearities of the z equation
//----------------------------------------------------------------------------
Field nonlinearity_NO(const Field& u1_in, const Field& u2_in) {
    Field u1 = real_spectral(u1_in), u2 = real_spectral(u2_in);
    const int d = u1.grid().d;
    Field m = modulus_sq(u1, u2);
    Field poly = 2.0 * dp(u1, u1);
    poly += dp(m, u1);
    Field out = apply_symbol1(sym::U_pow(1.0), poly).as_complex();

    Field cubic = dp(m, u2);
    std::vector<Field> V;
    for (int j = 0; j < d; ++j) {
        Field v = 4.0 * dp(u1, ddx(j, u2));
        v += ddx(j, cubic);
        V.push_back(v);
    }
    out += minus_i_smoothed_div(V);
    return out;
}

std::pair<Field, Field> nonlinearity_NO_split(const Field& u1_in, const Field& u2_in) {
    Field u1 = real_spectral(u1_in), u2 = real_spectral(u2_in);
    const int d = u1.grid().d;
    Field m = modulus_sq(u1, u2);
    Field q = 2.0 * u1;
    q += m;
    Field u1sq = dp(u1, u1), u2sq = dp(u2, u2);

    Field poly = dp(q, q);
    poly -= dp(m, m);
    poly -= 2.0 * dp(u1sq, u1);
    Field n1 = apply_symbol1(sym::U_pow(1.0), poly).as_complex();
    n1 *= 0.5;
    std::vector<Field> V1, V2;
    for (int j = 0; j < d; ++j) {
        Field d1 = ddx(j, u1), d2 = ddx(j, u2);
        Field w = 2.0 * dp(q, d2);
        w += 2.0 * dp(u1, dp(u2, d1));
        w -= dp(u1sq, d2);
        V1.push_back(w);
        V2.push_back(dp(u2sq, d2));
    }
    n1 += minus_i_smoothed_div(V1);

    Field n2 = apply_symbol1(sym::U_pow(1.0), dp(u2sq, u1)).as_complex();
    n2 *= -1.0;
    n2 += minus_i_smoothed_div(V2);
    return {n1, n2};
}

EquationResidual z_equation_residual(const StateU& p, const StateU& m, const StateU& n) {
    double dt2 = spacing(p, m, n);
    Field zp = transform_M(p.u1, p.u2), zm = transform_M(m.u1, m.u2), zn = transform_M(n.u1, n.u2);
    return residual_from(zp, zm, zn, nonlinearity_NO(m.u1, m.u2), dt2, m.t);
}

EquationResidual Z_equation_residual(const StateU& p, const StateU& m, const StateU& n, const NZOptions& opt) {
    double dt2 = spacing(p, m, n);
    Field Zp = transform_Z(p.u1, p.u2), Zm = transform_Z(m.u1, m.u2), Zn = transform_Z(n.u1, n.u2);
    Field N = nonlinearity_NZ(make_v(m.u1, m.u2), m.u1, m.u2, opt);
    return residual_from(Zp, Zm, Zn, N, dt2, m.t);
}

}  // namespace gps

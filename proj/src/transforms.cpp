#include "gpscat/transforms.hpp"

#include "gpscat/fft.hpp"
#include "gpscat/lowrank.hpp"
#include "gpscat/norms.hpp"

namespace gps {

namespace {

const ZeroModePolicy kRelaxed{std::numeric_limits<double>::infinity()};

Field spec_real(const Field& f) { return f.to_spectral(); }

bool nyquist_free_pair(const Field& a, const Field& b) {
    const Grid& G = a.grid();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0 && b[i] == 0.0) continue;
        Index3 k = G.wave_index(i);
        for (int j = 0; j < G.d; ++j)
            if (k[j] == -G.n / 2) return false;
    }
    return true;
}

}  // namespace

Field make_v(const Field& u1, const Field& u2) {
    Field a = spec_real(u1);
    Field b = apply_symbol1(sym::U_pow(1.0), u2, Repr::spectral);
    Field v = a.as_complex();
    v.axpy(cplx(0.0, 1.0), b);
    return v;
}

Field modulus_sq(const Field& u1, const Field& u2) {
    Field a = spec_real(u1), b = spec_real(u2);
    Field s = dealiased_product(a, a);
    s += dealiased_product(b, b);
    return s.as_real();
}

//----------------------------------------------------------------------------
// b(u) through the low-rank resolvent factorization:
//   b = sum_r [(phi_r u2)^2 - (phi_r u1)^2]
//----------------------------------------------------------------------------
Field symbol_b(const Field& u1, const Field& u2) {
    Field a = spec_real(u1), b = spec_real(u2);
    const Grid& G = a.grid();
    if (b.grid() != G) throw GridError("symbol_b: grid mismatch");
    const Grid P = G.resampled(2 * G.n);
    auto legs = gp::resolvent_legs(G);
    const std::size_t NP = P.size();
    std::vector<cplx> acc(NP);
    const bool pack = nyquist_free_pair(a, b);
    for (const Symbol1& phi : legs) {
        Field pa = apply_symbol1(phi, a), pb = apply_symbol1(phi, b);
        if (pack) {
            Field w = resample_spectral(pa, P);
            Field wb = resample_spectral(pb, P);
            auto& W = w.mutable_data();
            for (std::size_t i = 0; i < NP; ++i) W[i] += cplx(0.0, 1.0) * wb[i];
            fft::inverse(P, W);
            for (std::size_t i = 0; i < NP; ++i) acc[i] -= (W[i] * W[i]).real();
        } else {
            Field wa = resample_spectral(pa, P), wb = resample_spectral(pb, P);
            auto& A = wa.mutable_data();
            auto& B = wb.mutable_data();
            fft::inverse(P, A);
            fft::inverse(P, B);
            for (std::size_t i = 0; i < NP; ++i) acc[i] += B[i] * B[i] - A[i] * A[i];
        }
    }
    fft::forward(P, acc);
    Field out(P, Repr::spectral, ValueKind::real, std::move(acc));
    out = resample_spectral(out, G);
    drop_nyquist(out);
    return out;
}

Field symbol_b_direct(const Field& u1, const Field& u2) {
    auto K = gp::resolvent_symbol();
    Field r = bilinear_apply_direct(K, u2, u2);
    r -= bilinear_apply_direct(K, u1, u1);
    return r.as_real();
}

Field transform_M(const Field& u1, const Field& u2) {
    Field z = make_v(u1, u2);
    z += apply_symbol1(sym::bracket_pow(-2.0), modulus_sq(u1, u2));
    return z.as_complex();
}

Field transform_Z(const Field& u1, const Field& u2) {
    Field Z = make_v(u1, u2);
    Z += symbol_b(u1, u2);
    return Z.as_complex();
}

Field nonlinearity_Nv(const Field& u1, const Field& u2) {
    Field a = spec_real(u1), b = spec_real(u2);
    Field q = modulus_sq(a, b);
    Field re = 3.0 * dealiased_product(a, a);
    re += dealiased_product(b, b);
    re += dealiased_product(q, a);
    Field im = 2.0 * dealiased_product(a, b);
    im += dealiased_product(q, b);
    Field out = apply_symbol1(sym::U_pow(1.0), re).as_complex();
    out.axpy(cplx(0.0, 1.0), im);
    return out;
}

Field quartic_Q1(const Field& u1, const Field& u2) {
    Field a = spec_real(u1), b = spec_real(u2);
    Field q = modulus_sq(a, b);
    Field qa = dealiased_product(q, a), qb = dealiased_product(q, b);
    auto L = gp::Q1_left();
    Field r = bilinear_apply(L, a, qb);
    r += bilinear_apply(L, b, qa);
    return r.as_real();
}

Field NZTerms::total() const {
    Field t = B3.as_complex();
    for (const Field* f : {&B4, &C1, &C2, &C3, &C4, &Q1}) t += *f;
    return t;
}

NZTerms nonlinearity_NZ_terms(const Field& v, const Field& u1, const Field& u2, const NZOptions& opt) {
    Field vs = v.to_spectral();
    Field v1 = real_part(vs).to_spectral();
    Field v2 = imag_part(vs).to_spectral();
    Field chk = make_v(u1, u2);
    double scale = std::max(1.0, max_abs(chk));
    if (max_abs_diff(chk, vs) > opt.consistency_tol * scale)
        throw std::invalid_argument("nonlinearity_NZ: v is not u1 + i U u2");

    NZTerms t;
    SymbolBi b3 = opt.printed_B3 ? gp::B3_printed() : gp::B3();
    t.B3 = bilinear_apply(b3, v1, v1).as_complex();
    t.B4 = bilinear_apply(gp::B4(opt.B4_sign), v2, v2).as_complex();
    t.C1 = trilinear_apply(gp::C1(), v1, v1, v1).as_complex();
    // The U^{-1} v2 legs are fed u2 directly: on a torus v2 = U u2 has lost
    // the mean of u2, which the cubic terms still see.
    Field w2 = spec_real(u2);
    t.C2 = trilinear_apply(gp::C1(), w2, w2, v1).as_complex();
    const cplx I(0.0, 1.0);
    t.C3 = I * trilinear_apply(gp::Cprime3(), v1, v1, w2).as_complex();
    t.C4 = I * trilinear_apply(gp::Cprime4(), w2, w2, w2).as_complex();
    t.Q1 = I * quartic_Q1(u1, u2).as_complex();
    return t;
}

Field nonlinearity_NZ(const Field& v, const Field& u1, const Field& u2, const NZOptions& opt) {
    return nonlinearity_NZ_terms(v, u1, u2, opt).total();
}

}  // namespace gps

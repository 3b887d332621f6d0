#include "gpscat/multilinear.hpp"

#include <limits>
#include <map>

#include "gpscat/fft.hpp"
#include "gpscat/parallel.hpp"

namespace gps {

namespace {

void require_same_box(const Grid& a, const Grid& b, const char* what) {
    if (a.d != b.d || a.L != b.L) throw GridError(std::string(what) + ": fields live on different boxes");
}

int padded_size(int a, int b, int out) {
    int need = std::max({a, b, out, (a + b + out + 1) / 2});
    int p = 8;
    while (p < need) p *= 2;
    return p;
}

bool nyquist_free(const Field& s) {
    const Grid& G = s.grid();
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == 0.0) continue;
        Index3 k = G.wave_index(i);
        for (int a = 0; a < G.d; ++a)
            if (k[a] == -G.n / 2) return false;
    }
    return true;
}

// Spectral field on its own lattice -> physical samples on grid P.
std::vector<cplx> to_padded_physical(const Field& spec, const Grid& P) {
    Field r = resample_spectral(spec, P);
    std::vector<cplx> v = std::move(r.mutable_data());
    fft::inverse(P, v);
    return v;
}

bool is_zero_wave(const Index3& k) { return k[0] == 0 && k[1] == 0 && k[2] == 0; }

}  // namespace

void drop_nyquist(Field& f) {
    const Grid& G = f.grid();
    const int half = G.n / 2;
    for (std::size_t i = 0; i < f.size(); ++i) {
        Index3 m = G.unflatten(i);
        for (int a = 0; a < G.d; ++a)
            if (m[a] == half) {
                f[i] = 0.0;
                break;
            }
    }
}

Field resample_spectral(const Field& f, const Grid& target) {
    Field s = f.to_spectral();
    const Grid& G = s.grid();
    require_same_box(G, target, "resample_spectral");
    Field out(target, Repr::spectral, s.kind());
    if (G == target) return s;
    if (target.n >= G.n) {
        for (std::size_t i = 0; i < s.size(); ++i) out[target.flat_of_wave(G.wave_index(i))] = s[i];
    } else {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = s[G.flat_of_wave(target.wave_index(i))];
    }
    return out;
}

Field interpolate_real(const Field& f, const Grid& target) {
    Field s = f.to_spectral();
    const Grid& G = s.grid();
    require_same_box(G, target, "interpolate_real");
    if (target.n < G.n) throw GridError("interpolate_real: target is coarser");
    if (G == target) return s;
    Field out(target, Repr::spectral, s.kind());
    const int half = G.n / 2;
    for (std::size_t i = 0; i < s.size(); ++i) {
        Index3 k = G.wave_index(i);
        int split[3], ns = 0;
        for (int a = 0; a < G.d; ++a)
            if (k[a] == -half) split[ns++] = a;
        const cplx c = s[i] / double(1 << ns);
        for (int mask = 0; mask < (1 << ns); ++mask) {
            Index3 kk = k;
            for (int b = 0; b < ns; ++b)
                if (mask & (1 << b)) kk[split[b]] = half;
            out[target.flat_of_wave(kk)] += c;
        }
    }
    return out;
}

//----------------------------------------------------------------------------
// Direct pair sum
//----------------------------------------------------------------------------
Field bilinear_apply_direct(const SymbolBi& B, const Field& f, const Field& g, std::optional<Grid> out,
                            const ZeroModePolicy& pol) {
    Field fs = f.to_spectral(), gs = g.to_spectral();
    const Grid& Gf = fs.grid();
    const Grid& Gg = gs.grid();
    require_same_box(Gf, Gg, "bilinear_apply_direct");
    Grid Go = out.value_or(Gf);
    require_same_box(Gf, Go, "bilinear_apply_direct");
    if (B.singular_leg1) check_zero_mode(fs, pol, "bilinear " + B.name + " leg 1");
    if (B.singular_leg2) check_zero_mode(gs, pol, "bilinear " + B.name + " leg 2");

    struct Leg {
        Index3 k;
        Vec3 xi;
        cplx v;
    };
    std::vector<Leg> legs;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        if (fs[i] == 0.0) continue;
        Index3 k = Gf.wave_index(i);
        if (B.singular_leg1 && is_zero_wave(k)) continue;
        legs.push_back({k, Gf.xi(i), fs[i]});
    }
    const double dk = Gf.dk();
    const bool real_out = f.is_real() && g.is_real() && B.preserves_real;
    Field res(Go, Repr::spectral, real_out ? ValueKind::real : ValueKind::complex);
    auto& R = res.mutable_data();
    const double inv_vol = 1.0 / Gf.volume();

    parallel_for(Go.size(), [&](std::size_t b, std::size_t e) {
        std::vector<cplx> terms;
        terms.reserve(legs.size());
        for (std::size_t o = b; o < e; ++o) {
            Index3 ko = Go.wave_index(o);
            if (B.singular_sum && is_zero_wave(ko)) {
                R[o] = 0.0;
                continue;
            }
            terms.clear();
            for (const Leg& l : legs) {
                Index3 k2{ko[0] - l.k[0], ko[1] - l.k[1], ko[2] - l.k[2]};
                if (!Gg.in_lattice(k2)) continue;
                if (B.singular_leg2 && is_zero_wave(k2)) continue;
                cplx v2 = gs[Gg.flat_of_wave(k2)];
                if (v2 == 0.0) continue;
                Vec3 xi2{dk * k2[0], dk * k2[1], dk * k2[2]};
                terms.push_back(B(l.xi, xi2) * l.v * v2);
            }
            R[o] = pairwise_sum(terms.data(), terms.size()) * inv_vol;
        }
    }, 16);
    if (real_out) drop_nyquist(res);
    return res;
}

//----------------------------------------------------------------------------
// Separable fast path
//----------------------------------------------------------------------------
Field bilinear_apply_fast(const SymbolBi& B, const Field& f, const Field& g, std::optional<Grid> out,
                          const ZeroModePolicy& pol) {
    if (!B.has_fast_path()) throw std::invalid_argument("bilinear_apply_fast: " + B.name + " is not separable");
    Field fs = f.to_spectral(), gs = g.to_spectral();
    const Grid& Gf = fs.grid();
    const Grid& Gg = gs.grid();
    require_same_box(Gf, Gg, "bilinear_apply_fast");
    Grid Go = out.value_or(Gf);
    require_same_box(Gf, Go, "bilinear_apply_fast");
    if (B.singular_leg1) check_zero_mode(fs, pol, "bilinear " + B.name + " leg 1");
    if (B.singular_leg2) check_zero_mode(gs, pol, "bilinear " + B.name + " leg 2");

    const Grid leg_lattice = Gf.n >= Gg.n ? Gf : Gg;
    const std::vector<SepTerm> terms = B.separable(leg_lattice);
    const Grid P = Gf.resampled(padded_size(Gf.n, Gg.n, Go.n));
    const bool same_input = &f == &g || (Gf == Gg && fs.data() == gs.data());
    const bool real_inputs = f.is_real() && g.is_real();
    const bool pack_ok = real_inputs && nyquist_free(fs) && nyquist_free(gs);
    const ZeroModePolicy relaxed{std::numeric_limits<double>::infinity()};

    struct Acc {
        Symbol1 outer;
        std::vector<cplx> sum;
    };
    std::map<std::string, Acc> accs;
    const std::size_t NP = P.size();

    for (const SepTerm& t : terms) {
        // Zero-mode policy already enforced on the inputs above.
        Field a = apply_symbol1(t.leg1, fs, Repr::spectral, relaxed);
        std::vector<cplx> prod;
        if (same_input && t.leg1.name == t.leg2.name) {
            prod = to_padded_physical(a, P);
            for (auto& v : prod) v *= v;
        } else {
            Field b = apply_symbol1(t.leg2, gs, Repr::spectral, relaxed);
            if (pack_ok && t.leg1.preserves_real && t.leg2.preserves_real) {
                Field ap = resample_spectral(a, P), bp = resample_spectral(b, P);
                prod = std::move(ap.mutable_data());
                for (std::size_t i = 0; i < NP; ++i) prod[i] += cplx(0.0, 1.0) * bp[i];
                fft::inverse(P, prod);
                for (auto& v : prod) v = v.real() * v.imag();
            } else {
                prod = to_padded_physical(a, P);
                std::vector<cplx> pb = to_padded_physical(b, P);
                for (std::size_t i = 0; i < NP; ++i) prod[i] *= pb[i];
            }
        }
        auto it = accs.find(t.outer.name);
        if (it == accs.end()) it = accs.emplace(t.outer.name, Acc{t.outer, std::vector<cplx>(NP)}).first;
        auto& s = it->second.sum;
        for (std::size_t i = 0; i < NP; ++i) s[i] += t.coeff * prod[i];
    }

    const bool real_out = real_inputs && B.preserves_real;
    Field res(Go, Repr::spectral, real_out ? ValueKind::real : ValueKind::complex);
    for (auto& [name, acc] : accs) {
        fft::forward(P, acc.sum);
        Field part(P, Repr::spectral, ValueKind::complex, std::move(acc.sum));
        part = resample_spectral(part, Go);
        part = apply_symbol1(acc.outer, part, Repr::spectral, relaxed);
        res += part;
    }
    if (B.singular_sum) res[0] = 0.0;
    if (!real_out) return res;
    drop_nyquist(res);
    return res.as_real();
}

Field bilinear_apply(const SymbolBi& B, const Field& f, const Field& g, std::optional<Grid> out,
                     const ZeroModePolicy& pol) {
    return B.has_fast_path() ? bilinear_apply_fast(B, f, g, out, pol) : bilinear_apply_direct(B, f, g, out, pol);
}

Field dealiased_product(const Field& f, const Field& g, std::optional<Grid> out) {
    Field fs = f.to_spectral(), gs = g.to_spectral();
    const Grid& Gf = fs.grid();
    const Grid& Gg = gs.grid();
    require_same_box(Gf, Gg, "dealiased_product");
    Grid Go = out.value_or(Gf);
    const Grid P = Gf.resampled(padded_size(Gf.n, Gg.n, Go.n));
    std::vector<cplx> a = to_padded_physical(fs, P);
    if (&f == &g) {
        for (auto& v : a) v *= v;
    } else {
        std::vector<cplx> b = to_padded_physical(gs, P);
        for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
    }
    fft::forward(P, a);
    bool real_out = f.is_real() && g.is_real();
    Field prod(P, Repr::spectral, real_out ? ValueKind::real : ValueKind::complex, std::move(a));
    Field res = resample_spectral(prod, Go);
    if (real_out) drop_nyquist(res);
    return res;
}

Field exact_product(const Field& f, const Field& g) {
    Grid Gf = f.grid();
    int n = std::max(Gf.n, g.grid().n);
    return dealiased_product(f, g, Gf.resampled(2 * n));
}

//----------------------------------------------------------------------------
// Trilinear
//----------------------------------------------------------------------------
Field trilinear_apply(const SymbolTri& C, const Field& f, const Field& g, const Field& h, std::optional<Grid> out,
                      const ZeroModePolicy& pol) {
    if (C.plan.empty()) throw std::invalid_argument("trilinear_apply: " + C.name + " has no grouping plan");
    Field in[3] = {f.to_spectral(), g.to_spectral(), h.to_spectral()};
    for (int i = 0; i < 3; ++i)
        if (C.singular_leg[i]) check_zero_mode(in[i], pol, "trilinear " + C.name + " leg " + std::to_string(i + 1));
    Grid Go = out.value_or(in[0].grid());
    const ZeroModePolicy relaxed{std::numeric_limits<double>::infinity()};
    bool real_in = f.is_real() && g.is_real() && h.is_real();
    for (const TriTerm& t : C.plan)
        real_in = real_in && t.leg1.preserves_real && t.leg2.preserves_real && t.leg3.preserves_real &&
                  t.outer.preserves_real && (!t.pair || t.pair->preserves_real);
    Field res(Go, Repr::spectral, ValueKind::complex);
    for (const TriTerm& t : C.plan) {
        Field a = apply_symbol1(t.leg1, in[0], Repr::spectral, relaxed);
        Field b = apply_symbol1(t.leg2, in[1], Repr::spectral, relaxed);
        Field c = apply_symbol1(t.leg3, in[2], Repr::spectral, relaxed);
        Field part;
        if (t.group == TriTerm::Group::first_two) {
            Field p = exact_product(a, b);
            part = t.pair ? bilinear_apply(*t.pair, p, c, Go, relaxed) : dealiased_product(p, c, Go);
        } else {
            Field p = exact_product(b, c);
            part = t.pair ? bilinear_apply(*t.pair, a, p, Go, relaxed) : dealiased_product(a, p, Go);
        }
        part = apply_symbol1(t.outer, part, Repr::spectral, relaxed);
        res.axpy(t.coeff, part);
    }
    if (!real_in) return res;
    drop_nyquist(res);
    return res.as_real();
}

Field trilinear_apply_direct(const SymbolTri& C, const Field& f, const Field& g, const Field& h,
                             std::optional<Grid> out, const ZeroModePolicy& pol) {
    Field fs = f.to_spectral(), gs = g.to_spectral(), hs = h.to_spectral();
    const Grid& Gf = fs.grid();
    require_same_box(Gf, gs.grid(), "trilinear_apply_direct");
    require_same_box(Gf, hs.grid(), "trilinear_apply_direct");
    Grid Go = out.value_or(Gf);
    const Field* in[3] = {&fs, &gs, &hs};
    for (int i = 0; i < 3; ++i)
        if (C.singular_leg[i]) check_zero_mode(*in[i], pol, "trilinear " + C.name + " leg " + std::to_string(i + 1));

    struct Leg {
        Index3 k;
        Vec3 xi;
        cplx v;
    };
    auto collect = [&](const Field& s, bool sing) {
        std::vector<Leg> legs;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == 0.0) continue;
            Index3 k = s.grid().wave_index(i);
            if (sing && is_zero_wave(k)) continue;
            legs.push_back({k, s.grid().xi(i), s[i]});
        }
        return legs;
    };
    auto l1 = collect(fs, C.singular_leg[0]);
    auto l2 = collect(gs, C.singular_leg[1]);
    const Grid& Gh = hs.grid();
    const double dk = Gf.dk();
    const double scale = 1.0 / (Gf.volume() * Gf.volume());
    Field res(Go, Repr::spectral, ValueKind::complex);
    auto& R = res.mutable_data();
    parallel_for(Go.size(), [&](std::size_t b, std::size_t e) {
        std::vector<cplx> terms;
        for (std::size_t o = b; o < e; ++o) {
            Index3 ko = Go.wave_index(o);
            terms.clear();
            for (const Leg& a : l1)
                for (const Leg& c : l2) {
                    Index3 k3{ko[0] - a.k[0] - c.k[0], ko[1] - a.k[1] - c.k[1], ko[2] - a.k[2] - c.k[2]};
                    if (!Gh.in_lattice(k3)) continue;
                    if (C.singular_leg[2] && is_zero_wave(k3)) continue;
                    cplx v3 = hs[Gh.flat_of_wave(k3)];
                    if (v3 == 0.0) continue;
                    Vec3 xi3{dk * k3[0], dk * k3[1], dk * k3[2]};
                    terms.push_back(C(a.xi, c.xi, xi3) * a.v * c.v * v3);
                }
            R[o] = pairwise_sum(terms.data(), terms.size()) * scale;
        }
    }, 4);
    bool real_in = f.is_real() && g.is_real() && h.is_real();
    if (!real_in) return res;
    drop_nyquist(res);
    return res.as_real();
}

}  // namespace gps

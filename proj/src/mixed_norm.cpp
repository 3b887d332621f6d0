#include "gpscat/mixed_norm.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "gpscat/fft.hpp"
#include "gpscat/norms.hpp"
#include "gpscat/parallel.hpp"
#include "gpscat/spectral.hpp"

namespace gps {

VectorSymbol as_vector_symbol(const SymbolBi& B) {
    VectorSymbol v;
    v.components = 1;
    v.eval = [B](const Vec3& xi, const Vec3& eta, cplx* out) { out[0] = B(eta, xi - eta); };
    return v;
}

const char* to_string(MixedFlavor f) {
    switch (f) {
        case MixedFlavor::Hdot: return "Hdot";
        case MixedFlavor::Bdot21: return "Bdot21";
        case MixedFlavor::Bdot2inf: return "Bdot2inf";
    }
    return "?";
}

MixedFlavor mixed_flavor_from_string(const std::string& s) {
    if (s == "Hdot") return MixedFlavor::Hdot;
    if (s == "Bdot21") return MixedFlavor::Bdot21;
    if (s == "Bdot2inf") return MixedFlavor::Bdot2inf;
    throw std::invalid_argument("unknown mixed-norm flavor: " + s);
}

Grid frequency_lattice_grid(const Grid& g) { return make_grid(g.d, g.n, g.n * g.dk()); }

namespace {

void check_order(double s, int d) {
    if (!(s >= 0.0 && s <= 0.5 * d))
        throw std::invalid_argument("mixed norm: order s must lie in [0, d/2], got " + std::to_string(s));
}

// Per-y weights of the chosen flavor: |y|^{2s} for Hdot, squared shell
// multipliers (one row per shell) for the Besov flavors.
struct Weights {
    std::vector<double> hdot;
    std::vector<double> shells;
    std::vector<std::vector<double>> shell_sq;
};

Weights make_weights(const Grid& g, const MixedNormSpec& spec) {
    Weights w;
    const std::size_t N = g.size();
    if (spec.flavor == MixedFlavor::Hdot) {
        w.hdot.resize(N);
        for (std::size_t i = 0; i < N; ++i) {
            double r = norm(g.xi(i));
            w.hdot[i] = spec.s == 0.0 ? 1.0 : std::pow(r, 2.0 * spec.s);
        }
    } else {
        w.shells = resolvable_shells(g);
        for (double k : w.shells) {
            std::vector<double> row(N);
            for (std::size_t i = 0; i < N; ++i) {
                double c = chi_shell(norm(g.xi(i)), k);
                row[i] = c * c;
            }
            w.shell_sq.push_back(std::move(row));
        }
    }
    return w;
}

double measure(const std::vector<std::vector<cplx>>& F, const Grid& g, const MixedNormSpec& spec, const Weights& w) {
    const std::size_t N = g.size();
    const double inv_vol = 1.0 / g.volume();
    std::vector<double> acc(N);
    auto weighted = [&](const std::vector<double>& wt) {
        for (std::size_t i = 0; i < N; ++i) {
            double e = 0.0;
            for (const auto& f : F) e += std::norm(f[i]);
            acc[i] = wt[i] * e;
        }
        return pairwise_sum(acc.data(), N) * inv_vol;
    };
    if (spec.flavor == MixedFlavor::Hdot) return std::sqrt(weighted(w.hdot));
    double total = 0.0;
    for (std::size_t k = 0; k < w.shells.size(); ++k) {
        double v = std::pow(w.shells[k], spec.s) * std::sqrt(weighted(w.shell_sq[k]));
        total = spec.flavor == MixedFlavor::Bdot21 ? total + v : std::max(total, v);
    }
    return total;
}

}  // namespace

double symbol_mixed_norm(const VectorSymbol& B, const MixedNormSpec& spec, const std::vector<Vec3>& xi_samples,
                         const Grid& g) {
    check_order(spec.s, g.d);
    if (B.components < 1 || !B.eval) throw std::invalid_argument("mixed norm: empty symbol");
    const std::size_t N = g.size();
    const int C = B.components;
    const Weights w = make_weights(g, spec);
    std::vector<double> per(xi_samples.size(), 0.0);
    parallel_for(xi_samples.size(), [&](std::size_t b, std::size_t e) {
        std::vector<std::vector<cplx>> F(C, std::vector<cplx>(N));
        std::vector<cplx> buf(C);
        for (std::size_t q = b; q < e; ++q) {
            const Vec3& xi = xi_samples[q];
            for (std::size_t i = 0; i < N; ++i) {
                Vec3 p = g.x(i);
                Vec3 eta = spec.coords == MixedCoords::xi_eta ? p : xi - p;
                B.eval(xi, eta, buf.data());
                for (int c = 0; c < C; ++c) F[c][i] = buf[c];
            }
            for (auto& f : F) fft::forward(g, f);
            per[q] = measure(F, g, spec, w);
        }
    }, 1);
    double best = 0.0;
    for (double v : per) best = std::max(best, v);
    return best;
}

double symbol_mixed_norm(const SymbolBi& B, const MixedNormSpec& spec, const std::vector<Vec3>& xi_samples,
                         const Grid& g) {
    return symbol_mixed_norm(as_vector_symbol(B), spec, xi_samples, g);
}

double sum_space_norm(const VectorSymbol& B, double s, MixedFlavor flavor, const std::vector<Vec3>& xi_samples,
                      const Grid& g) {
    double a = symbol_mixed_norm(B, {s, MixedCoords::xi_eta, flavor}, xi_samples, g);
    double b = symbol_mixed_norm(B, {s, MixedCoords::xi_zeta, flavor}, xi_samples, g);
    return std::min(a, b);
}

//----------------------------------------------------------------------------
// Harness
//----------------------------------------------------------------------------
bool sbil_exponents_valid(int d, double s, double q1, double q2) {
    if (!(s >= 0.0 && s <= 0.5 * d)) return false;
    double inv_qs = 0.5 - s / d;
    auto inv = [](double q) { return std::isinf(q) ? 0.0 : 1.0 / q; };
    if (!(q1 >= 2.0) || !(q2 >= 2.0)) return false;
    if (inv(q1) < inv_qs - 1e-12 || inv(q2) < inv_qs - 1e-12) return false;
    return std::abs(inv(q1) + inv(q2) - 0.5 - inv_qs) <= 1e-12;
}

namespace {

double uniform01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

Field random_bump_field(const Grid& g, std::mt19937_64& rng, const SbilOptions& opt) {
    struct Bump {
        double amp, width, phase;
        Vec3 center, k;
    };
    std::vector<Bump> bumps(opt.bumps);
    for (auto& b : bumps) {
        b.amp = (0.5 + uniform01(rng)) * (uniform01(rng) < 0.5 ? -1.0 : 1.0);
        b.width = opt.width * g.L / 8.0 * (0.7 + 0.6 * uniform01(rng));
        b.phase = 2.0 * M_PI * uniform01(rng);
        b.center = {0, 0, 0};
        b.k = {0, 0, 0};
        for (int a = 0; a < g.d; ++a) {
            b.center[a] = (uniform01(rng) - 0.5) * 0.5 * g.L;
            b.k[a] = 3.0 * (2.0 * uniform01(rng) - 1.0);
        }
    }
    return Field::from_real_function(g, [&](const Vec3& x) {
        double v = 0.0;
        for (const auto& b : bumps) {
            Vec3 y = x - b.center;
            v += b.amp * std::exp(-norm2(y) / (b.width * b.width)) * std::cos(dot(b.k, y) + b.phase);
        }
        return v;
    });
}

}  // namespace

SbilReport sbil_inequality_harness(const SymbolBi& B, const Grid& g, double s, double q1, double q2,
                                   const SbilOptions& opt) {
    if (!sbil_exponents_valid(g.d, s, q1, q2))
        throw std::invalid_argument("sbil harness: exponents violate 1/q1 + 1/q2 = 1/2 + 1/q(s), 2 <= q1, q2 <= q(s)");
    if (opt.trials < 1) throw std::invalid_argument("sbil harness: need at least one trial");
    SbilReport rep;
    std::vector<Vec3> xs(g.size());
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = g.xi(i);
    rep.symbol_norm = sum_space_norm(as_vector_symbol(B), s, MixedFlavor::Bdot21, xs, frequency_lattice_grid(g));
    for (int t = 0; t < opt.trials; ++t) {
        std::mt19937_64 rng(opt.seed * 1000003ULL + std::uint64_t(t));
        Field phi = random_bump_field(g, rng, opt), psi = random_bump_field(g, rng, opt);
        double num = lp_norm(bilinear_apply(B, phi, psi), 2.0);
        double den = rep.symbol_norm * lp_norm(phi, q1) * lp_norm(psi, q2);
        double r = num == 0.0 ? 0.0 : (den > 0.0 ? num / den : INFINITY);
        rep.ratios.push_back(r);
        rep.max_ratio = std::max(rep.max_ratio, r);
    }
    return rep;
}

}  // namespace gps

#include "gpscat/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gps {

namespace {

double spectral_l2_sq(const Field& s) {
    double acc = 0.0;
    for (auto& v : s.data()) acc += std::norm(v);
    return acc / s.grid().volume();
}

// e^{-1/t} for t > 0
double bridge(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

}  // namespace

double zero_mode_fraction(const Field& s) {
    double tot = spectral_l2_sq(s);
    if (tot == 0.0) return 0.0;
    double z = std::norm(s[0]) / s.grid().volume();
    return std::sqrt(z / tot);
}

void check_zero_mode(const Field& s, const ZeroModePolicy& pol, const std::string& what) {
    double frac = zero_mode_fraction(s);
    if (frac > pol.rel_tol)
        throw ZeroModeError(what + ": input has a nonzero mean (relative size " + std::to_string(frac) +
                            ") but the multiplier is singular at xi = 0");
}

Field apply_symbol1(const Symbol1& s, const Field& f, Repr out, const ZeroModePolicy& pol) {
    Field g = f.to_spectral();
    if (s.singular_at_zero) check_zero_mode(g, pol, "apply_symbol1(" + s.name + ")");
    const Grid& G = g.grid();
    auto& a = g.mutable_data();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i == 0 && s.singular_at_zero) {
            a[0] = 0.0;
            continue;
        }
        a[i] *= s(G.xi(i));
    }
    if (!s.preserves_real) g = g.as_complex();
    return g.in(out);
}

Field project_mean_free(const Field& f) {
    Field g = f.to_spectral();
    g[0] = 0.0;
    return g.in(f.repr());
}

double chi(double x) {
    x = std::abs(x);
    if (x <= 1.0) return 1.0;
    if (x >= 2.0) return 0.0;
    double a = bridge(2.0 - x), b = bridge(x - 1.0);
    return a / (a + b);
}

double chi_shell(double r, double k) { return chi(r / k) - chi(2.0 * r / k); }

std::vector<double> resolvable_shells(const Grid& g) {
    double lo = g.dk();
    double hi = std::sqrt(static_cast<double>(g.d)) * M_PI * g.n / g.L;
    // Shell 2^j is supported in (2^{j-1}, 2^{j+1}); keep those meeting [lo, hi].
    int jmin = static_cast<int>(std::floor(std::log2(lo))) - 1;
    int jmax = static_cast<int>(std::ceil(std::log2(hi))) + 1;
    std::vector<double> ks;
    for (int j = jmin; j <= jmax; ++j) {
        double k = std::ldexp(1.0, j);
        if (2.0 * k > lo && 0.5 * k < hi) ks.push_back(k);
    }
    return ks;
}

Field littlewood_paley(const Field& f, double k, Repr out) {
    Symbol1 s{"chi_shell", [k](const Vec3& x) { return cplx(chi_shell(norm(x), k)); }, false, true};
    return apply_symbol1(s, f, out);
}

std::pair<Field, Field> freq_split(const Field& f, double k, Repr out) {
    Field lo = f.to_spectral();
    Field hi = lo;
    const Grid& G = lo.grid();
    for (std::size_t i = 0; i < lo.size(); ++i) {
        double w = chi(2.0 * norm(G.xi(i)) / k);
        lo[i] *= w;
        hi[i] *= (1.0 - w);
    }
    return {lo.in(out), hi.in(out)};
}

DecayConstants lp_decay_constants(int d, double p, double theta) {
    if (!(p >= 2.0)) throw std::invalid_argument("lp_decay_constants: p must be >= 2");
    if (theta < 0.0 || theta > 1.0) throw std::invalid_argument("lp_decay_constants: theta must lie in [0,1]");
    double sigma = std::isinf(p) ? 0.5 : 0.5 - 1.0 / p;
    return {(d - theta) * sigma, (d - 2 + 3 * theta) * sigma, 2 * theta * sigma};
}

double min_group_speed(const Grid& g) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < g.size(); ++i) m = std::min(m, norm(gradH(g.xi(i))));
    return m;
}

}  // namespace gps

#pragma once
// Shared helpers for the unit tests.

#include <random>

#include "gpscat/field.hpp"

namespace gps::testing {

// Random real field with spectrum confined to |k_j| <= kcut per axis and no
// Nyquist content (a real field's Nyquist row is not self-conjugate once padded).
inline Field random_bandlimited(const Grid& g, int kcut, unsigned seed, double amp = 1.0, bool mean_free = false) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N(0.0, 1.0);
    Field s(g, Repr::spectral, ValueKind::complex);
    for (std::size_t i = 0; i < s.size(); ++i) {
        Index3 k = g.wave_index(i);
        bool keep = true;
        for (int a = 0; a < g.d; ++a) keep = keep && std::abs(k[a]) <= kcut && k[a] != -g.n / 2;
        if (keep) s[i] = cplx(N(rng), N(rng));
    }
    if (mean_free) s[0] = 0.0;
    // Symmetrize to a real field.
    Field p = s.to_physical();
    for (auto& v : p.mutable_data()) v = cplx(amp * v.real(), 0.0);
    Field r = p.as_real();
    if (mean_free) {
        Field t = r.to_spectral();
        t[0] = 0.0;
        r = t.to_physical();
    }
    return r;
}

inline Field random_complex(const Grid& g, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N(0.0, 1.0);
    Field f(g, Repr::physical, ValueKind::complex);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = cplx(N(rng), N(rng));
    return f;
}

inline double rel_diff(const Field& a, const Field& b) {
    double m = max_abs(a.in(b.repr()));
    return max_abs_diff(a, b) / (m > 0 ? m : 1.0);
}

}  // namespace gps::testing

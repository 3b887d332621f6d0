#pragma once
// Quadratic transforms of u = u1 + i u2 and the nonlinearities of the
// diagonalized and normal-form equations. All products are alias-free.

#include "gpscat/field.hpp"
#include "gpscat/gp_symbols.hpp"

namespace gps {

// v = u1 + i U u2
Field make_v(const Field& u1, const Field& u2);
// |u|^2 = u1^2 + u2^2, alias-free
Field modulus_sq(const Field& u1, const Field& u2);

// b(u) = -R[u1,u1] + R[u2,u2], R the resolvent bilinear multiplier.
Field symbol_b(const Field& u1, const Field& u2);
Field symbol_b_direct(const Field& u1, const Field& u2);

// z = v + <grad>^{-2}|u|^2
Field transform_M(const Field& u1, const Field& u2);
// Z = v + b(u)
Field transform_Z(const Field& u1, const Field& u2);

// N_v(u) = U(3u1^2 + u2^2 + |u|^2 u1) + i(2 u1 u2 + |u|^2 u2)
Field nonlinearity_Nv(const Field& u1, const Field& u2);

struct NZOptions {
    bool printed_B3 = false;   // use the typeset closed form of B3
    double B4_sign = 1.0;      // mutation hook
    double consistency_tol = 1e-10;
};

struct NZTerms {
    Field B3, B4, C1, C2, C3, C4, Q1;  // C3, C4, Q1 already multiplied by i
    Field total() const;
};

// Quartic term Q1(u) = -2R[u1,|u|^2 u2] - 2R[u2,|u|^2 u1]
Field quartic_Q1(const Field& u1, const Field& u2);

NZTerms nonlinearity_NZ_terms(const Field& v, const Field& u1, const Field& u2, const NZOptions& opt = {});
Field nonlinearity_NZ(const Field& v, const Field& u1, const Field& u2, const NZOptions& opt = {});

}  // namespace gps

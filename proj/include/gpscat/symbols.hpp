#pragma once
// Single Fourier multipliers xi -> s(xi) and the dispersion-related scalars.

#include <functional>
#include <string>

#include "gpscat/grid.hpp"

namespace gps {

// <a> = sqrt(2 + |a|^2)
inline double bracket(double a2) { return std::sqrt(2.0 + a2); }
inline double bracket(const Vec3& a) { return bracket(norm2(a)); }
// U = |a|/<a>, H = |a|<a>
inline double symU(const Vec3& a) { return norm(a) / bracket(a); }
inline double symH(const Vec3& a) { return norm(a) * bracket(a); }
inline double symU_r(double r) { return r / bracket(r * r); }
inline double symH_r(double r) { return r * bracket(r * r); }
// |grad H| as a function of r = |xi|: <r> + r^2/<r>
inline double group_speed(double r) { return bracket(r * r) + r * r / bracket(r * r); }
inline Vec3 gradH(const Vec3& a) {
    double r = norm(a);
    if (r == 0.0) return {0, 0, 0};
    return (group_speed(r) / r) * a;
}
inline Vec3 unit(const Vec3& a) {
    double r = norm(a);
    if (r == 0.0) return {0, 0, 0};
    return (1.0 / r) * a;
}

struct Symbol1 {
    std::string name;
    std::function<cplx(const Vec3&)> eval;
    // Undefined at xi = 0; the zero mode of the output is set to 0.
    bool singular_at_zero = false;
    // Maps real fields to real fields (real-even or imaginary-odd symbol).
    bool preserves_real = true;

    cplx operator()(const Vec3& xi) const { return eval(xi); }
};

namespace sym {

Symbol1 identity();
Symbol1 bracket_pow(double p);      // <xi>^p
Symbol1 U_pow(double p);            // U^p, singular for p < 0
Symbol1 H();                        // |xi|<xi>
Symbol1 abs_pow(double s);          // |xi|^s, singular for s < 0
Symbol1 riesz(int j);               // xi_j/|xi|
Symbol1 derivative(int j);          // i xi_j
Symbol1 laplacian();                // -|xi|^2
Symbol1 product(const Symbol1& a, const Symbol1& b);
Symbol1 scaled(const Symbol1& a, cplx c);
// e^{-i t H}
Symbol1 propagator(double t);

// Lookup by name, e.g. "U", "H", "bracket^2", "U^-1", "abs^0.5", "riesz1".
Symbol1 by_name(const std::string& name);

}  // namespace sym

}  // namespace gps

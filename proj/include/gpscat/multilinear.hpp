#pragma once
// Bilinear and trilinear Fourier multipliers on the lattice.
//
// B[f,g]~(xi) = L^{-d} sum_{xi1+xi2=xi} B(xi1,xi2) f~(xi1) g~(xi2)
// with both legs and the output on their lattices and no wraparound.
// Legs may live on different resolutions of the same box (e.g. an exact pair
// product kept on the 2n lattice).

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gpscat/field.hpp"
#include "gpscat/spectral.hpp"
#include "gpscat/symbols.hpp"

namespace gps {

// coeff * outer(xi1+xi2) * leg1(xi1) * leg2(xi2)
struct SepTerm {
    Symbol1 outer;
    Symbol1 leg1;
    Symbol1 leg2;
    double coeff = 1.0;
};

struct SymbolBi {
    std::string name;
    std::function<cplx(const Vec3&, const Vec3&)> eval;
    bool symmetric = false;
    // Pairs with a zero leg (or zero output) contribute nothing; inputs are
    // checked against the zero-mode policy when the flag is set.
    bool singular_leg1 = false;
    bool singular_leg2 = false;
    bool singular_sum = false;
    // B(-a,-b) = conj B(a,b): real inputs give real outputs.
    bool preserves_real = true;
    // Separable expansion for legs living on (at most) the given lattice.
    std::function<std::vector<SepTerm>(const Grid& leg_lattice)> separable;

    cplx operator()(const Vec3& a, const Vec3& b) const { return eval(a, b); }
    bool has_fast_path() const { return static_cast<bool>(separable); }
};

// Real-kind outputs carry no Nyquist row: a lone -n/2 mode has no conjugate
// partner on the lattice and would make the result complex.
void drop_nyquist(Field& spectral_f);

// Exact spectral copy between resolutions of one box: pads with zeros or drops
// modes outside the target lattice.
Field resample_spectral(const Field& f, const Grid& target);

// Upsampling that keeps a real field real: a Nyquist coefficient c is split
// into c/2 at -n/2 and c/2 at +n/2 on the finer lattice, which is the
// trigonometric interpolant of the samples. target.n must be >= f's n.
Field interpolate_real(const Field& f, const Grid& target);

Field bilinear_apply_direct(const SymbolBi& B, const Field& f, const Field& g,
                            std::optional<Grid> out = std::nullopt, const ZeroModePolicy& pol = {});
Field bilinear_apply_fast(const SymbolBi& B, const Field& f, const Field& g,
                          std::optional<Grid> out = std::nullopt, const ZeroModePolicy& pol = {});
// Fast path when available, else direct.
Field bilinear_apply(const SymbolBi& B, const Field& f, const Field& g, std::optional<Grid> out = std::nullopt,
                     const ZeroModePolicy& pol = {});

// Alias-free product f*g restricted to the output lattice (default: f's grid).
Field dealiased_product(const Field& f, const Field& g, std::optional<Grid> out = std::nullopt);
// f*g exactly, on the lattice of twice the input resolution.
Field exact_product(const Field& f, const Field& g);

// One term of a trilinear plan:
//   coeff * outer(xi) * pair[ (leg_a f_a)(leg_b f_b) , leg_c f_c ]
// where (a,b) is the grouped pair: either inputs (1,2) or (2,3).
struct TriTerm {
    enum class Group { first_two, last_two };
    Group group = Group::first_two;
    Symbol1 leg1, leg2, leg3;
    // For first_two: pair(xi1+xi2, xi3). For last_two: pair(xi1, xi2+xi3).
    std::optional<SymbolBi> pair;  // empty means plain product
    Symbol1 outer;
    double coeff = 1.0;
};

struct SymbolTri {
    std::string name;
    std::function<cplx(const Vec3&, const Vec3&, const Vec3&)> eval;
    std::vector<TriTerm> plan;
    bool singular_leg[3] = {false, false, false};

    cplx operator()(const Vec3& a, const Vec3& b, const Vec3& c) const { return eval(a, b, c); }
};

Field trilinear_apply(const SymbolTri& C, const Field& f, const Field& g, const Field& h,
                      std::optional<Grid> out = std::nullopt, const ZeroModePolicy& pol = {});
// O(N^3) oracle.
Field trilinear_apply_direct(const SymbolTri& C, const Field& f, const Field& g, const Field& h,
                             std::optional<Grid> out = std::nullopt, const ZeroModePolicy& pol = {});

}  // namespace gps

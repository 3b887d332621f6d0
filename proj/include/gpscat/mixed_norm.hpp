#pragma once
// Discrete estimators of the mixed symbol norms L^inf_xi Hdot^s_eta and
// L^inf_xi Bdot^s_{2,1 / 2,inf; eta} and a randomized harness for the
// bilinear estimate ||B[phi, psi]||_2 <~ ||B||_{[B^s]} ||phi||_{q1} ||psi||_{q2}.
//
// For each sampled xi the symbol is tabulated on an eta grid, transformed in
// eta and measured in the dual variable y. These are estimates on a finite
// box, not certified norms.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gpscat/multilinear.hpp"

namespace gps {

// (xi, eta) -> components; scalars use components = 1.
struct VectorSymbol {
    int components = 1;
    std::function<void(const Vec3& xi, const Vec3& eta, cplx* out)> eval;
};
// B(eta, xi - eta) seen as a symbol of (xi, eta).
VectorSymbol as_vector_symbol(const SymbolBi& B);

enum class MixedFlavor { Hdot, Bdot21, Bdot2inf };
enum class MixedCoords { xi_eta, xi_zeta };
const char* to_string(MixedFlavor f);
MixedFlavor mixed_flavor_from_string(const std::string& s);

struct MixedNormSpec {
    double s = 0.0;
    MixedCoords coords = MixedCoords::xi_eta;
    MixedFlavor flavor = MixedFlavor::Hdot;
};

// The eta samples are the (centered) points of eta_grid; the dual variable y
// lives on its frequency lattice. Vector symbols are measured in l^2 over
// components. Besov flavors sum / maximize over the shells resolvable on the
// y lattice. Throws std::invalid_argument unless 0 <= s <= d/2.
double symbol_mixed_norm(const VectorSymbol& B, const MixedNormSpec& spec, const std::vector<Vec3>& xi_samples,
                         const Grid& eta_grid);
double symbol_mixed_norm(const SymbolBi& B, const MixedNormSpec& spec, const std::vector<Vec3>& xi_samples,
                         const Grid& eta_grid);

// Sum-space norm ([H^s] or [B^s]): the smaller of the eta and zeta estimates.
double sum_space_norm(const VectorSymbol& B, double s, MixedFlavor flavor, const std::vector<Vec3>& xi_samples,
                      const Grid& eta_grid);

// eta grid matching a field grid: its points are the field's frequency
// lattice, so y runs over the field's physical box.
Grid frequency_lattice_grid(const Grid& field_grid);

//----------------------------------------------------------------------------
// Bilinear inequality harness
//----------------------------------------------------------------------------
// 1/q(s) = 1/2 - s/d; q1, q2 valid iff 1/q1 + 1/q2 = 1/2 + 1/q(s) and
// 2 <= q1, q2 <= q(s). Infinite exponents are passed as INFINITY.
bool sbil_exponents_valid(int d, double s, double q1, double q2);

struct SbilOptions {
    int trials = 8;
    std::uint64_t seed = 1;
    int bumps = 3;       // Gaussian bumps per random field
    double width = 0.8;  // bump width as a fraction of L/8
};

struct SbilReport {
    double symbol_norm = 0;   // [B^s] estimate
    double max_ratio = 0;
    std::vector<double> ratios;
};

// Random fields are sums of modulated Gaussians placed in physical units, so
// the same trial seed draws the same continuum pair at every resolution.
SbilReport sbil_inequality_harness(const SymbolBi& B, const Grid& g, double s, double q1, double q2,
                                   const SbilOptions& opt = {});

}  // namespace gps

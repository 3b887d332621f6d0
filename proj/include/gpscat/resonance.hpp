#pragma once
// Resonance geometry of the quadratic interactions Z^{s1} Z^{s2} in R^3:
// phases, smooth region decompositions into spatially (X) and temporally (T)
// non-resonant parts, divisor symbols and sampled checks of the pointwise
// bounds that the decomposition relies on.

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gpscat/mixed_norm.hpp"
#include "gpscat/multilinear.hpp"

namespace gps::res {

enum class Interaction { conj_plain, plain_plain, conj_conj };  // Zbar Z, Z Z, Zbar Zbar
const char* to_string(Interaction i);
Interaction interaction_from_string(const std::string& s);
// (s1, s2) in {+1, -1}^2, -1 meaning conjugate. (+,-) is (-,+) with the legs swapped.
Interaction interaction_from_signs(int s1, int s2);

class DegenerateTriple : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};
class RegionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};
class DivisorError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Nearest power of two.
double dyadic_label(double r);

// xi = eta + zeta with the derived geometry.
struct FreqTriple {
    Vec3 xi{}, eta{}, zeta{};
    double r_xi = 0, r_eta = 0, r_zeta = 0;
    double a = 0, b = 0, c = 0;   // dyadic labels of |xi|, |eta|, |zeta|
    double M = 0, m = 0, l = 0;   // max, min of the magnitudes; min(|eta|, |zeta|)

    static FreqTriple from(const Vec3& xi, const Vec3& eta);
    bool degenerate() const { return r_xi == 0 || r_eta == 0 || r_zeta == 0; }

    double alpha() const;        // |zeta^ - xi^|
    double beta() const;         // |zeta^ + eta^|
    double beta_prime() const;   // |eta^ - zeta^|
    double gamma() const;        // |xi^ - eta^|
    Vec3 eta_perp() const;       // component of eta orthogonal to xi
    double lambda() const;       // |xi| + |eta| - |zeta|
    double lambda_prime() const; // |zeta| + |eta| - |xi|
    // Same xi with eta and zeta exchanged.
    FreqTriple swapped() const { return from(xi, zeta); }
};

struct PhaseEval {
    double omega = 0;
    Vec3 grad_xi{};    // gradient in xi at fixed eta
    Vec3 grad_eta{};
    bool gradient_defined = true;  // false if some leg vanishes
};
PhaseEval phase_omega(Interaction i, const FreqTriple& t);

//----------------------------------------------------------------------------
// Cutoffs and regions
//----------------------------------------------------------------------------
// 0 for t <= 0, 1 for t >= 1, smooth in between.
double smooth_step(double t);
// 1 for |x| >= sqrt(3), 0 for |x| <= 3/2.
double angular_cutoff(double x);

double cutoff_alpha(const FreqTriple& t);
// Weight of the near-parallel region: chi(scale <M>|eta x xi^|/(M |eta|)).
inline constexpr double kPerpScale = 100.0;
double cutoff_perp(const FreqTriple& t);

enum class Destination { X, T };

struct RegionLabel {
    Interaction interaction = Interaction::conj_plain;
    int case_id = 0;               // 1-based, largest weight
    Destination destination = Destination::X;
    std::vector<double> weights;   // partition of unity over the cases
    double weight_X = 0, weight_T = 0;
};
// Number of cases and their destinations.
int case_count(Interaction i);
Destination case_destination(Interaction i, int case_id);
RegionLabel classify_region(Interaction i, const FreqTriple& t);

// Lower bound on the divisor that each case guarantees, without constant:
// |Omega| for T cases, |grad_eta Omega| for X cases.
double divisor_floor_scale(Interaction i, int case_id, const FreqTriple& t);
// Frozen lower constants: divisor >= constant * scale on the case support.
double divisor_floor_constant(Interaction i, int case_id);

//----------------------------------------------------------------------------
// Dyadic pieces and divisor symbols
//----------------------------------------------------------------------------
struct Cell {
    double a = 1, b = 1, c = 1;  // shells of |xi|, |eta|, |zeta|
};
// Whether three shells can carry a triangle xi = eta + zeta.
bool cell_admissible(const Cell& cell);

// chi^a(xi) chi^b(eta) chi^c(zeta) B_j(eta, zeta), j in {3, 4}.
cplx dyadic_piece(int j, const Cell& cell, const FreqTriple& t);

// (X part, T part) of the dyadic piece; empty symbols (identically 0) for
// inadmissible cells.
std::pair<SymbolBi, SymbolBi> symbol_split_BXBT(Interaction i, int j, const Cell& cell);

enum class DivisorKind { B1, B2, B3 };
const char* to_string(DivisorKind k);
DivisorKind divisor_kind_from_string(const std::string& s);

// Components: B1 is the 3x3 matrix d_xi_k Omega d_eta_l Omega / |grad_eta Omega|^2
// times the X piece (row-major); B2 is the eta-divergence of its rows; B3 is
// grad_xi Omega / Omega times the T piece.
struct DivisorValue {
    DivisorKind kind = DivisorKind::B3;
    std::vector<cplx> components;
    double magnitude() const;
};
DivisorValue divisor_symbols(Interaction i, int j, const Cell& cell, const FreqTriple& t, DivisorKind kind);

// Vector symbol (xi, eta) -> components for the mixed-norm estimator; zero
// outside the piece's support.
using gps::VectorSymbol;
VectorSymbol divisor_sampler(Interaction i, int j, const Cell& cell, DivisorKind kind);

//----------------------------------------------------------------------------
// Sampled bounds
//----------------------------------------------------------------------------
enum class Claim {
    gradient_difference,   // |grad H(x) - grad H(y)| two-sided, |x| >= |y|
    higher_derivatives,    // |D^k H| <~ <x>/|x|^{k-1}, k = 2, 3
    conj_plain_angular,    // Zbar Z angular case: |Omega| >~ <M> m, |grad_eta Omega| <~ |Omega|/M
    conj_plain_curvature,  // Zbar Z near-parallel case, M = |zeta|: |Omega| ~ M^2 m
    plain_plain_curvature, // Z Z near-parallel main branch: |Omega| ~ (M^2/<M>) m
    sine_rule,             // beta ~ a alpha / b and alpha/beta' <~ m/M
    cosine_identity,       // exact expansions of |xi|^2, |eta|^2
    divisor_floors,        // every case of every interaction above its floor
};
const char* to_string(Claim c);
Claim claim_from_string(const std::string& s);
std::vector<Claim> all_claims();

struct SampleOptions {
    long samples = 100000;
    int log2_min = -7, log2_max = 7;  // magnitudes log-uniform in 2^[min, max]
    std::uint64_t seed = 1;
    bool collect_cells = true;
};

// Random triple: |xi|, |eta| log-uniform; half the draws put eta at a small
// (log-uniform) angle to +-xi.
FreqTriple sample_triple(std::mt19937_64& rng, const SampleOptions& opt);

enum class Side { lower, upper, two_sided };

// One ratio tracked by a claim. The per-sample constant is 1/r (lower),
// r (upper) or max(r, 1/r) (two-sided).
struct CheckStat {
    std::string name;
    Side side = Side::two_sided;
    long tested = 0;
    double min_ratio = 0, max_ratio = 0;
    double ceiling = 0;
    double constant() const;
    bool pass() const { return constant() <= ceiling; }
};

struct CellStat {
    int log2_a = 0, log2_b = 0, log2_c = 0;
    long tested = 0;
    double constant = 0;  // worst over the cell and the claim's checks
};

struct BoundReport {
    Claim claim{};
    long samples = 0;
    std::vector<CheckStat> checks;
    double constant = 0;        // worst over checks
    double exact_residual = 0;  // identities only
    std::vector<FreqTriple> counterexamples;  // first few, in draw order
    long counterexample_count = 0;
    std::vector<CellStat> cells;
    bool pass = false;
};
BoundReport sampled_bound_suite(Claim c, const SampleOptions& opt);

}  // namespace gps::res

#pragma once
// Time evolution of the perturbation u = psi - 1 = u1 + i u2 of
//   i psi_t + Lap psi = (|psi|^2 - 1) psi,
// its energy functionals, initial data families, the Boussinesq model
// i v_t + H v = U(v1^2), and the plane-wave embedding into NLS.
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "gpscat/field.hpp"

namespace gps {

struct StateU {
    double t = 0.0;
    Field u1, u2;  // real fields, spectral representation

    const Grid& grid() const { return u1.grid(); }
};

// Normalizes both components to real spectral fields on a common grid.
StateU make_state(const Field& u1, const Field& u2, double t = 0.0);
StateU zero_state(const Grid& g);

// Complex perturbation u1 + i u2 (physical).
Field perturbation(const StateU& s);

class BlowUpError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class HorizonError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Scheme { strang, lawson_rk4 };
const char* to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct EvolutionConfig {
    double dt = 1e-3;
    double T = 1.0;
    Scheme scheme = Scheme::strang;
    bool dealias = true;       // 2/3 truncation after every nonlinear stage
    bool nonlinear = true;     // false gives the exact linear flow
    int cadence = 0;           // observer/ledger every `cadence` steps; 0 = only ends
    double blowup_bound = 10.0;
    // T must not exceed the horizon: `horizon` if positive, otherwise
    // wraparound_horizon(grid). Disabled by enforce_horizon = false.
    bool enforce_horizon = true;
    double horizon = 0.0;

    void validate() const;
    long steps() const;  // round(T/dt); T must be a multiple of dt
};

struct LedgerRow {
    double t = 0, E1 = 0, H1z = 0, Uu2sq = 0;
};

struct EnergyLedger {
    std::vector<LedgerRow> rows;
    double max_relative_drift() const;
};

struct EnergyParts {
    double E1 = 0;      // int |grad u|^2 + (2u1 + |u|^2)^2 / 2
    double E1_psi = 0;  // int |grad psi|^2 + (|psi|^2 - 1)^2 / 2
    double H1z = 0;     // ||<grad> M(u)||^2
    double Uu2sq = 0;   // ||U |u|^2||^2
};

// All quadratures run on the 2n grid, where the quartic integrands are
// resolved exactly for Nyquist-free data.
EnergyParts energy_parts(const StateU& s);
double energy_E1(const StateU& s);

// L / (2 max |grad H|) over the lattice.
double wraparound_horizon(const Grid& g);

// Exact linear propagator of the (u1, u2) system.
StateU linear_step(const StateU& s, double dt);

// Pointwise RK4 for u1' = (2u1 + |u|^2) u2, u2' = -3u1^2 - u2^2 - |u|^2 u1,
// followed by the 2/3 truncation when dealias is set.
StateU nonlinear_step(const StateU& s, double dt, bool dealias = true);

// Zero every mode with some |k_j| > n/3.
void two_thirds_filter(Field& spectral_f);

using StateObserver = std::function<void(const StateU&)>;

struct EvolveResult {
    StateU final;
    EnergyLedger ledger;
};

// The observer sees t = 0, every cadence-th step and the final state.
EvolveResult evolve(const StateU& s0, const EvolutionConfig& cfg, const StateObserver& observer = {},
                    bool record_energy = true);

//----------------------------------------------------------------------------
// Initial data
//----------------------------------------------------------------------------
struct GaussianData {
    double eps = 0.01;
    double width = 1.0;
    double phase = 0.0;  // u = eps e^{-|x|^2/w^2} (cos(phase) + i sin(phase))
    Vec3 center{0, 0, 0};
};
StateU gaussian_data(const Grid& g, const GaussianData& p);

// Smooth random real field: Gaussian-weighted random spectrum with width
// kscale, normalized to max |f| = amp. Deterministic in seed.
Field random_smooth_field(const Grid& g, double kscale, std::uint64_t seed, double amp = 1.0,
                          bool mean_free = false);

// int <x>^2 (|Re u|^2 + |grad u|^2) dx at the given state.
double weighted_smallness(const StateU& s);

//----------------------------------------------------------------------------
// Boussinesq model
//----------------------------------------------------------------------------
using FieldObserver = std::function<void(double t, const Field& v)>;
// Explicit midpoint rule in the interaction picture a = e^{-itH} v.
Field evolve_boussinesq(const Field& v0, const EvolutionConfig& cfg, const FieldObserver& observer = {});
// -i U((Re v)^2), alias-free.
Field boussinesq_rhs(const Field& v);

//----------------------------------------------------------------------------
// Plane waves: phi = a e^{-i(a^2+|b|^2)t + i b.x + ic} (1 + u(a^2 t, a(x - 2bt)))
//----------------------------------------------------------------------------
struct PlaneWave {
    double a = 1.0;
    Vec3 b{0, 0, 0};
    double c = 0.0;
};

// Box on which phi lives: side L/a; b must lie on its lattice.
Grid plane_wave_grid(const Grid& u_grid, const PlaneWave& pw);
// phi at physical time s.t / a^2.
Field plane_wave_field(const StateU& s, const PlaneWave& pw);

struct NlsResidual {
    double t = 0;        // physical time of the middle state
    double linf = 0;     // max |i phi_t + Lap phi - |phi|^2 phi|
    double l2 = 0;
    double relative = 0; // linf / (a^3 + a |b|^2)
};

// Three states at equally spaced GP times; the carrier is differentiated
// exactly, the perturbation by a centered difference.
NlsResidual plane_wave_residual(const StateU& prev, const StateU& mid, const StateU& next, const PlaneWave& pw);

}  // namespace gps

#pragma once
// Scattering diagnostics: the vector field J = e^{-itH} x e^{itH}, the X(t)
// and S norms, log-log decay fits, profile extraction, the normal-form
// comparison and the 2D correction integrand.
#include <optional>
#include <string>
#include <vector>

#include "gpscat/dynamics.hpp"
#include "gpscat/field.hpp"
#include "gpscat/spectral.hpp"

namespace gps {

//----------------------------------------------------------------------------
// J and the X / S norms
//----------------------------------------------------------------------------
// Fraction of ||f||_2^2 inside the central half-box max_j |x_j| <= L/4.
double central_mass_fraction(const Field& f);
// The sawtooth x-weight only represents x on localized fields.
constexpr double kLocalizationThreshold = 1.0 - 1e-6;

struct JResult {
    std::vector<Field> components;  // one per coordinate, spectral, complex
    bool localized = true;          // central_mass_fraction(e^{itH} f) >= threshold
};
JResult apply_J(const Field& f, double t);
// (sum_j ||J_j f||_{H^1}^2)^{1/2}
double J_h1_norm(const Field& f, double t);

// ||Z||_{H^1} + (sum_j ||J_j Z||_{H^1}^2)^{1/2}
double norm_X(const Field& Z, double t);

struct Snapshot {
    double t = 0;
    Field Z;
};
// sup_t ||Z||_{H^1} + (int ||U^{-1/6} Z||_{H^{1,6}}^2 dt)^{1/2}, trapezoid in
// time. U^{-1/6} drops the mean under the given zero-mode policy.
double norm_S(const std::vector<Snapshot>& traj, const ZeroModePolicy& pol = {});

//----------------------------------------------------------------------------
// Decay fits
//----------------------------------------------------------------------------
struct DecayFitOptions {
    double t0 = 1.0;
    double t1 = 0.0;        // 0: horizon
    double horizon = 0.0;   // must be positive; the window must end inside it
    bool upper_bound = false;
    double tol = 0.1;       // sharp verdict: |fitted - predicted| <= tol
    double slack = 0.15;    // upper-bound verdict: fitted <= predicted + slack
    std::optional<double> threshold;  // overrides predicted + slack
    double min_per_decade = 8.0;
};

struct DecayReport {
    std::string observable;
    std::vector<double> times, values;
    double window_lo = 0, window_hi = 0;
    int samples_in_window = 0;
    double fitted = 0;      // slope of log value against log t
    double residual = 0;    // rms of the log-log fit
    double predicted = 0;
    bool upper_bound = false;
    double threshold = 0;   // fitted must not exceed this (upper-bound mode)
    double tol = 0;
    bool pass = false;
};

// Least squares over samples with t0 <= t <= t1. Throws HorizonError if the
// window reaches past the horizon and std::invalid_argument when it holds
// fewer than min_per_decade samples per decade (or fewer than 3) or any
// value in it is not positive.
DecayReport decay_fit(const std::string& observable, const std::vector<double>& t, const std::vector<double>& v,
                      double predicted, const DecayFitOptions& opt);

// Data-aware horizon L / (2 v), v the smallest group speed such that modes
// moving faster than v carry at most `tol` of ||f||_2^2. Never below
// wraparound_horizon(grid).
double dispersive_horizon(const Field& f, double tol = 1e-6);

// Plain log-log least-squares slope and rms residual.
std::pair<double, double> loglog_slope(const std::vector<double>& t, const std::vector<double>& v);

//----------------------------------------------------------------------------
// Scattering profile
//----------------------------------------------------------------------------
struct ScatterProfile {
    Field v_plus;                    // e^{i T H} Z(T) at the last tail time
    std::vector<double> times;       // t_{i+1} of each tail pair
    std::vector<double> cauchy;      // ||e^{i t_{i+1} H} Z_{i+1} - e^{i t_i H} Z_i||_{H^1}
    double fitted = 0;               // log-log slope of the Cauchy series (0 if it vanishes)
    bool vanishing = false;          // every difference below 1e-13 ||v_plus||_{H^1}
    double max_increase = 0;         // largest relative step up along the series
    bool pass = false;               // vanishing, or fitted <= threshold
};

constexpr double kCauchyThreshold = -0.4;

// Uses the last `tail` snapshots (all when tail = 0). Throws
// std::invalid_argument with fewer than 3 tail samples.
ScatterProfile extract_profile(const std::vector<Snapshot>& traj, std::size_t tail = 0,
                               double threshold = kCauchyThreshold);

//----------------------------------------------------------------------------
// Normal-form comparison
//----------------------------------------------------------------------------
struct EquivalenceRow {
    double t = 0;
    double v_X = 0;       // ||v||_{X(t)}
    double z_minus_v = 0; // ||M(u) - v||_{X(t)}
    double Z_minus_v = 0; // ||Z(u) - v||_{X(t)}
};

struct EquivalenceReport {
    std::vector<EquivalenceRow> rows;
    double sup_v_X = 0;
    double K = 0;          // max over rows of diff / (<t>^{-1/6} sup_v_X^2)
    double K_limit = 0;
    bool pass = false;
};

// Frozen envelope constant for the <t>^{-1/6} (sup ||v||_X)^2 bound.
constexpr double kEquivalenceK = 1.0;

EquivalenceReport normalform_equivalence(const std::vector<StateU>& traj, double K_limit = kEquivalenceK);

//----------------------------------------------------------------------------
// 2D correction integrand
//----------------------------------------------------------------------------
// |U z|^2 + 2i Im H^{-1} div(U(conj z) grad z), physical, complex. d = 2 only.
Field correction_profile_2d(const Field& z, const ZeroModePolicy& pol = {});
// Trapezoid rule over samples f(t_k).
Field trapezoid(const std::vector<double>& t, const std::vector<Field>& f);

}  // namespace gps

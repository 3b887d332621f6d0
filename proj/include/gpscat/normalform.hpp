#pragma once
// Energy-space normal form: the distance delta on F1, the identity
//   delta(f,g)^2 = ||<grad>(M f - M g)||^2 + 1/2 ||U(|f|^2 - |g|^2)||^2,
// the inverse R of M by fixed-point iteration, and the nonlinearities of the
// z = M(u) equation used for residual monitoring.
#include <utility>
#include <vector>

#include "gpscat/dynamics.hpp"
#include "gpscat/field.hpp"
#include "gpscat/spectral.hpp"
#include "gpscat/transforms.hpp"

namespace gps {

struct EnergyPoint {
    Field f;      // complex, f1 + i f2
    Field q;      // 2 f1 + |f|^2
    Field modsq;  // |f|^2

    static EnergyPoint from(const Field& f);
    static EnergyPoint from(const Field& f1, const Field& f2);
    Field re() const;
    Field im() const;
};

// All three quantities below are evaluated on the 2n grid with pointwise
// products, where they equal their continuum values for Nyquist-free input.
double delta_distance(const EnergyPoint& f, const EnergyPoint& g);

struct MappingTerms {
    double delta_sq = 0;
    double h1_sq = 0;    // ||<grad>(M f - M g)||^2
    double u_sq = 0;     // ||U(|f|^2 - |g|^2)||^2
    double residual = 0; // |delta^2 - h1 - u/2| / (1 + delta^2)
};
MappingTerms energy_mapping_terms(const EnergyPoint& f, const EnergyPoint& g);
double energy_mapping_check(const EnergyPoint& f, const EnergyPoint& g);

struct InverseOptions {
    double tol = 1e-10;
    int max_iter = 200;
    double kappa = 0.1;
    ZeroModePolicy zero_mode{};
};

struct FixedPointReport {
    int iterations = 0;
    double residual = 0;      // ||g1 - R_f(g1)||_{H^1} = ||M(g) - f||_{H^1}
    bool converged = false;
    double contraction = 0;   // last ratio of successive updates
    double l6_norm = 0;       // ||f||_{L^6}
    bool small = false;       // l6_norm <= kappa
    std::vector<double> history;
};

// g1 <- f1 - <grad>^{-2}(g1^2 + (U^{-1} f2)^2), g2 = U^{-1} f2.
std::pair<EnergyPoint, FixedPointReport> inverse_R(const Field& f, const InverseOptions& opt = {});

// delta(R f, R g) / ||<grad>(f - g)||; the inverse is 2-Lipschitz for small data.
double inverse_lipschitz_ratio(const Field& f, const Field& g, const InverseOptions& opt = {});

// N_O(u) = U{2u1^2 + |u|^2 u1} - i <grad>^{-2} div{4 u1 grad u2 + grad(|u|^2 u2)}
Field nonlinearity_NO(const Field& u1, const Field& u2);
// (N_O^1, N_O^2) regrouped through the charge density q = 2u1 + |u|^2.
std::pair<Field, Field> nonlinearity_NO_split(const Field& u1, const Field& u2);

//----------------------------------------------------------------------------
// Residual of i X_t - H X = N along a trajectory, X = z or Z.
//----------------------------------------------------------------------------
struct EquationResidual {
    double t = 0;
    double l2 = 0;       // ||X_t + i H X + i N||_{L^2}, X_t by centered difference
    double linf = 0;
    double scale = 0;    // ||X_t||_{L^2}
};

EquationResidual z_equation_residual(const StateU& prev, const StateU& mid, const StateU& next);
EquationResidual Z_equation_residual(const StateU& prev, const StateU& mid, const StateU& next,
                                     const NZOptions& opt = {});

}  // namespace gps

#pragma once
// Multiplier application, Littlewood-Paley pieces and decay-rate bookkeeping.

#include <stdexcept>
#include <utility>
#include <vector>

#include "gpscat/field.hpp"
#include "gpscat/symbols.hpp"

namespace gps {

class ZeroModeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ZeroModePolicy {
    // Allowed ||P_0 f||_2 relative to ||f||_2 for singular symbols.
    double rel_tol = 1e-10;
};

// ||P_0 f||_2 / ||f||_2, the relative size of the mean.
double zero_mode_fraction(const Field& spectral_f);
void check_zero_mode(const Field& spectral_f, const ZeroModePolicy& pol, const std::string& what);

Field apply_symbol1(const Symbol1& s, const Field& f, Repr out = Repr::spectral,
                    const ZeroModePolicy& pol = {});

// Remove the mean.
Field project_mean_free(const Field& f);

// Smooth cutoff: 1 on [0,1], 0 on [2,inf).
double chi(double x);
// Shell multiplier chi(|x|/k) - chi(2|x|/k), supported in k/2 < |x| < 2k.
double chi_shell(double r, double k);

// Dyadic shell labels 2^j whose support meets the lattice annulus
// [2 pi/L, sqrt(d) pi n/L]; together they partition every nonzero lattice point.
std::vector<double> resolvable_shells(const Grid& g);

Field littlewood_paley(const Field& f, double k, Repr out = Repr::spectral);
// (f_{<k}, f_{>=k}) with f_{<k} carrying the multiplier chi(2|xi|/k).
std::pair<Field, Field> freq_split(const Field& f, double k, Repr out = Repr::spectral);

struct DecayConstants {
    double rate;          // (d - theta) sigma
    double U_exponent;    // (d - 2 + 3 theta) sigma
    double bracket_exponent;  // 2 theta sigma
};
DecayConstants lp_decay_constants(int d, double p, double theta);

// Minimum |grad H| over nonzero lattice points.
double min_group_speed(const Grid& g);

}  // namespace gps

#pragma once
// Lebesgue, Sobolev, Besov and Lorentz norms of grid fields.

#include <string>

#include "gpscat/field.hpp"
#include "gpscat/spectral.hpp"

namespace gps {

struct NormSpec {
    enum class Kind { Lp, Sobolev, HomSobolev, Besov, Lorentz };
    Kind kind = Kind::Lp;
    double p = 2.0;   // integrability (inf allowed for Lp, Sobolev)
    double s = 0.0;   // smoothness
    double q = 2.0;   // secondary index (Besov, Lorentz)

    static NormSpec Lp(double p) { return {Kind::Lp, p, 0.0, 2.0}; }
    static NormSpec H(double s, double p = 2.0) { return {Kind::Sobolev, p, s, 2.0}; }
    static NormSpec Hdot(double s) { return {Kind::HomSobolev, 2.0, s, 2.0}; }
    static NormSpec Besov(double s, double p, double q) { return {Kind::Besov, p, s, q}; }
    static NormSpec Lorentz(double p, double q) { return {Kind::Lorentz, p, 0.0, q}; }

    // "L2", "Linf", "H1", "H1,6", "Hdot-1", "B0,6,2", "Lorentz4,2"
    static NormSpec parse(const std::string& text);
    std::string describe() const;
};

double norm(const Field& f, const NormSpec& spec, const ZeroModePolicy& pol = {});

double lp_norm(const Field& f, double p);
// ||<grad>^s f||_{L^2} from the spectrum.
double sobolev_norm(const Field& f, double s);
double hom_sobolev_norm(const Field& f, double s, const ZeroModePolicy& pol = {});
double besov_norm(const Field& f, double s, double p, double q);
// Decreasing-rearrangement Lorentz norm of the sampled step function;
// q = p reproduces the L^p quadrature exactly.
double lorentz_norm(const Field& f, double p, double q);

// <f, g> = int f conj(g)
cplx inner(const Field& f, const Field& g);

}  // namespace gps

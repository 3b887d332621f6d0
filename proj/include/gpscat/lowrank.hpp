#pragma once
// Low-rank factorization of the resolvent kernel k(a,b) = 1/(c + a + b)
// restricted to lattice values a = dk^2 m, m = 0..max_key (m = |k|^2 for an
// integer wave vector). The kernel is positive semidefinite, so a pivoted
// Cholesky gives k(a,b) ~ sum_r phi_r(a) phi_r(b) with a short rank.

#include <memory>
#include <vector>

#include "gpscat/grid.hpp"

namespace gps {

struct ResolventFactor {
    double dk = 1.0;
    double shift = 2.0;
    long max_key = 0;
    std::vector<std::vector<double>> phi;  // phi[r][m]
    double max_residual = 0.0;             // largest remaining diagonal entry

    int rank() const { return static_cast<int>(phi.size()); }
    long key(const Vec3& xi) const { return std::lround(norm2(xi) / (dk * dk)); }
    double value(int r, const Vec3& xi) const { return phi[r][static_cast<std::size_t>(key(xi))]; }
    double kernel(long m1, long m2) const { return 1.0 / (shift + dk * dk * (m1 + m2)); }
};

// Cached per (dk, max_key, shift).
std::shared_ptr<const ResolventFactor> resolvent_factor(double dk, long max_key, double shift = 2.0,
                                                        double tol = 1e-15, int max_rank = 80);

// Largest |xi|^2 / dk^2 on a grid's lattice.
long max_lattice_key(const Grid& g);

}  // namespace gps

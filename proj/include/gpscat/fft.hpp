#pragma once
// FFTW wrapper with the centered-box normalization
//   f~(xi) = h^d sum_x f(x) e^{-i x.xi},   f(x) = L^{-d} sum_xi f~(xi) e^{i x.xi}
// so that f~ approximates the continuous transform and
// ||f||_2^2 = L^{-d} sum |f~|^2.

#include <vector>

#include "gpscat/grid.hpp"

namespace gps::fft {

// Unnormalized in-place DFT over the grid's d axes. sign = -1 forward, +1 backward.
void raw(const Grid& g, cplx* data, int sign);

void forward(const Grid& g, std::vector<cplx>& data);
void inverse(const Grid& g, std::vector<cplx>& data);

// Number of cached plans (diagnostics only).
std::size_t plan_count();

}  // namespace gps::fft

#pragma once
// Minimal data-parallel helpers. Work is split into contiguous blocks; each
// output element is produced by exactly one worker, so results do not depend
// on the thread count.

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace gps {

// Worker count: GPSCAT_THREADS if set, else hardware concurrency.
int worker_count();
void set_worker_count(int n);  // 0 restores the default

void parallel_for(std::size_t count, const std::function<void(std::size_t begin, std::size_t end)>& body,
                  std::size_t min_block = 64);

// Pairwise (tree) summation; fixed order for a fixed input.
std::complex<double> pairwise_sum(const std::complex<double>* v, std::size_t n);
double pairwise_sum(const double* v, std::size_t n);

}  // namespace gps

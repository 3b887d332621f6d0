#include "gpscat/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

namespace gps {

namespace {
std::atomic<int> g_override{0};

template <class T>
T tree_sum(const T* v, std::size_t n) {
    if (n <= 8) {
        T s{};
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    std::size_t h = n / 2;
    return tree_sum(v, h) + tree_sum(v + h, n - h);
}
}  // namespace

int worker_count() {
    int o = g_override.load();
    if (o > 0) return o;
    if (const char* e = std::getenv("GPSCAT_THREADS")) {
        int v = std::atoi(e);
        if (v > 0) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

void set_worker_count(int n) { g_override.store(n > 0 ? n : 0); }

void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t min_block) {
    if (count == 0) return;
    std::size_t workers = static_cast<std::size_t>(worker_count());
    workers = std::min(workers, (count + min_block - 1) / min_block);
    if (workers <= 1) {
        body(0, count);
        return;
    }
    std::vector<std::thread> pool;
    std::size_t block = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        std::size_t b = w * block, e = std::min(count, b + block);
        if (b >= e) break;
        pool.emplace_back([&body, b, e] { body(b, e); });
    }
    for (auto& t : pool) t.join();
}

std::complex<double> pairwise_sum(const std::complex<double>* v, std::size_t n) { return tree_sum(v, n); }
double pairwise_sum(const double* v, std::size_t n) { return tree_sum(v, n); }

}  // namespace gps

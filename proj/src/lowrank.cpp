#include "gpscat/lowrank.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>

namespace gps {

long max_lattice_key(const Grid& g) {
    long h = g.n / 2;
    return static_cast<long>(g.d) * h * h;
}

namespace {

std::shared_ptr<ResolventFactor> build(double dk, long max_key, double shift, double tol, int max_rank) {
    auto f = std::make_shared<ResolventFactor>();
    f->dk = dk;
    f->shift = shift;
    f->max_key = max_key;
    const std::size_t N = static_cast<std::size_t>(max_key) + 1;
    std::vector<double> diag(N);
    for (std::size_t m = 0; m < N; ++m) diag[m] = f->kernel(m, m);
    const double scale = *std::max_element(diag.begin(), diag.end());
    std::vector<char> used(N, 0);
    while (static_cast<int>(f->phi.size()) < max_rank) {
        std::size_t piv = 0;
        double best = -1.0;
        for (std::size_t m = 0; m < N; ++m)
            if (!used[m] && diag[m] > best) {
                best = diag[m];
                piv = m;
            }
        if (best <= tol * scale) break;
        used[piv] = 1;
        std::vector<double> col(N);
        const double root = std::sqrt(best);
        for (std::size_t m = 0; m < N; ++m) {
            double v = f->kernel(m, piv);
            for (auto& p : f->phi) v -= p[m] * p[piv];
            col[m] = v / root;
        }
        for (std::size_t m = 0; m < N; ++m) diag[m] = std::max(0.0, diag[m] - col[m] * col[m]);
        diag[piv] = 0.0;
        f->phi.push_back(std::move(col));
    }
    f->max_residual = 0.0;
    for (double v : diag) f->max_residual = std::max(f->max_residual, v);
    return f;
}

}  // namespace

std::shared_ptr<const ResolventFactor> resolvent_factor(double dk, long max_key, double shift, double tol,
                                                        int max_rank) {
    static std::mutex mu;
    static std::map<std::tuple<double, long, double, double, int>, std::shared_ptr<ResolventFactor>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(dk, max_key, shift, tol, max_rank);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto f = build(dk, max_key, shift, tol, max_rank);
    cache.emplace(key, f);
    return f;
}

}  // namespace gps

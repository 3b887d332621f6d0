#include "gpscat/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace gps::fft {

namespace {

// FFTW_ESTIMATE keeps plan selection deterministic, which keeps results
// bitwise reproducible between runs.
class PlanCache {
public:
    fftw_plan get(int d, int n, int sign) {
        std::lock_guard<std::mutex> lock(mu_);
        auto key = std::make_tuple(d, n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::size_t total = 1;
        int dims[3] = {n, n, n};
        for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(n);
        auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
        fftw_plan p = fftw_plan_dft(d, dims, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(buf);
        plans_.emplace(key, p);
        return p;
    }
    std::size_t size() {
        std::lock_guard<std::mutex> lock(mu_);
        return plans_.size();
    }
    ~PlanCache() {
        for (auto& [k, p] : plans_) fftw_destroy_plan(p);
    }

private:
    std::mutex mu_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

void apply_phase_and_scale(const Grid& g, std::vector<cplx>& data, double scale) {
    const std::size_t N = data.size();
    const int n = g.n;
    if (g.d == 1) {
        for (std::size_t i = 0; i < N; ++i) data[i] *= (i & 1) ? -scale : scale;
        return;
    }
    // Parity of the summed storage indices, walked without divisions.
    std::size_t i = 0;
    if (g.d == 2) {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b, ++i) data[i] *= ((a + b) & 1) ? -scale : scale;
    } else {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c, ++i) data[i] *= ((a + b + c) & 1) ? -scale : scale;
    }
}

}  // namespace

void raw(const Grid& g, cplx* data, int sign) {
    fftw_plan p = cache().get(g.d, g.n, sign);
    auto* ptr = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(p, ptr, ptr);
}

void forward(const Grid& g, std::vector<cplx>& data) {
    if (data.size() != g.size()) throw GridError("fft::forward: buffer size does not match grid");
    raw(g, data.data(), FFTW_FORWARD);
    apply_phase_and_scale(g, data, std::pow(g.h(), g.d));
}

void inverse(const Grid& g, std::vector<cplx>& data) {
    if (data.size() != g.size()) throw GridError("fft::inverse: buffer size does not match grid");
    apply_phase_and_scale(g, data, 1.0 / g.volume());
    raw(g, data.data(), FFTW_BACKWARD);
}

std::size_t plan_count() { return cache().size(); }

}  // namespace gps::fft

#include "gpscat/grid.hpp"

#include <sstream>

namespace gps {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

Grid make_grid(int d, int n, double L) {
    if (d < 1 || d > 3) throw GridError("grid dimension must be 1, 2 or 3");
    if (n < 8 || !is_power_of_two(n)) throw GridError("grid size must be a power of two >= 8");
    if (!(L > 0.0) || !std::isfinite(L)) throw GridError("box length must be positive");
    return Grid{d, n, L};
}

std::size_t Grid::size() const {
    std::size_t s = 1;
    for (int i = 0; i < d; ++i) s *= static_cast<std::size_t>(n);
    return s;
}

bool Grid::in_lattice(const Index3& k) const {
    for (int i = 0; i < d; ++i)
        if (!in_lattice(k[i])) return false;
    for (int i = d; i < 3; ++i)
        if (k[i] != 0) return false;
    return true;
}

Index3 Grid::unflatten(std::size_t flat) const {
    Index3 m{0, 0, 0};
    for (int i = d - 1; i >= 0; --i) {
        m[i] = static_cast<int>(flat % n);
        flat /= n;
    }
    return m;
}

std::size_t Grid::flatten(const Index3& m) const {
    std::size_t f = 0;
    for (int i = 0; i < d; ++i) f = f * n + static_cast<std::size_t>(m[i]);
    return f;
}

Index3 Grid::wave_index(std::size_t flat) const {
    Index3 m = unflatten(flat);
    for (int i = 0; i < d; ++i) m[i] = wave_number(m[i]);
    return m;
}

std::size_t Grid::flat_of_wave(const Index3& k) const {
    Index3 m{0, 0, 0};
    for (int i = 0; i < d; ++i) m[i] = storage_index(k[i]);
    return flatten(m);
}

Vec3 Grid::xi(std::size_t flat) const {
    Index3 k = wave_index(flat);
    double s = dk();
    return {s * k[0], s * k[1], s * k[2]};
}

Vec3 Grid::x(std::size_t flat) const {
    Index3 m = unflatten(flat);
    Vec3 r{0, 0, 0};
    for (int i = 0; i < d; ++i) r[i] = -0.5 * L + m[i] * h();
    return r;
}

int Grid::parity(std::size_t flat) const {
    Index3 m = unflatten(flat);
    return (m[0] + m[1] + m[2]) & 1;
}

std::string Grid::describe() const {
    std::ostringstream os;
    os << "d=" << d << " n=" << n << " L=" << L;
    return os.str();
}

}  // namespace gps

#pragma once
// Periodic box [-L/2, L/2)^d sampled with n points per axis.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace gps {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm2(const Vec3& a) { return dot(a, a); }
inline double norm(const Vec3& a) { return std::sqrt(norm2(a)); }
inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

class GridError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Integer wave-number triple; unused components are zero.
using Index3 = std::array<int, 3>;

struct Grid {
    int d = 1;
    int n = 8;
    double L = 1.0;

    double h() const { return L / n; }
    double dk() const { return 2.0 * M_PI / L; }
    std::size_t size() const;
    double volume() const { return std::pow(L, d); }
    int kmin() const { return -n / 2; }
    int kmax() const { return n / 2 - 1; }

    // FFT storage index along one axis -> signed wave number.
    int wave_number(int m) const { return m < n / 2 ? m : m - n; }
    int storage_index(int k) const { return k >= 0 ? k : k + n; }
    bool in_lattice(int k) const { return k >= -n / 2 && k < n / 2; }
    bool in_lattice(const Index3& k) const;

    Index3 unflatten(std::size_t flat) const;          // storage indices
    std::size_t flatten(const Index3& m) const;        // storage indices
    Index3 wave_index(std::size_t flat) const;         // signed wave numbers
    std::size_t flat_of_wave(const Index3& k) const;   // requires in_lattice
    Vec3 xi(std::size_t flat) const;
    Vec3 x(std::size_t flat) const;
    // Parity of the summed storage indices; the centered-box phase is (-1)^parity.
    int parity(std::size_t flat) const;

    // Same box, other resolution.
    Grid resampled(int n_new) const { return Grid{d, n_new, L}; }

    bool operator==(const Grid& o) const { return d == o.d && n == o.n && L == o.L; }
    bool operator!=(const Grid& o) const { return !(*this == o); }
    std::string describe() const;
};

// Validates d in {1,2,3}, n a power of two >= 8, L > 0.
Grid make_grid(int d, int n, double L);

bool is_power_of_two(int n);

}  // namespace gps

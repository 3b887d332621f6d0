#pragma once
// Sampled field on a Grid, stored either as physical samples or spectral
// coefficients (centered-box normalization, see fft.hpp).

#include <functional>
#include <vector>

#include "gpscat/grid.hpp"

namespace gps {

enum class Repr { physical, spectral };
enum class ValueKind { real, complex };

const char* to_string(Repr r);
const char* to_string(ValueKind k);

class Field {
public:
    Field() = default;
    Field(const Grid& g, Repr r, ValueKind k);
    Field(const Grid& g, Repr r, ValueKind k, std::vector<cplx> data);

    static Field from_function(const Grid& g, const std::function<cplx(const Vec3&)>& f,
                               ValueKind k = ValueKind::complex);
    static Field from_real_function(const Grid& g, const std::function<double(const Vec3&)>& f);
    static Field from_symbol(const Grid& g, const std::function<cplx(const Vec3&)>& s,
                             ValueKind k = ValueKind::complex);

    const Grid& grid() const { return grid_; }
    Repr repr() const { return repr_; }
    ValueKind kind() const { return kind_; }
    bool is_real() const { return kind_ == ValueKind::real; }
    std::size_t size() const { return data_.size(); }
    const std::vector<cplx>& data() const { return data_; }
    std::vector<cplx>& mutable_data() { return data_; }
    cplx operator[](std::size_t i) const { return data_[i]; }
    cplx& operator[](std::size_t i) { return data_[i]; }

    Field to_spectral() const;
    Field to_physical() const;
    Field in(Repr r) const { return r == Repr::spectral ? to_spectral() : to_physical(); }

    Field& operator+=(const Field& o);
    Field& operator-=(const Field& o);
    Field& operator*=(double s);
    Field& operator*=(cplx s);
    Field& axpy(cplx a, const Field& x);  // this += a x

    // Largest |Im| of physical samples relative to max |value|.
    double imag_residual() const;
    // Declared real after an operation known to preserve reality.
    Field as_real() const;
    Field as_complex() const;

private:
    void check_compatible(const Field& o, const char* what) const;
    Grid grid_{};
    Repr repr_ = Repr::physical;
    ValueKind kind_ = ValueKind::complex;
    std::vector<cplx> data_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);
Field operator*(cplx s, Field a);

// Physical-space helpers (inputs converted as needed, output physical).
Field real_part(const Field& f);
Field imag_part(const Field& f);
Field make_complex(const Field& re, const Field& im);
Field pointwise_product(const Field& f, const Field& g);  // no dealiasing
Field conj(const Field& f);

// Zero-mode mean of f over the box.
cplx mean(const Field& f);

// Max |f - g| over samples in the representation of f.
double max_abs_diff(const Field& f, const Field& g);
double max_abs(const Field& f);

}  // namespace gps

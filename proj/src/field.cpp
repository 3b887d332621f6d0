#include "gpscat/field.hpp"

#include <algorithm>

#include "gpscat/fft.hpp"

namespace gps {

const char* to_string(Repr r) { return r == Repr::physical ? "physical" : "spectral"; }
const char* to_string(ValueKind k) { return k == ValueKind::real ? "real" : "complex"; }

Field::Field(const Grid& g, Repr r, ValueKind k) : grid_(g), repr_(r), kind_(k), data_(g.size()) {}

Field::Field(const Grid& g, Repr r, ValueKind k, std::vector<cplx> data)
    : grid_(g), repr_(r), kind_(k), data_(std::move(data)) {
    if (data_.size() != g.size()) throw GridError("Field: data size does not match grid");
}

Field Field::from_function(const Grid& g, const std::function<cplx(const Vec3&)>& f, ValueKind k) {
    Field out(g, Repr::physical, k);
    for (std::size_t i = 0; i < out.size(); ++i) {
        cplx v = f(g.x(i));
        out.data_[i] = k == ValueKind::real ? cplx(v.real(), 0.0) : v;
    }
    return out;
}

Field Field::from_real_function(const Grid& g, const std::function<double(const Vec3&)>& f) {
    Field out(g, Repr::physical, ValueKind::real);
    for (std::size_t i = 0; i < out.size(); ++i) out.data_[i] = f(g.x(i));
    return out;
}

Field Field::from_symbol(const Grid& g, const std::function<cplx(const Vec3&)>& s, ValueKind k) {
    Field out(g, Repr::spectral, k);
    for (std::size_t i = 0; i < out.size(); ++i) out.data_[i] = s(g.xi(i));
    return out;
}

Field Field::to_spectral() const {
    if (repr_ == Repr::spectral) return *this;
    Field out = *this;
    out.repr_ = Repr::spectral;
    fft::forward(grid_, out.data_);
    return out;
}

Field Field::to_physical() const {
    if (repr_ == Repr::physical) return *this;
    Field out = *this;
    out.repr_ = Repr::physical;
    fft::inverse(grid_, out.data_);
    if (kind_ == ValueKind::real)
        for (auto& v : out.data_) v = cplx(v.real(), 0.0);
    return out;
}

void Field::check_compatible(const Field& o, const char* what) const {
    if (grid_ != o.grid_) throw GridError(std::string(what) + ": grid mismatch");
    if (repr_ != o.repr_) throw GridError(std::string(what) + ": representation mismatch");
}

Field& Field::operator+=(const Field& o) {
    check_compatible(o, "Field +=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    if (o.kind_ == ValueKind::complex) kind_ = ValueKind::complex;
    return *this;
}

Field& Field::operator-=(const Field& o) {
    check_compatible(o, "Field -=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    if (o.kind_ == ValueKind::complex) kind_ = ValueKind::complex;
    return *this;
}

Field& Field::operator*=(double s) {
    for (auto& v : data_) v *= s;
    return *this;
}

Field& Field::operator*=(cplx s) {
    for (auto& v : data_) v *= s;
    if (s.imag() != 0.0) kind_ = ValueKind::complex;
    return *this;
}

Field& Field::axpy(cplx a, const Field& x) {
    check_compatible(x, "Field axpy");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += a * x.data_[i];
    if (x.kind_ == ValueKind::complex || a.imag() != 0.0) kind_ = ValueKind::complex;
    return *this;
}

double Field::imag_residual() const {
    Field p = to_physical();
    if (p.kind_ == ValueKind::real && repr_ == Repr::spectral) {
        // Physical conversion dropped the imaginary part; recompute it.
        p = *this;
        p.kind_ = ValueKind::complex;
        p = p.to_physical();
    }
    double im = 0.0, mx = 0.0;
    for (auto& v : p.data_) {
        im = std::max(im, std::abs(v.imag()));
        mx = std::max(mx, std::abs(v));
    }
    return mx > 0.0 ? im / mx : 0.0;
}

Field Field::as_real() const {
    Field out = *this;
    out.kind_ = ValueKind::real;
    if (repr_ == Repr::physical)
        for (auto& v : out.data_) v = cplx(v.real(), 0.0);
    return out;
}

Field Field::as_complex() const {
    Field out = *this;
    out.kind_ = ValueKind::complex;
    return out;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }
Field operator*(cplx s, Field a) { return a *= s; }

Field real_part(const Field& f) {
    Field p = f.as_complex().to_physical();
    for (auto& v : p.mutable_data()) v = cplx(v.real(), 0.0);
    return p.as_real();
}

Field imag_part(const Field& f) {
    Field p = f.as_complex().to_physical();
    for (auto& v : p.mutable_data()) v = cplx(v.imag(), 0.0);
    return p.as_real();
}

Field make_complex(const Field& re, const Field& im) {
    Field a = re.to_physical(), b = im.to_physical();
    if (a.grid() != b.grid()) throw GridError("make_complex: grid mismatch");
    Field out(a.grid(), Repr::physical, ValueKind::complex);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = cplx(a[i].real(), b[i].real());
    return out;
}

Field pointwise_product(const Field& f, const Field& g) {
    Field a = f.to_physical(), b = g.to_physical();
    if (a.grid() != b.grid()) throw GridError("pointwise_product: grid mismatch");
    ValueKind k = (a.is_real() && b.is_real()) ? ValueKind::real : ValueKind::complex;
    Field out(a.grid(), Repr::physical, k);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

Field conj(const Field& f) {
    Field p = f.to_physical();
    for (auto& v : p.mutable_data()) v = std::conj(v);
    return p;
}

cplx mean(const Field& f) {
    if (f.repr() == Repr::spectral) return f[0] / f.grid().volume();
    cplx s = 0.0;
    for (auto& v : f.data()) s += v;
    return s / static_cast<double>(f.size());
}

double max_abs_diff(const Field& f, const Field& g) {
    Field b = g.in(f.repr());
    if (f.grid() != b.grid()) throw GridError("max_abs_diff: grid mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i] - b[i]));
    return m;
}

double max_abs(const Field& f) {
    double m = 0.0;
    for (auto& v : f.data()) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace gps

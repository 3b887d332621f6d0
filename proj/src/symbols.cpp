#include "gpscat/symbols.hpp"

#include <sstream>

namespace gps::sym {

namespace {
std::string fmt(double p) {
    std::ostringstream os;
    os << p;
    return os.str();
}
}  // namespace

Symbol1 identity() { return {"1", [](const Vec3&) { return cplx(1.0); }, false, true}; }

Symbol1 bracket_pow(double p) {
    return {"bracket^" + fmt(p), [p](const Vec3& x) { return cplx(std::pow(2.0 + norm2(x), 0.5 * p)); }, false,
            true};
}

Symbol1 U_pow(double p) {
    return {"U^" + fmt(p), [p](const Vec3& x) { return cplx(std::pow(symU(x), p)); }, p < 0.0, true};
}

Symbol1 H() { return {"H", [](const Vec3& x) { return cplx(symH(x)); }, false, true}; }

Symbol1 abs_pow(double s) {
    return {"abs^" + fmt(s), [s](const Vec3& x) { return cplx(std::pow(norm(x), s)); }, s < 0.0, true};
}

Symbol1 riesz(int j) {
    return {"riesz" + std::to_string(j + 1), [j](const Vec3& x) { return cplx(x[j] / norm(x)); }, true, false};
}

Symbol1 derivative(int j) {
    return {"d" + std::to_string(j + 1), [j](const Vec3& x) { return cplx(0.0, x[j]); }, false, true};
}

Symbol1 laplacian() { return {"laplacian", [](const Vec3& x) { return cplx(-norm2(x)); }, false, true}; }

Symbol1 product(const Symbol1& a, const Symbol1& b) {
    auto fa = a.eval, fb = b.eval;
    // i*odd times i*odd is real-even; real-odd factors break reality either way.
    return {a.name + "*" + b.name, [fa, fb](const Vec3& x) { return fa(x) * fb(x); },
            a.singular_at_zero || b.singular_at_zero, a.preserves_real && b.preserves_real};
}

Symbol1 scaled(const Symbol1& a, cplx c) {
    auto fa = a.eval;
    return {fmt(c.real()) + "*" + a.name, [fa, c](const Vec3& x) { return c * fa(x); }, a.singular_at_zero,
            a.preserves_real && c.imag() == 0.0};
}

Symbol1 propagator(double t) {
    return {"exp(-itH)", [t](const Vec3& x) { return std::exp(cplx(0.0, -t * symH(x))); }, false, false};
}

Symbol1 by_name(const std::string& name) {
    auto after = [&](const std::string& pre) { return std::stod(name.substr(pre.size())); };
    if (name == "1") return identity();
    if (name == "U") return U_pow(1.0);
    if (name == "H") return H();
    if (name == "laplacian") return laplacian();
    if (name.rfind("bracket^", 0) == 0) return bracket_pow(after("bracket^"));
    if (name.rfind("U^", 0) == 0) return U_pow(after("U^"));
    if (name.rfind("abs^", 0) == 0) return abs_pow(after("abs^"));
    if (name.rfind("riesz", 0) == 0) return riesz(static_cast<int>(after("riesz")) - 1);
    if (name.size() == 2 && name[0] == 'd' && name[1] >= '1' && name[1] <= '3') return derivative(name[1] - '1');
    throw std::invalid_argument("unknown single multiplier: " + name);
}

}  // namespace gps::sym

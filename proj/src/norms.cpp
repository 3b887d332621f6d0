#include "gpscat/norms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <vector>

namespace gps {

namespace {

double parse_num(const std::string& t) {
    if (t == "inf" || t == "infty") return std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument("bad number in norm spec: " + t);
    return v;
}

std::vector<double> parse_list(const std::string& t) {
    std::vector<double> out;
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_num(item));
    return out;
}

}  // namespace

NormSpec NormSpec::parse(const std::string& text) {
    auto rest = [&](std::size_t k) { return parse_list(text.substr(k)); };
    if (text.rfind("Lorentz", 0) == 0) {
        auto v = rest(7);
        if (v.size() != 2) throw std::invalid_argument("Lorentz norm needs p,q");
        return Lorentz(v[0], v[1]);
    }
    if (text.rfind("Hdot", 0) == 0) {
        auto v = rest(4);
        if (v.size() != 1) throw std::invalid_argument("Hdot norm needs s");
        return Hdot(v[0]);
    }
    if (text.rfind("L", 0) == 0) {
        auto v = rest(1);
        if (v.size() != 1) throw std::invalid_argument("L norm needs p");
        return Lp(v[0]);
    }
    if (text.rfind("H", 0) == 0) {
        auto v = rest(1);
        if (v.empty() || v.size() > 2) throw std::invalid_argument("H norm needs s[,p]");
        return H(v[0], v.size() == 2 ? v[1] : 2.0);
    }
    if (text.rfind("B", 0) == 0) {
        auto v = rest(1);
        if (v.size() != 3) throw std::invalid_argument("Besov norm needs s,p,q");
        return Besov(v[0], v[1], v[2]);
    }
    throw std::invalid_argument("unknown norm spec: " + text);
}

std::string NormSpec::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::Lp: os << "L" << p; break;
        case Kind::Sobolev: os << "H" << s << "," << p; break;
        case Kind::HomSobolev: os << "Hdot" << s; break;
        case Kind::Besov: os << "B" << s << "," << p << "," << q; break;
        case Kind::Lorentz: os << "Lorentz" << p << "," << q; break;
    }
    return os.str();
}

double lp_norm(const Field& f, double p) {
    Field g = f.to_physical();
    if (std::isinf(p)) return max_abs(g);
    if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
    double acc = 0.0;
    if (p == 2.0)
        for (auto& v : g.data()) acc += std::norm(v);
    else
        for (auto& v : g.data()) acc += std::pow(std::abs(v), p);
    return std::pow(std::pow(g.grid().h(), g.grid().d) * acc, 1.0 / p);
}

double sobolev_norm(const Field& f, double s) {
    Field g = f.to_spectral();
    const Grid& G = g.grid();
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) acc += std::pow(2.0 + norm2(G.xi(i)), s) * std::norm(g[i]);
    return std::sqrt(acc / G.volume());
}

double hom_sobolev_norm(const Field& f, double s, const ZeroModePolicy& pol) {
    Field g = f.to_spectral();
    if (s < 0.0) check_zero_mode(g, pol, "hom_sobolev_norm");
    const Grid& G = g.grid();
    double acc = 0.0;
    for (std::size_t i = 1; i < g.size(); ++i) acc += std::pow(norm2(G.xi(i)), s) * std::norm(g[i]);
    if (s == 0.0) acc += std::norm(g[0]);
    return std::sqrt(acc / G.volume());
}

double besov_norm(const Field& f, double s, double p, double q) {
    Field g = f.to_spectral();
    double acc = 0.0, sup = 0.0;
    for (double k : resolvable_shells(g.grid())) {
        double v = std::pow(k, s) * lp_norm(littlewood_paley(g, k, Repr::physical), p);
        if (std::isinf(q))
            sup = std::max(sup, v);
        else
            acc += std::pow(v, q);
    }
    return std::isinf(q) ? sup : std::pow(acc, 1.0 / q);
}

double lorentz_norm(const Field& f, double p, double q) {
    if (!(p >= 1.0) || std::isinf(p)) throw std::invalid_argument("lorentz_norm: need 1 <= p < inf");
    Field g = f.to_physical();
    std::vector<double> a(g.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(g[i]);
    std::sort(a.begin(), a.end(), std::greater<double>());
    const double w = std::pow(g.grid().h(), g.grid().d);
    if (std::isinf(q)) {
        double m = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, a[i] * std::pow((i + 1) * w, 1.0 / p));
        return m;
    }
    // f*(t) = a_i on [i w, (i+1) w); integrate (t^{1/p} f*)^q dt/t exactly.
    const double e = q / p;
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) break;
        acc += std::pow(a[i], q) * (std::pow((i + 1) * w, e) - std::pow(i * w, e));
    }
    return std::pow(acc / e, 1.0 / q);
}

double norm(const Field& f, const NormSpec& spec, const ZeroModePolicy& pol) {
    switch (spec.kind) {
        case NormSpec::Kind::Lp: return lp_norm(f, spec.p);
        case NormSpec::Kind::Sobolev:
            if (spec.p == 2.0) return sobolev_norm(f, spec.s);
            return lp_norm(apply_symbol1(sym::bracket_pow(spec.s), f, Repr::physical), spec.p);
        case NormSpec::Kind::HomSobolev: return hom_sobolev_norm(f, spec.s, pol);
        case NormSpec::Kind::Besov: return besov_norm(f, spec.s, spec.p, spec.q);
        case NormSpec::Kind::Lorentz: return lorentz_norm(f, spec.p, spec.q);
    }
    return 0.0;
}

cplx inner(const Field& f, const Field& g) {
    Field a = f.to_spectral(), b = g.to_spectral();
    if (a.grid() != b.grid()) throw GridError("inner: grid mismatch");
    cplx acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * std::conj(b[i]);
    return acc / a.grid().volume();
}

}  // namespace gps

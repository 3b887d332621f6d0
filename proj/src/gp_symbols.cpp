#include "gpscat/gp_symbols.hpp"

#include <stdexcept>

#include "gpscat/lowrank.hpp"

namespace gps::gp {

namespace {

using Legs = std::vector<Symbol1>;

std::shared_ptr<const ResolventFactor> factor_for(const Grid& g) {
    return resolvent_factor(g.dk(), max_lattice_key(g));
}

Symbol1 phi_leg(std::shared_ptr<const ResolventFactor> f, int r) {
    return {"phi" + std::to_string(r), [f, r](const Vec3& x) { return cplx(f->value(r, x)); }, false, true};
}

// i xi_j phi_r(xi)
Symbol1 dphi_leg(std::shared_ptr<const ResolventFactor> f, int j, int r) {
    return {"d" + std::to_string(j) + "phi" + std::to_string(r),
            [f, j, r](const Vec3& x) { return cplx(0.0, x[j] * f->value(r, x)); }, false, true};
}

// i <xi> xi_j/|xi| phi_r(xi), zero at xi = 0
Symbol1 bhat_phi_leg(std::shared_ptr<const ResolventFactor> f, int j, int r) {
    return {"bhat" + std::to_string(j) + "phi" + std::to_string(r),
            [f, j, r](const Vec3& x) {
                double a = norm(x);
                if (a == 0.0) return cplx(0.0);
                return cplx(0.0, bracket(x) * x[j] / a * f->value(r, x));
            },
            false, true};
}

Symbol1 one1() { return sym::identity(); }
Symbol1 U1() { return sym::U_pow(1.0); }
Symbol1 Uinv1() { return sym::U_pow(-1.0); }

double hat_dot(const Vec3& a, const Vec3& b) {
    double na = norm(a), nb = norm(b);
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot(a, b) / (na * nb);
}

double Uinv_or_zero(const Vec3& a) {
    double r = norm(a);
    return r == 0.0 ? 0.0 : bracket(a) / r;
}

// sum_j sum_r coeff * outer * leg(j,r) (x) leg(j,r)
template <class LegFn>
void add_vector_terms(std::vector<SepTerm>& out, const Grid& g, const Symbol1& outer, double coeff, LegFn leg) {
    auto f = factor_for(g);
    for (int j = 0; j < g.d; ++j)
        for (int r = 0; r < f->rank(); ++r) {
            Symbol1 l = leg(f, j, r);
            out.push_back({outer, l, l, coeff});
        }
}

void add_resolvent_terms(std::vector<SepTerm>& out, const Grid& g, const Symbol1& outer, double coeff) {
    auto f = factor_for(g);
    for (int r = 0; r < f->rank(); ++r) {
        Symbol1 l = phi_leg(f, r);
        out.push_back({outer, l, l, coeff});
    }
}

SymbolBi zero_bi(const std::string& name) {
    SymbolBi b;
    b.name = name;
    b.eval = [](const Vec3&, const Vec3&) { return cplx(0.0); };
    b.symmetric = true;
    b.separable = [](const Grid&) { return std::vector<SepTerm>{}; };
    return b;
}

}  // namespace

std::vector<Symbol1> resolvent_legs(const Grid& leg_lattice) {
    auto f = factor_for(leg_lattice);
    Legs out;
    for (int r = 0; r < f->rank(); ++r) out.push_back(phi_leg(f, r));
    return out;
}

SymbolBi constant_one() {
    SymbolBi b;
    b.name = "one";
    b.eval = [](const Vec3&, const Vec3&) { return cplx(1.0); };
    b.symmetric = true;
    b.separable = [](const Grid&) { return std::vector<SepTerm>{{one1(), one1(), one1(), 1.0}}; };
    return b;
}

SymbolBi dot_product() {
    SymbolBi b;
    b.name = "dot";
    b.eval = [](const Vec3& a, const Vec3& c) { return cplx(dot(a, c)); };
    b.symmetric = true;
    b.separable = [](const Grid& g) {
        std::vector<SepTerm> t;
        for (int j = 0; j < g.d; ++j) t.push_back({one1(), sym::derivative(j), sym::derivative(j), -1.0});
        return t;
    };
    return b;
}

SymbolBi resolvent_symbol() {
    SymbolBi b;
    b.name = "resolvent";
    b.eval = [](const Vec3& a, const Vec3& c) { return cplx(resolvent(a, c)); };
    b.symmetric = true;
    b.separable = [](const Grid& g) {
        std::vector<SepTerm> t;
        add_resolvent_terms(t, g, one1(), 1.0);
        return t;
    };
    return b;
}

SymbolBi Bprime(int j) {
    SymbolBi b;
    b.symmetric = true;
    switch (j) {
        case 1:
        case 2: {
            double s = j == 1 ? -1.0 : 1.0;
            b.name = "Bprime" + std::to_string(j);
            b.eval = [s](const Vec3& a, const Vec3& c) { return cplx(s * resolvent(a, c)); };
            b.separable = [s](const Grid& g) {
                std::vector<SepTerm> t;
                add_resolvent_terms(t, g, one1(), s);
                return t;
            };
            return b;
        }
        case 3:
            // 3 - <xi>^2 Bprime1 = 3 + <xi>^2 resolvent
            b.name = "Bprime3";
            b.eval = [](const Vec3& a, const Vec3& c) { return cplx(3.0 + (2.0 + norm2(a + c)) * resolvent(a, c)); };
            b.separable = [](const Grid& g) {
                std::vector<SepTerm> t{{one1(), one1(), one1(), 3.0}};
                add_resolvent_terms(t, g, sym::bracket_pow(2.0), 1.0);
                return t;
            };
            return b;
        case 4:
            b.name = "Bprime4";
            b.eval = [](const Vec3& a, const Vec3& c) { return cplx(-2.0 * dot(a, c) * resolvent(a, c)); };
            b.separable = [](const Grid& g) {
                std::vector<SepTerm> t;
                add_vector_terms(t, g, one1(), 2.0, dphi_leg);
                return t;
            };
            return b;
        case 5: return zero_bi("Bprime5");
        default: throw std::invalid_argument("Bprime index must be 1..5");
    }
}

SymbolBi B3() {
    SymbolBi b;
    b.name = "B3";
    b.symmetric = true;
    b.eval = [](const Vec3& a, const Vec3& c) {
        return cplx(symU(a + c) * (4.0 + 2.0 * dot(a, c) * resolvent(a, c)));
    };
    b.separable = [](const Grid& g) {
        std::vector<SepTerm> t{{U1(), one1(), one1(), 4.0}};
        add_vector_terms(t, g, U1(), -2.0, dphi_leg);
        return t;
    };
    return b;
}

SymbolBi B3_printed() {
    SymbolBi b;
    b.name = "B3-printed";
    b.symmetric = true;
    b.eval = [](const Vec3& a, const Vec3& c) {
        return cplx(-2.0 * symU(a + c) * (4.0 + 4.0 * norm2(a) + 4.0 * norm2(c) - dot(a, c)) * resolvent(a, c));
    };
    // -2U[4 - (4 + xi1.xi2) resolvent]
    b.separable = [](const Grid& g) {
        std::vector<SepTerm> t{{U1(), one1(), one1(), -8.0}};
        add_resolvent_terms(t, g, U1(), 8.0);
        add_vector_terms(t, g, U1(), -2.0, dphi_leg);
        return t;
    };
    return b;
}

SymbolBi B4(double sign) {
    SymbolBi b;
    b.name = sign == 1.0 ? "B4" : "B4-mutant";
    b.symmetric = true;
    b.eval = [sign](const Vec3& a, const Vec3& c) {
        return cplx(-2.0 * sign * symU(a + c) * bracket(a) * bracket(c) * hat_dot(a, c) * resolvent(a, c));
    };
    b.separable = [sign](const Grid& g) {
        std::vector<SepTerm> t;
        add_vector_terms(t, g, U1(), 2.0 * sign, bhat_phi_leg);
        return t;
    };
    return b;
}

SymbolBi energy_Bprime(int j) {
    SymbolBi b;
    b.symmetric = true;
    b.name = "energy-Bprime" + std::to_string(j);
    switch (j) {
        case 1:
        case 2:
            b.eval = [](const Vec3& a, const Vec3& c) { return cplx(1.0 / (2.0 + norm2(a + c))); };
            b.separable = [](const Grid&) {
                return std::vector<SepTerm>{{sym::bracket_pow(-2.0), one1(), one1(), 1.0}};
            };
            return b;
        case 3:
            b.eval = [](const Vec3&, const Vec3&) { return cplx(2.0); };
            b.separable = [](const Grid&) { return std::vector<SepTerm>{{one1(), one1(), one1(), 2.0}}; };
            return b;
        case 4: return zero_bi(b.name);
        case 5:
            b.symmetric = false;
            b.eval = [](const Vec3& a, const Vec3& c) { return cplx(4.0 * dot(a + c, c) / (2.0 + norm2(a + c))); };
            b.separable = [](const Grid& g) {
                std::vector<SepTerm> t;
                for (int k = 0; k < g.d; ++k) {
                    Symbol1 outer = sym::product(sym::bracket_pow(-2.0), sym::derivative(k));
                    t.push_back({outer, one1(), sym::derivative(k), -4.0});
                }
                return t;
            };
            return b;
        default: throw std::invalid_argument("energy_Bprime index must be 1..5");
    }
}

SymbolBi decaying_Bprime(int j) {
    SymbolBi b;
    b.symmetric = true;
    b.name = "decaying-Bprime" + std::to_string(j);
    auto w = [](const Vec3& a, const Vec3& c) { return dot(a, c) / (2.0 + norm2(a + c)); };
    switch (j) {
        case 1:
            b.eval = [w](const Vec3& a, const Vec3& c) { return cplx((3.0 - 4.0 * w(a, c)) / (2.0 + norm2(a + c))); };
            return b;
        case 2:
            b.eval = [w](const Vec3& a, const Vec3& c) { return cplx((1.0 - 4.0 * w(a, c)) / (2.0 + norm2(a + c))); };
            return b;
        case 3:
        case 4: b.eval = [w](const Vec3& a, const Vec3& c) { return cplx(4.0 * w(a, c)); }; return b;
        case 5:
            throw std::invalid_argument(
                "decaying-Bprime5 is unavailable: its displayed formula is truncated in the source text");
        default: throw std::invalid_argument("decaying_Bprime index must be 1..5");
    }
}

//----------------------------------------------------------------------------
// Trilinear
//----------------------------------------------------------------------------
namespace {

TriTerm tri(TriTerm::Group g, Symbol1 l1, Symbol1 l2, Symbol1 l3, std::optional<SymbolBi> pair, Symbol1 outer,
            double c) {
    TriTerm t;
    t.group = g;
    t.leg1 = std::move(l1);
    t.leg2 = std::move(l2);
    t.leg3 = std::move(l3);
    t.pair = std::move(pair);
    t.outer = std::move(outer);
    t.coeff = c;
    return t;
}

using G = TriTerm::Group;

// 1 - 4 K(xi1, xi2+xi3) - 6 K(xi1+xi2, xi3) with given legs
std::vector<TriTerm> c3_plan(const Symbol1& l3) {
    return {tri(G::first_two, one1(), one1(), l3, std::nullopt, one1(), 1.0),
            tri(G::last_two, one1(), one1(), l3, resolvent_symbol(), one1(), -4.0),
            tri(G::first_two, one1(), one1(), l3, resolvent_symbol(), one1(), -6.0)};
}

std::vector<TriTerm> c4_plan(const Symbol1& l) {
    return {tri(G::first_two, l, l, l, std::nullopt, one1(), 1.0),
            tri(G::first_two, l, l, l, resolvent_symbol(), one1(), -2.0)};
}

double c3p(const Vec3& a, const Vec3& b, const Vec3& c) {
    return 1.0 - 4.0 * resolvent(a, b + c) - 6.0 * resolvent(a + b, c);
}
double c4p(const Vec3& a, const Vec3& b, const Vec3& c) { return 1.0 - 2.0 * resolvent(a + b, c); }

}  // namespace

SymbolTri constant_one3() {
    SymbolTri t;
    t.name = "one3";
    t.eval = [](const Vec3&, const Vec3&, const Vec3&) { return cplx(1.0); };
    t.plan = {tri(G::first_two, one1(), one1(), one1(), std::nullopt, one1(), 1.0)};
    return t;
}

SymbolTri Cprime3() {
    SymbolTri t;
    t.name = "Cprime3";
    t.eval = [](const Vec3& a, const Vec3& b, const Vec3& c) { return cplx(c3p(a, b, c)); };
    t.plan = c3_plan(one1());
    return t;
}

SymbolTri Cprime4() {
    SymbolTri t;
    t.name = "Cprime4";
    t.eval = [](const Vec3& a, const Vec3& b, const Vec3& c) { return cplx(c4p(a, b, c)); };
    t.plan = c4_plan(one1());
    return t;
}

SymbolTri C1() {
    SymbolTri t;
    t.name = "C1";
    t.eval = [](const Vec3& a, const Vec3& b, const Vec3& c) { return cplx(symU(a + b + c)); };
    t.plan = {tri(G::first_two, one1(), one1(), one1(), std::nullopt, U1(), 1.0)};
    return t;
}

SymbolTri C2() {
    SymbolTri t;
    t.name = "C2";
    t.eval = [](const Vec3& a, const Vec3& b, const Vec3& c) {
        return cplx(symU(a + b + c) * Uinv_or_zero(a) * Uinv_or_zero(b));
    };
    t.plan = {tri(G::first_two, Uinv1(), Uinv1(), one1(), std::nullopt, U1(), 1.0)};
    t.singular_leg[0] = t.singular_leg[1] = true;
    return t;
}

SymbolTri C3() {
    SymbolTri t;
    t.name = "C3";
    t.eval = [](const Vec3& a, const Vec3& b, const Vec3& c) { return cplx(Uinv_or_zero(c) * c3p(a, b, c)); };
    t.plan = c3_plan(Uinv1());
    t.singular_leg[2] = true;
    return t;
}

SymbolTri C4() {
    SymbolTri t;
    t.name = "C4";
    t.eval = [](const Vec3& a, const Vec3& b, const Vec3& c) {
        return cplx(Uinv_or_zero(a) * Uinv_or_zero(b) * Uinv_or_zero(c) * c4p(a, b, c));
    };
    t.plan = c4_plan(Uinv1());
    t.singular_leg[0] = t.singular_leg[1] = t.singular_leg[2] = true;
    return t;
}

SymbolBi Q1_left() {
    SymbolBi b = resolvent_symbol();
    b.name = "Q1-left";
    b.eval = [](const Vec3& a, const Vec3& c) { return cplx(-2.0 * resolvent(a, c)); };
    b.separable = [](const Grid& g) {
        std::vector<SepTerm> t;
        add_resolvent_terms(t, g, one1(), -2.0);
        return t;
    };
    return b;
}

std::vector<std::string> bilinear_names() {
    return {"one", "dot", "resolvent", "Bprime1", "Bprime2", "Bprime3", "Bprime4", "Bprime5", "B3", "B3-printed",
            "B4", "Q1-left", "energy-Bprime1", "energy-Bprime2", "energy-Bprime3", "energy-Bprime4",
            "energy-Bprime5", "decaying-Bprime1", "decaying-Bprime2", "decaying-Bprime3", "decaying-Bprime4"};
}

std::vector<std::string> trilinear_names() { return {"one3", "Cprime3", "Cprime4", "C1", "C2", "C3", "C4"}; }

SymbolBi bilinear_by_name(const std::string& name) {
    if (name == "one") return constant_one();
    if (name == "dot") return dot_product();
    if (name == "resolvent") return resolvent_symbol();
    if (name == "B3") return B3();
    if (name == "B3-printed") return B3_printed();
    if (name == "B4") return B4();
    if (name == "Q1-left") return Q1_left();
    auto tail = [&](const std::string& pre) { return std::stoi(name.substr(pre.size())); };
    if (name.rfind("Bprime", 0) == 0) return Bprime(tail("Bprime"));
    if (name.rfind("energy-Bprime", 0) == 0) return energy_Bprime(tail("energy-Bprime"));
    if (name.rfind("decaying-Bprime", 0) == 0) return decaying_Bprime(tail("decaying-Bprime"));
    throw std::invalid_argument("unknown bilinear symbol: " + name);
}

SymbolTri trilinear_by_name(const std::string& name) {
    if (name == "one3") return constant_one3();
    if (name == "Cprime3") return Cprime3();
    if (name == "Cprime4") return Cprime4();
    if (name == "C1") return C1();
    if (name == "C2") return C2();
    if (name == "C3") return C3();
    if (name == "C4") return C4();
    throw std::invalid_argument("unknown trilinear symbol: " + name);
}

}  // namespace gps::gp

#pragma once
// Multiplier library for the quadratic and cubic terms of the
// Gross-Pitaevskii perturbation equations around the constant state.
//
// Naming: "resolvent" is 1/(2 + |xi1|^2 + |xi2|^2). The active normal form uses
// Bprime1 = -resolvent, Bprime2 = +resolvent.

#include <string>
#include <vector>

#include "gpscat/multilinear.hpp"

namespace gps::gp {

inline double resolvent(const Vec3& a, const Vec3& b) { return 1.0 / (2.0 + norm2(a) + norm2(b)); }

// Low-rank legs of the resolvent kernel for the given leg lattice.
std::vector<Symbol1> resolvent_legs(const Grid& leg_lattice);

SymbolBi constant_one();
SymbolBi dot_product();         // xi1 . xi2
SymbolBi resolvent_symbol();    // 1/(2+|xi1|^2+|xi2|^2)

// Active normal form, j = 1..5.
SymbolBi Bprime(int j);
// Output-side multipliers of the quadratic terms.
SymbolBi B3();                  // U(xi) (3 - <xi>^2 Bprime1)
SymbolBi B3_printed();          // closed form as typeset in the source text
SymbolBi B4(double sign = 1.0); // sign != 1 only for mutation tests

// Energy normal form: Bprime1 = Bprime2 = <xi>^{-2}, Bprime4 = 0,
// Bprime5 = 4 <xi>^{-2} xi.xi2.
SymbolBi energy_Bprime(int j);
// Variant with decay in Bprime3; j = 1..4 (j = 5 unavailable).
SymbolBi decaying_Bprime(int j);

SymbolTri constant_one3();
SymbolTri Cprime3();
SymbolTri Cprime4();
SymbolTri C1();
SymbolTri C2();
SymbolTri C3();
SymbolTri C4();

// -2 * resolvent, the left factor of the quartic term.
SymbolBi Q1_left();

std::vector<std::string> bilinear_names();
std::vector<std::string> trilinear_names();
SymbolBi bilinear_by_name(const std::string& name);
SymbolTri trilinear_by_name(const std::string& name);

}  // namespace gps::gp

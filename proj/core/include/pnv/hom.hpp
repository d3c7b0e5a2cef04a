#pragma once

#include "pnv/dga.hpp"

#include <optional>

namespace pnv {

// A hom complex realised on a concrete basis of maps.  `cx` is the complex
// as a bimodule (with the induced actions for the one-sided variants), and
// basis[i] is the actual map realising the i-th basis element.
struct HomComplex {
  BimodulePtr src, dst;
  BimodulePtr cx;
  std::vector<BimoduleMap> basis;

  // Coordinates of f in this basis, if f lies in the span.
  std::optional<ExactMatrix> coords(const BimoduleMap& f) const;
  // The map with the given coordinate vector (cx.dim x 1).
  BimoduleMap realize(const ExactMatrix& coords) const;
};

// Bilinear maps M -> N over the common pair (A,B); the result is a complex
// of k-vector spaces (a bimodule over the ground field).
HomComplex hom_complex(const BimodulePtr& m, const BimodulePtr& n);
// Right-B-linear maps, M over (A1,B), N over (A2,B); result over (A2,A1)
// with (a2.phi.a1)(x) = a2.phi(a1.x).
HomComplex hom_right(const BimodulePtr& m, const BimodulePtr& n);
// Left-A-linear maps (phi(a.x) = (-1)^{|a||phi|} a.phi(x)), M over (A,B1),
// N over (A,B2); result over (B1,B2) with
// (b1.phi)(x) = (-1)^{|b1|(|phi|+|x|)} phi(x.b1),
// (phi.b2)(x) = (-1)^{|b2||x|} phi(x).b2
// (the twist makes x (x) phi -> (-1)^{|x||phi|} phi(x) strictly bilinear).
HomComplex hom_left(const BimodulePtr& m, const BimodulePtr& n);

// E^vee = Hom_B(E, B) over (B,A), and vee-E = Hom_A(E, A) over (B,A),
// for E over (A,B).  Preconditions: one-sided projectivity.
HomComplex dual_right(const BimodulePtr& e);
HomComplex dual_left(const BimodulePtr& e);

// Solve d(h) = f among bilinear maps; f must be closed and bilinear.
std::optional<BimoduleMap> nullhomotopy(const BimoduleMap& f);

// Graded projectivity over the chosen side, decided by splitting the free
// cover built on the homogeneous basis.  The splitting witness is cached on
// the bimodule.  For side == right the witness S : M -> M (x) B satisfies
// pi S = id with pi the action; columns of S give a dual basis.
bool is_projective(const BimodulePtr& m, bool right_side);
std::optional<ExactMatrix> projective_splitting(const BimodulePtr& m, bool right_side);

}  // namespace pnv

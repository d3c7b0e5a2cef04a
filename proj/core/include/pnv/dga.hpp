#pragma once

#include "pnv/exact.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pnv {

// Finite-dimensional DG algebra, given by structure constants on a graded
// basis.  mult is dim x dim^2 with column index a*dim+b for the product a*b;
// diff is the degree +1 differential.
struct DgAlgebra {
  FieldSpec field;
  std::vector<std::string> label;
  std::vector<int> deg;
  int unit = 0;
  ExactMatrix mult;
  ExactMatrix diff;

  int dim() const { return (int)deg.size(); }
  // diag(+-1) with (-1)^deg, as a sign vector for Koszul bookkeeping
  std::vector<int> koszul_signs(int power = 1) const;
};

using AlgebraPtr = std::shared_ptr<const DgAlgebra>;

// DG bimodule over (left, right).  lact is dim x (left.dim*dim) with column
// (a,m) = a*dim+m; ract is dim x (dim*right.dim) with column (m,b).
struct DgBimodule {
  AlgebraPtr left, right;
  std::vector<std::string> label;
  std::vector<int> deg;
  ExactMatrix lact;
  ExactMatrix ract;
  ExactMatrix diff;

  int dim() const { return (int)deg.size(); }
  FieldSpec field() const { return left->field; }
  std::vector<int> koszul_signs(int power = 1) const;

  // lazily filled by is_projective / projective_splitting
  mutable std::optional<bool> proj_left_cache, proj_right_cache;
  mutable std::optional<ExactMatrix> split_left_cache, split_right_cache;
};

using BimodulePtr = std::shared_ptr<const DgBimodule>;

// Graded map of bimodules.  Bilinearity over the actions is a property, not
// an invariant of the type: f(a.m.b) = (-1)^{deg(f)|a|} a.f(m).b when it holds.
struct BimoduleMap {
  BimodulePtr src, dst;
  int degree = 0;
  ExactMatrix mat;
};

// Throws std::runtime_error with a description if the axioms fail
// (associativity, unit, degree compatibility, d^2 = 0, Leibniz).
void validate(const DgAlgebra& a);
void validate(const DgBimodule& m);
void validate_map_degrees(const BimoduleMap& f);  // entry support vs degree

AlgebraPtr ground_algebra(FieldSpec f);                 // the algebra k
AlgebraPtr make_algebra(DgAlgebra a);                   // validates, wraps
BimodulePtr make_bimodule(DgBimodule m);                // validates, wraps
BimodulePtr diagonal_bimodule(const AlgebraPtr& a);     // A as (A,A)-bimodule
// The underlying complex of vector spaces, as a (k,k)-bimodule.
BimodulePtr underlying_complex(const BimodulePtr& m);

std::map<int, int> dims_by_degree(const DgBimodule& m);
std::vector<int> degree_indices(const DgBimodule& m, int d);

// The action of a single algebra basis element, as a dim x dim matrix.
ExactMatrix lact_slice(const DgBimodule& m, int a);
ExactMatrix ract_slice(const DgBimodule& m, int b);

// M[s]: degrees drop by s, differential scaled by (-1)^s, left action picks
// up the Koszul twist (-1)^{s|a|}, right action unchanged.
BimodulePtr shift(const BimodulePtr& m, int s);
// f[s] between shifted modules: matrix scaled by (-1)^{s deg(f)}.
BimoduleMap shift_map(const BimoduleMap& f, int s);

BimoduleMap identity_map(const BimodulePtr& m);
BimoduleMap zero_map(const BimodulePtr& src, const BimodulePtr& dst, int degree);
BimoduleMap compose(const BimoduleMap& g, const BimoduleMap& f);  // g after f
BimoduleMap add(const BimoduleMap& f, const BimoduleMap& g);
BimoduleMap sub(const BimoduleMap& f, const BimoduleMap& g);
BimoduleMap scale(const BimoduleMap& f, const Scalar& c);
BimoduleMap negate(const BimoduleMap& f);

// d(f) = d_N f - (-1)^{deg f} f d_M
BimoduleMap map_differential(const BimoduleMap& f);
bool is_closed(const BimoduleMap& f);
bool is_bilinear(const BimoduleMap& f);

struct ConeTriple {
  BimodulePtr total;            // src[1] (+) dst
  BimoduleMap incl_dst;         // dst -> cone, closed degree 0
  BimoduleMap proj_shifted_src; // cone -> src[1], closed degree 0
};
// Mapping cone of a closed degree-0 bilinear map, differential
// [[-d_src, 0], [f, d_dst]] on src[1] (+) dst.
ConeTriple cone(const BimoduleMap& f);

struct SumTriple {
  BimodulePtr total;
  std::vector<BimoduleMap> incl;
  std::vector<BimoduleMap> proj;
};
SumTriple direct_sum(const std::vector<BimodulePtr>& parts);

// Cohomology as a complex of vector spaces (a bimodule over the ground field
// with zero differential), together with a choice of representing cycles
// (incl) and a projection defined on cycles (proj).
struct Cohomology {
  BimodulePtr H;
  ExactMatrix incl;  // m.dim x H.dim
  ExactMatrix proj;  // H.dim x m.dim, proj*incl = I, vanishes on boundaries
};
Cohomology cohomology(const BimodulePtr& m);
std::map<int, int> cohomology_dims(const DgBimodule& m);
bool is_acyclic(const DgBimodule& m);

// True iff the induced map on cohomology is bijective in every degree.
bool is_quasi_iso(const BimoduleMap& f);
// The induced map between cohomology bimodules (for evidence tables).
BimoduleMap cohomology_map(const BimoduleMap& f, const Cohomology& hs, const Cohomology& hd);

bool same_algebra(const AlgebraPtr& a, const AlgebraPtr& b);

}  // namespace pnv

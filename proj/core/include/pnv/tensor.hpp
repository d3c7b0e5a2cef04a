#pragma once

#include "pnv/dga.hpp"

#include <map>
#include <utility>
#include <vector>

namespace pnv {

// The chain M_1 (x)_{B_1} M_2 (x)_{B_2} ... M_k, realised as a quotient of
// the free tensor product (over the ground field) by the balancing relations
// at every junction.  `sect` embeds the chosen quotient basis into the free
// product, `proj` is a retraction vanishing on the relations:
//   proj * sect = id,   proj * (balancing relation) = 0.
// The free basis is indexed row-major, matching iterated kron.  Internally
// the quotient is built by tensoring left to right, so intermediate objects
// stay small; free_dim is the full product of the factor dimensions.
struct ChainBasis {
  std::vector<BimodulePtr> factors;
  BimodulePtr total;
  ExactMatrix proj;  // total.dim x free_dim
  ExactMatrix sect;  // free_dim x total.dim
  long long free_dim = 0;
};

// Build the chain.  Each junction requires the left factor to be projective
// over the junction algebra on the right, or the right factor on the left
// (so the underived tensor product computes the derived one); otherwise
// throws.  Junction algebras must match pairwise.
ChainBasis tensor_chain(const std::vector<BimodulePtr>& factors);

// Convenience: the chain of two, as in the bimodule operation M (x)_B N.
BimodulePtr tensor_over(const BimodulePtr& m, const BimodulePtr& n);

// Slot structure of a free tensor product: per slot, the degrees of its
// basis (sizes give the dimensions).
struct FreeLayout {
  std::vector<std::vector<int>> degs;
  long long total_dim() const;
};
FreeLayout layout_of(const std::vector<BimodulePtr>& factors);

// One layer of a free-level operator: a matrix applied to `arity` adjacent
// slots starting at `slot`, producing the slots described by out_degs.
// Application carries the Koszul sign (-1)^{koszul_degree * |prefix|} over
// the slots to the left (use koszul_degree = 0 for sign-free layers such as
// right actions).
struct SlotOp {
  int slot = 0;
  int arity = 1;
  std::vector<std::vector<int>> out_degs;
  ExactMatrix mat;  // (prod of out dims) x (prod of in dims)
  int koszul_degree = 0;
};

// Apply the layer to every column of `vecs` ((prod dims) x ncols), returning
// the new layout and columns.
std::pair<FreeLayout, ExactMatrix> apply_slot_op(const FreeLayout& lay,
                                                 const SlotOp& op,
                                                 const ExactMatrix& vecs);

// The map between chains induced by a free-level operator given as layers,
// applied first-to-last to src.sect: dst.proj * (ops... * src.sect).
// The caller asserts that the operator descends to the quotients.
BimoduleMap induce_ops(const ChainBasis& src, const ChainBasis& dst,
                       const std::vector<SlotOp>& ops, int degree);

// f_1 (x) ... (x) f_k with (f (x) g)(x (x) y) = (-1)^{|g||x|} f(x) (x) g(y).
BimoduleMap tensor_map(const ChainBasis& src, const ChainBasis& dst,
                       const std::vector<BimoduleMap>& fs);

// Dense matrix of the same operator on the free product; only sensible for
// small chains (tests and cross-checks).
ExactMatrix free_tensor_matrix(const std::vector<BimoduleMap>& fs);

// Same contract as induce_ops for a dense free-level matrix.
BimoduleMap induce(const ChainBasis& src, const ChainBasis& dst,
                   const ExactMatrix& free_mat, int degree);

// Total degrees of the composite (row-major) basis of a free product.
std::vector<int> composite_degrees(const std::vector<BimodulePtr>& factors);

// Memoising cache, keyed by the factor pointers.
class ChainCache {
 public:
  const ChainBasis& get(const std::vector<BimodulePtr>& factors);

 private:
  std::map<std::vector<const DgBimodule*>, ChainBasis> store;
};

}  // namespace pnv

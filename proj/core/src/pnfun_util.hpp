#pragma once

// Internal helpers shared by the pnfun translation units.  Not installed.

#include "pnv/hom.hpp"
#include "pnv/linsys.hpp"
#include "pnv/pnfun.hpp"
#include "pnv/tensor.hpp"
#include "pnv/twisted.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pnv::detail {

void require(bool ok, const std::string& msg);

// Same shape as far as any matrix is concerned: algebras, dimensions and
// degree vectors agree.
bool struct_equal(const DgBimodule& a, const DgBimodule& b);

// Reinterpret the endpoints of a map across structurally equal bimodules.
BimoduleMap rebase(const BimoduleMap& f, const BimodulePtr& src,
                   const BimodulePtr& dst);

// A degree-d map as a degree-0 map into the shifted target (same matrix;
// the shift conventions make closedness and bilinearity line up verbatim).
BimoduleMap as_degree0(const BimoduleMap& f);

// --- slot operators on free tensor layouts ---------------------------------

// g : chain(in_f) -> chain(out_f) applied at `slot`, Koszul sign g.degree.
SlotOp op_map(ChainCache& cc, int slot, const std::vector<BimodulePtr>& in_f,
              const std::vector<BimodulePtr>& out_f, const BimoduleMap& g);

// Insert the image of the algebra unit under u : diag -> chain(out_f); the
// element is central, so the insertion descends at any junction.
SlotOp op_insert(ChainCache& cc, int slot, const std::vector<BimodulePtr>& out_f,
                 const BimoduleMap& u);

// Contract the adjacent pair (p0, p1) with eval : chain({p0, p1}) -> diag and
// absorb the algebra value into the neighbouring factor (nb sits at
// first_slot when nb_left, else at first_slot + 2).
SlotOp op_eval(ChainCache& cc, int first_slot, const BimodulePtr& p0,
               const BimodulePtr& p1, const BimoduleMap& eval,
               const BimodulePtr& nb, bool nb_left);

// Induce a single op between the chains on the given factor lists.
BimoduleMap step(ChainCache& cc, const std::vector<BimodulePtr>& src_f,
                 const std::vector<BimodulePtr>& dst_f, const SlotOp& op,
                 int degree);

// --- affine families of maps and quasi-iso search --------------------------

struct MapFamily {
  bool solvable = false;
  ExactMatrix particular;
  std::vector<ExactMatrix> basis;
};

// All closed bilinear maps src -> dst of the given degree.
MapFamily closed_bilinear_maps(const BimodulePtr& src, const BimodulePtr& dst,
                               int degree);

// The slice of an affine solution space seen by one variable.
MapFamily var_family(const LinearSystem::AffineSpace& sp, int var);

enum class QisoOutcome { Found, DimsMismatch, SpaceEmpty, NoneExhaustive, Exhausted };
const char* to_string(QisoOutcome o);

struct QisoResult {
  QisoOutcome outcome = QisoOutcome::Exhausted;
  std::optional<BimoduleMap> map;
};

// Search the affine family particular + span(basis) of closed degree-0 maps
// src -> dst for a quasi-iso.  Dimension tables are compared first;
// deterministic candidates precede seeded random draws; the whole coefficient
// space is enumerated when it is small enough.
QisoResult qiso_in_family(const BimodulePtr& src, const BimodulePtr& dst,
                          const MapFamily& fam, const IsoSearchPolicy& pol);

// Family = all closed bilinear maps of the given degree.
QisoResult qiso_search(const BimodulePtr& src, const BimodulePtr& dst,
                       int degree, const IsoSearchPolicy& pol);

void put_dims(ConditionReport& rep, const std::string& key, const DgBimodule& m);

}  // namespace pnv::detail

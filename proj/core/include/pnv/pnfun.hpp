#pragma once

#include "pnv/dga.hpp"
#include "pnv/hom.hpp"
#include "pnv/tensor.hpp"
#include "pnv/twisted.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pnv {

// ------------------------------------------------------------- functor data

// A functor F = - (x)_A E : D(A) -> D(B) presented by its kernel E, graded
// projective on both sides so the right adjoint R = Hom_B(E, B) and the left
// adjoint L = Hom_A(E, A) are again kernel functors.  The kernel of a
// composite G o F (F applied first) is the chain [ker F, ker G]; the
// adjunction units and counits below are strict in this model (all four
// triangle identities hold as matrix equalities).
struct FunctorData {
  AlgebraPtr A, B;
  BimodulePtr diagA, diagB;
  BimodulePtr E;     // over (A, B)
  HomComplex dualr;  // E^vee = Hom_B(E, B) over (B, A), with realised basis
  HomComplex duall;  // vee-E = Hom_A(E, A) over (B, A)
  BimodulePtr Ev, El;

  BimodulePtr RF;  // chain [E, Ev] over (A, A)
  BimodulePtr FR;  // chain [Ev, E] over (B, B)
  BimodulePtr LF;  // chain [E, El] over (A, A)
  BimodulePtr FL;  // chain [El, E] over (B, B)

  BimoduleMap unit;     // A -> RF, coevaluation against a dual basis
  BimoduleMap trace;    // FR -> B, evaluation
  BimoduleMap unit_l;   // B -> FL
  BimoduleMap trace_l;  // LF -> A, (x (x) phi) -> (-1)^{|x||phi|} phi(x)

  std::shared_ptr<ChainCache> chains;
  const ChainBasis& chain(const std::vector<BimodulePtr>& factors) const;
};

// Builds the adjunction package.  Verifies projectivity on both sides,
// closedness and bilinearity of the four structure maps, and the four
// triangle identities exactly; throws on any failure.
FunctorData make_functor_data(const AlgebraPtr& A, const AlgebraPtr& B,
                              const BimodulePtr& E);

// ----------------------------------------------------------------- (co)monad

struct MonadData {
  BimodulePtr RF;    // hom model: End_B(E) as an (A, A)-bimodule
  HomComplex end;    // realised endomorphism basis
  BimoduleMap unit;  // A -> RF, a -> left multiplication by a
  BimoduleMap mult;  // RF (x)_A RF -> RF, composition
};
// Monad laws hold exactly; asserted at construction.
MonadData monad(const FunctorData& fd);

struct ComonadData {
  BimodulePtr FR;      // tensor model [Ev, E] over (B, B)
  BimoduleMap counit;  // evaluation
  BimoduleMap comult;  // FR -> [Ev, E, Ev, E], unit inserted in the middle
};
ComonadData comonad(const FunctorData& fd);

// The multiplication of the monad in the tensor model:
// [E, Ev, E, Ev] -> [E, Ev], middle pair contracted by the evaluation.
BimoduleMap monad_mult_tensor(const FunctorData& fd);

// --------------------------------------------------------------- structures

// The data (H, Q_n, gamma): an invertible (A, A)-bimodule H with a chosen
// inverse witness, a cyclic coextension of A by H of degree n, and a closed
// degree-0 quasi-iso gamma from its convolution to the RF chain carrying the
// inclusion of A to the adjunction unit up to a stored homotopy.
struct PnStructure {
  BimodulePtr H, Hinv;
  BimoduleMap ev_hh;   // [H, Hinv] -> A, closed degree-0 quasi-iso
  BimoduleMap ev_hih;  // [Hinv, H] -> A
  CyclicCoextension coext;
  BimoduleMap gamma;      // conv(coext) -> RF chain
  BimoduleMap unit_htpy;  // d(unit_htpy) = gamma o iota_full - unit
  std::shared_ptr<const CoextensionMaps> maps;

  int n() const { return coext.n; }
  // gamma restricted to the H block / to the tail Q_i
  BimoduleMap gamma1() const;
  BimoduleMap gamma_tail(int i) const;
  // the degree-1 component H -> A of the coextension
  BimoduleMap sigma1() const;
};

// Validates everything (n >= 1, inverse witnesses are quasi-isos, gamma is a
// closed degree-0 quasi-iso, unit homotopy solvable) and fills the derived
// maps; throws on failure.
PnStructure make_pn_structure(const FunctorData& fd, const BimodulePtr& H,
                              const BimodulePtr& Hinv, const BimoduleMap& ev_hh,
                              const BimoduleMap& ev_hih, CyclicCoextension coext,
                              const BimoduleMap& gamma);

// --------------------------------------------------------------------- psi

// psi : FHR -> FR by the closed formula (FR trace - trace FR) o F gamma_1 R;
// in this strict model the correction term of the general formula vanishes.
// Verifies: closed, trace o psi and psi o F iota_1 R nullhomotopic, agreement
// up to homotopy with the splitting construction through F Q_1 R, and
// independence of the solved splitting.  Throws if Q_1 is not F-split.
struct PsiResult {
  BimoduleMap psi;            // [Ev, H, E] -> [Ev, E], degree 0
  BimoduleMap psi_tail;       // [Ev, Q_1, E] -> [Ev, E], gamma restricted to Q_1
  BimoduleMap trace_psi_h;    // d(.) = trace o psi
  BimoduleMap psi_iota_h;     // d(.) = psi_tail o (F iota_1 R)
  BimoduleMap splitting;      // solved phi : FHR -> FQ1R
  BimoduleMap split_diff_h;   // d(.) = psi - psi_via_splitting
};
PsiResult psi(const FunctorData& fd, const PnStructure& S);

// ----------------------------------------------------------------- P-twists

// P_F = conv( FHR[2] -> FR[1] -> B ) with components psi and trace and a
// solved degree -1 filler.
struct PTwistResult {
  Convolution conv;
  BimodulePtr total;
  BimoduleMap incl_B;  // B -> P_F, closed (index-0 block)
  PsiResult psi;
};
PTwistResult p_twist(const FunctorData& fd, const PnStructure& S);

// P'_F = conv( B -> FL[-1] -> FH'L[-2] ) with components the unit and the
// left dual psi'; also the composite P_F (x)_B P'_F and the unit map into it
// (solved with its (0,0)-component pinned to the identity).
struct PTwistDualResult {
  Convolution conv;
  BimodulePtr total;       // P'_F
  BimodulePtr Hdual;       // H' = vee-H over (A, A)
  BimoduleMap psi_dual;    // [El, E] -> [El, H', E], degree 0
  BimodulePtr composite;   // chain [P_F, P'_F]
  BimoduleMap unit;        // B -> composite, closed degree 0
};
PTwistDualResult p_twist_dual(const FunctorData& fd, const PnStructure& S);

// ----------------------------------------------------------------- verdicts

enum class Verdict { Pass, Fail, Indeterminate };
std::string to_string(Verdict v);

struct ConditionReport {
  std::string name;
  Verdict verdict = Verdict::Indeterminate;
  std::vector<std::string> notes;
  std::map<std::string, std::string> data;
  std::map<std::string, std::map<int, int>> tables;
  std::vector<std::pair<std::string, Verdict>> parts;

  void fail(const std::string& why);
  void note(const std::string& s) { notes.push_back(s); }
};

// Policy for searching a closed quasi-iso between two bimodules: dimension
// tables first, then combinations of a basis of closed bilinear maps --
// exhaustive when the search space is at most exhaustive_bound, otherwise
// max_random seeded draws.
struct IsoSearchPolicy {
  int max_random = 32;
  long long exhaustive_bound = 4096;
  unsigned seed = 20260815;
};
std::optional<BimoduleMap> find_quasi_iso(const BimodulePtr& src,
                                          const BimodulePtr& dst, int degree,
                                          ConditionReport* rep,
                                          const IsoSearchPolicy& pol = {});

// ------------------------------------------------------------------- checks

// nu : FHQ_{n-1} -> FHQ_n -> FQ_n -> FJ_n a quasi-iso, with psi F transported
// along gamma by an affine solve.
ConditionReport check_monad_condition(const FunctorData& fd, const PnStructure& S);
// FR -> FRFL -> FH^nL a quasi-iso.
ConditionReport check_adjoints_condition(const FunctorData& fd, const PnStructure& S);
// some iso u : FH^nL -> FHH^nH'L intertwining the two composites from FHL.
ConditionReport check_highest_degree_term(const FunctorData& fd, const PnStructure& S);
// per-j filtration lifts of the transported multiplication plus the induced
// HH^j -> H^{j+1} quasi-isos, and the Ext^{-1} vanishing table.
ConditionReport check_strong_monad(const FunctorData& fd, const PnStructure& S);
// some iso FR = FH^nL (search policy).
ConditionReport check_weak_adjoints(const FunctorData& fd, const PnStructure& S);
// strong monad + weak adjoints (+ Ext^{-1} or a one-sided multiplication)
// first; falls back to the three definitional checks.
ConditionReport check_pn(const FunctorData& fd, const PnStructure& S);

// ------------------------------------------------------------- split tables

// Scalar table c^k_{ij} of a split monad RF = (+)_i H^i against a chosen
// basis of each H^i (components of the multiplication H^i H^j -> H^k).
struct SplitScalars {
  FieldSpec field;
  int n = 1;
  std::vector<Scalar> c;  // index (i*(n+1) + j)*(n+1) + k

  SplitScalars(FieldSpec f, int n_);
  Scalar& at(int i, int j, int k);
  const Scalar& at(int i, int j, int k) const;
};

// Cor 5.3 renormalisation: checks the strong pattern, derives the stronger
// pattern by associativity, rescales the identifications so that
// c^{i+j}_{ij} = 1 and c^k_{ij} = 0 for k != i+j (i+j <= n), with symmetry;
// v[1] = 1 so the degree-1 data is untouched.  Throws if the input is not
// strong or not associative.
struct RenormalizeResult {
  std::vector<Scalar> v;  // v[0..n], v[0] = v[1] = 1
  SplitScalars table;
  bool changed = false;
};
RenormalizeResult renormalize_split(const SplitScalars& in);

// Extracts the scalar table of a split structure (zero coextension
// components, each H^i block one-dimensional per degree slot).
SplitScalars split_scalars(const FunctorData& fd, const PnStructure& S);

// Rebuilds gamma per the renormalisation (gamma'_i = mult^{i-1} o gamma_1^i,
// scaled); the degree-1 block is unchanged.  Returns the new structure.
PnStructure renormalize_structure(const FunctorData& fd, const PnStructure& S);

// ---------------------------------------------------------------- spherical

// T = cone(trace), C = cone(unit)[-1]; certifies the two adjoint
// identification composites LT -> R[1] and R -> CL[1]; Pass iff both are
// quasi-isos (any two of the four spherical conditions imply the rest).
struct SphericalResult {
  ConditionReport report;
  BimodulePtr T;        // cone(trace) over (B, B)
  BimodulePtr C1;       // cone(unit) = C[1] over (A, A)
  BimoduleMap tw_adj;   // [T, El] -> Ev, raw degree +1
  BimoduleMap cotw_adj; // Ev -> [El, C1], degree 0
};
SphericalResult spherical_check(const FunctorData& fd);

// n = 1: certifies T (x)_B T = P_F by iso search.
ConditionReport p1_square(const FunctorData& fd, const PnStructure& S);

// P_F F = F H^{n+1} [2]: compares [E, P_F] with ([H^{n+1}, E])[2].
ConditionReport verify_pff(const FunctorData& fd, const PnStructure& S);

// is_quasi_iso(unit : B -> P_F (x)_B P'_F).
ConditionReport verify_pp_unit(const FunctorData& fd, const PnStructure& S);

// Segal's construction: the square-zero extension A_H = A (+) Hinv[-1], the
// lifted kernel F~ = cone(FH -> F) with its Hinv-action, and the
// certificates F~R~ = conv(FHR -> FR) and cone(trace of F~) = P_F
// (cohomology tables).  Pre: split structure satisfying the strong monad
// condition; renormalises first when needed.
struct SegalResult {
  ConditionReport report;
  AlgebraPtr AH;
  BimodulePtr Ft;       // over (A_H, B)
  BimodulePtr FtRt;     // comonad chain of F~
  BimodulePtr cotwist;  // cone(unit of F~)[-1] model, over (A_H, A_H)
};
SegalResult segal_lift(const FunctorData& fd, const PnStructure& S);

}  // namespace pnv

#pragma once

#include "pnv/dga.hpp"
#include "pnv/tensor.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace pnv {

// One-sided twisted complex: objects X_i at integer indices, components
// alpha_{ij} : X_i -> X_j for i < j, each a bilinear map of raw degree +1
// between the stored objects.  (Displayed complexes with shift decorations
// are stored with the shifts already applied to the objects.)
struct TwistedComplex {
  std::map<int, BimodulePtr> obj;
  std::map<std::pair<int, int>, ExactMatrix> comp;
};

// Shape, degree, bilinearity and Maurer-Cartan
//   d(alpha_{ij}) + sum_{i<k<j} alpha_{kj} o alpha_{ik} = 0;
// throws with a description on failure.
void validate(const TwistedComplex& t);

// Convolution: plain direct sum of the objects with differential
// D = (internal d's) + (all components).  d^2 = 0 by Maurer-Cartan.
struct Convolution {
  TwistedComplex tw;
  BimodulePtr total;
  std::map<int, std::pair<int, int>> span;  // index -> [begin, end) rows
};
Convolution convolve(const TwistedComplex& t);

// Restriction to the indices in [lo, hi] (an interval is again a twisted
// complex; tails X_{>= lo} are subcomplexes, heads are quotients).
TwistedComplex interval(const TwistedComplex& t, int lo, int hi);

// Coordinate projection/inclusion between conv(t) and the span of the
// blocks with indices in [lo, hi], in ascending order (which matches the
// coordinates of convolve(interval(t, lo, hi))).
ExactMatrix block_proj(const Convolution& c, int lo, int hi);
ExactMatrix block_incl(const Convolution& c, int lo, int hi);

// The (i, j) component of a map between convolutions.
ExactMatrix component_of(const Convolution& cx, const Convolution& cy,
                         const BimoduleMap& f, int i, int j);
// No components from index i to index j < i.
bool is_one_sided(const Convolution& cx, const Convolution& cy,
                  const BimoduleMap& f);

// ------------------------------------------------------------------ replace

// E with underlying graded module Q (+) R and differential
// [[d_Q, eta], [zeta, delta]]; d_Q is Q's own differential, R is passed as a
// graded module (zero differential), and the three blocks are graded module
// maps of degree +1.  P comes with a homotopy equivalence to Q:
//   alpha : P -> Q, beta : Q -> P closed,
//   d(theta_q) = id_Q - alpha o beta,
//   d(theta_p) = beta o alpha - id_P,
//   d(phi) = beta o theta_q + theta_p o beta;
// either global sign of theta_q, theta_p, phi is accepted and normalised.
struct ReplaceInput {
  BimodulePtr Q, R, P;
  ExactMatrix eta;    // R -> Q
  ExactMatrix zeta;   // Q -> R
  ExactMatrix delta;  // R -> R
  BimoduleMap alpha, beta;
  BimoduleMap theta_q, theta_p, phi;
};

struct ReplaceResult {
  BimodulePtr original;  // Q (+) R with [[d_Q, eta], [zeta, delta]]
  BimodulePtr replaced;  // P (+) R with [[d_P, beta eta], [zeta alpha, delta - zeta theta_q eta]]
  BimoduleMap forward;   // original -> replaced: [[beta, 0], [-zeta theta_q, id]]
  BimoduleMap backward;  // replaced -> original: [[alpha, -theta_q eta], [0, id]]
  BimoduleMap h_orig;    // d(h_orig) = id - backward o forward
  BimoduleMap h_rep;     // d(h_rep)  = forward o backward - id
};

// Verifies the relation system exactly, then assembles everything above and
// checks the stated identities; throws on any failure.
ReplaceResult replace(const ReplaceInput& in);

// ----------------------------------------------------------- one-sidedness

// Normalise a closed degree-0 map between convolutions to a one-sided map
// homotopic to it, sweeping out backward components bottom-up; each required
// witness is found by solving for a block-supported homotopy.  Throws if a
// witness does not exist.
struct OneSidedResult {
  BimoduleMap map;       // one-sided, closed, = f + d(homotopy)
  BimoduleMap homotopy;  // degree -1
};
OneSidedResult make_one_sided(const Convolution& cx, const Convolution& cy,
                              const BimoduleMap& f);

// ------------------------------------------------- cyclic coextensions, TTA

// Cyclic coextension of A by H: base has objects obj[0] = the diagonal A,
// obj[-i] = the i-fold tensor power of H (1 <= i <= n), with the connecting
// components; powers[i] is the chain realising the i-th power (powers[0] is
// unused, powers[1] the single factor).
struct CyclicCoextension {
  TwistedComplex base;
  BimodulePtr H;  // over (A, A)
  int n = 1;
  std::vector<ChainBasis> powers;
};

struct CoextensionMaps {
  std::vector<BimodulePtr> Q;     // Q[i] = convolution of indices >= -i
  std::vector<Convolution> Qc;    // the corresponding convolutions
  std::vector<BimoduleMap> iota;  // iota[i] : Q[i-1] -> Q[i], i = 1..n
  std::vector<BimoduleMap> mu;    // mu[i] : Q[i] -> H^{(x)i}, i = 1..n
  BimoduleMap iota_full;          // A = Q[0] -> Q[n]
  BimodulePtr J;                  // convolution of indices in [-n, -1]
  BimoduleMap kappa;              // Q[n] -> J (quotient by the A block)
  BimoduleMap lambda;             // J[-1] -> A, from the components into A
};
CoextensionMaps coextension_maps(const CyclicCoextension& c);

// Truncated twisted tensor algebra of (H, sigma): the cyclic coextension
// with components xi_{k+1} = sum_i (-1)^i id^i (x) sigma (x) id^{k-i}
// (sigma absorbed into the neighbouring factor), together with its unit and
// multiplication on the convolution square.
struct TtaResult {
  CyclicCoextension co;
  BimodulePtr Rn;        // convolution of co.base
  Convolution conv;
  BimoduleMap unit;      // A -> Rn, inclusion of the index-0 block
  BimoduleMap mult;      // Rn (x)_A Rn -> Rn, closed degree 0
  ChainBasis square;     // the chain Rn (x)_A Rn
};
TtaResult tta(const BimodulePtr& H, const BimoduleMap& sigma, int n);

// Comparison map between the truncated twisted tensor algebras of (H, sigma)
// and (H', sigma') along a closed map f : H -> H' and a degree-0 bilinear
// beta : H -> A with sigma = sigma' o f + d(beta).  The component from
// H^{(x)(i+k)} to H'^{(x)i} sums words of i copies of f and k copies of beta
// (absorbed), with subset signs fixed numerically by closedness.
struct TtaCompareResult {
  BimoduleMap iota;        // conv(R_n) -> conv(R'_n), closed degree 0
  bool unit_intertwined;   // iota o unit == unit' exactly
  // d(...) = iota o mult - mult' o (iota (x) iota), when one exists
  std::optional<BimoduleMap> mult_homotopy;
};
TtaCompareResult tta_compare(const TtaResult& r, const TtaResult& rp,
                             const BimoduleMap& f, const BimoduleMap& beta);

}  // namespace pnv

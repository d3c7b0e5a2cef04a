#include "pnv/twisted.hpp"

#include "doctest.h"
#include "fixtures.hpp"
#include "pnv/hom.hpp"
#include "pnv/tensor.hpp"

using namespace pnv;

namespace {
const FieldSpec F = field_prime(65521);
}

TEST_CASE("twisted: validation rejects bad data") {
  auto k0 = fix::kmod(F, {0});
  auto k1 = fix::kmod(F, {1});
  auto one = fix::from_rows(F, 1, 1, {1});

  SUBCASE("components must go up") {
    TwistedComplex t;
    t.obj = {{0, k0}, {1, k1}};
    t.comp[{1, 0}] = one;
    CHECK_THROWS_WITH_AS(validate(t), doctest::Contains("one-sided"), std::runtime_error);
  }
  SUBCASE("component shape") {
    TwistedComplex t;
    t.obj = {{0, k0}, {1, k1}};
    t.comp[{0, 1}] = ExactMatrix(F, 2, 1);
    CHECK_THROWS_WITH_AS(validate(t), doctest::Contains("shape"), std::runtime_error);
  }
  SUBCASE("component degree") {
    TwistedComplex t;
    t.obj = {{0, k0}, {1, fix::kmod(F, {5})}};
    t.comp[{0, 1}] = one;
    CHECK_THROWS_AS(validate(t), std::runtime_error);
  }
  SUBCASE("Maurer-Cartan with no room for a correction") {
    TwistedComplex t;
    t.obj = {{0, k0}, {1, k1}, {2, fix::kmod(F, {2})}};
    t.comp[{0, 1}] = one;
    t.comp[{1, 2}] = one;
    CHECK_THROWS_WITH_AS(validate(t), doctest::Contains("Maurer-Cartan"), std::runtime_error);
  }
}

TEST_CASE("twisted: two-step convolution matches the cone") {
  auto E = fix::exterior(F);
  auto D = diagonal_bimodule(E);
  ExactMatrix lx = lact_slice(*D, 1);  // left multiplication by x, degree +1

  TwistedComplex t;
  t.obj = {{-1, D}, {0, D}};
  t.comp[{-1, 0}] = lx;
  Convolution c = convolve(t);
  CHECK(c.total->dim() == 4);
  CHECK(c.span.at(-1) == std::pair<int, int>{0, 2});
  CHECK(c.span.at(0) == std::pair<int, int>{2, 4});

  // same total complex as the cone of x : D[-1] -> D
  BimoduleMap f0{shift(D, -1), D, 0, lx};
  CHECK(is_closed(f0));
  CHECK(is_bilinear(f0));
  ConeTriple ct = cone(f0);
  CHECK(c.total->diff == ct.total->diff);
  CHECK(dims_by_degree(*c.total) == dims_by_degree(*ct.total));
  CHECK(cohomology_dims(*c.total) == std::map<int, int>{{0, 1}, {1, 1}});
  CHECK(cohomology_dims(*c.total) == cohomology_dims(*ct.total));

  // a single object convolves to itself
  TwistedComplex single;
  single.obj = {{5, D}};
  CHECK(convolve(single).total == D);
}

TEST_CASE("twisted: Maurer-Cartan correction against the differential") {
  auto o1 = fix::kmod(F, {0});
  auto o2 = fix::kmod(F, {1});
  auto o3 = fix::kmod(F, {1, 2}, fix::from_rows(F, 2, 2, {0, 0, 1, 0}));

  TwistedComplex t;
  t.obj = {{0, o1}, {1, o2}, {2, o3}};
  t.comp[{0, 1}] = fix::from_rows(F, 1, 1, {1});
  t.comp[{1, 2}] = fix::from_rows(F, 2, 1, {0, 1});
  t.comp[{0, 2}] = fix::from_rows(F, 2, 1, {-1, 0});
  Convolution c = convolve(t);
  CHECK(c.total->dim() == 4);
  CHECK(is_acyclic(*c.total));

  SUBCASE("flipping the correction breaks Maurer-Cartan") {
    t.comp[{0, 2}] = fix::from_rows(F, 2, 1, {1, 0});
    CHECK_THROWS_WITH_AS(validate(t), doctest::Contains("Maurer-Cartan"), std::runtime_error);
  }
}

TEST_CASE("twisted: block selectors and sidedness") {
  auto E = fix::exterior(F);
  auto D = diagonal_bimodule(E);
  TwistedComplex t;
  t.obj = {{-1, D}, {0, D}};
  t.comp[{-1, 0}] = lact_slice(*D, 1);
  Convolution c = convolve(t);

  ExactMatrix pr = block_proj(c, -1, -1);
  CHECK(pr * block_incl(c, -1, -1) == ExactMatrix::identity(F, 2));
  CHECK(block_proj(c, -1, 0) == ExactMatrix::identity(F, 4));

  BimoduleMap dmap{c.total, c.total, 1, c.total->diff};
  CHECK(component_of(c, c, dmap, -1, 0) == t.comp.at({-1, 0}));
  CHECK(component_of(c, c, dmap, 0, -1).is_zero());
  CHECK(is_one_sided(c, c, dmap));
  CHECK(is_one_sided(c, c, identity_map(c.total)));
  BimoduleMap back{c.total, c.total, 1, c.total->diff.transpose()};
  CHECK_FALSE(is_one_sided(c, c, back));
}

TEST_CASE("twisted: replace with identity contraction data") {
  auto A = fix::uv_algebra(F);
  auto Q = diagonal_bimodule(A);
  // point module over (A, A): u and v act by zero
  DgBimodule r;
  r.left = A;
  r.right = A;
  r.label = {"r"};
  r.deg = {0};
  r.diff = ExactMatrix(F, 1, 1);
  r.lact = fix::from_rows(F, 1, 3, {1, 0, 0});
  r.ract = fix::from_rows(F, 1, 3, {1, 0, 0});
  auto R = make_bimodule(std::move(r));

  ReplaceInput in;
  in.Q = Q;
  in.R = R;
  in.P = Q;
  in.eta = fix::from_rows(F, 3, 1, {0, 0, 1});  // r -> v
  in.zeta = ExactMatrix(F, 1, 3);
  in.delta = ExactMatrix(F, 1, 1);
  in.alpha = identity_map(Q);
  in.beta = identity_map(Q);
  in.theta_q = zero_map(Q, Q, -1);
  in.theta_p = zero_map(Q, Q, -1);
  in.phi = zero_map(Q, Q, -2);

  ReplaceResult out = replace(in);
  CHECK(out.original->diff == out.replaced->diff);
  CHECK(out.forward.mat == ExactMatrix::identity(F, 4));
  CHECK(out.backward.mat == ExactMatrix::identity(F, 4));
  CHECK(out.h_orig.mat.is_zero());
  CHECK(out.h_rep.mat.is_zero());
}

TEST_CASE("twisted: replace contracts an acyclic summand") {
  auto E = fix::exterior(F);
  auto N = diagonal_bimodule(E);
  ConeTriple ct = cone(identity_map(N));
  BimodulePtr Q = ct.total;  // acyclic, dim 4

  // zero-dimensional replacement
  DgBimodule p;
  p.left = E;
  p.right = E;
  p.lact = ExactMatrix(F, 0, 0);
  p.ract = ExactMatrix(F, 0, 0);
  p.diff = ExactMatrix(F, 0, 0);
  auto P = make_bimodule(std::move(p));

  // contraction: theta sends the N block back to the N[1] block
  ExactMatrix th(F, 4, 4);
  th.set_block(0, 2, ExactMatrix::identity(F, 2));
  BimoduleMap theta{Q, Q, -1, th};
  CHECK(map_differential(theta).mat == ExactMatrix::identity(F, 4));
  CHECK(is_bilinear(theta));

  ReplaceInput in;
  in.Q = Q;
  in.R = N;
  in.P = P;
  in.eta = ExactMatrix(F, 4, 2);
  in.eta.set_block(2, 0, lact_slice(*N, 1));  // d(r) = x r landing in the N block
  in.zeta = ExactMatrix(F, 2, 4);
  in.delta = ExactMatrix(F, 2, 2);
  in.alpha = zero_map(P, Q, 0);
  in.beta = zero_map(Q, P, 0);
  in.theta_q = theta;
  in.theta_p = zero_map(P, P, -1);
  in.phi = zero_map(Q, P, -2);

  ReplaceResult out = replace(in);
  CHECK(dims_by_degree(*out.replaced) == dims_by_degree(*N));
  CHECK(out.replaced->diff.is_zero());
  CHECK(is_quasi_iso(out.forward));
  CHECK(is_quasi_iso(out.backward));
  CHECK(map_differential(out.h_orig).mat ==
        sub(identity_map(out.original), compose(out.backward, out.forward)).mat);
  CHECK(map_differential(out.h_rep).mat ==
        sub(compose(out.forward, out.backward), identity_map(out.replaced)).mat);

  SUBCASE("the opposite contraction sign is normalised") {
    in.theta_q.mat = -th;
    ReplaceResult flip = replace(in);
    CHECK(flip.replaced->diff == out.replaced->diff);
    CHECK(is_quasi_iso(flip.forward));
  }
}

TEST_CASE("twisted: make_one_sided") {
  SUBCASE("already one-sided maps pass through") {
    auto E = fix::exterior(F);
    auto D = diagonal_bimodule(E);
    TwistedComplex t;
    t.obj = {{-1, D}, {0, D}};
    t.comp[{-1, 0}] = lact_slice(*D, 1);
    Convolution c = convolve(t);
    OneSidedResult r = make_one_sided(c, c, identity_map(c.total));
    CHECK(r.map.mat == ExactMatrix::identity(F, 4));
    CHECK(r.homotopy.mat.is_zero());
  }

  SUBCASE("a removable backward component is swept out") {
    // Y: A-block (e0 -> e1) at index 0, B-block at index 1, alpha(e0) = b
    auto A = fix::kmod(F, {0, 1}, fix::from_rows(F, 2, 2, {0, 0, 1, 0}));
    auto B = fix::kmod(F, {1});
    TwistedComplex ty;
    ty.obj = {{0, A}, {1, B}};
    ty.comp[{0, 1}] = fix::from_rows(F, 1, 2, {1, 0});
    Convolution cy = convolve(ty);

    TwistedComplex tx;
    tx.obj = {{1, fix::kmod(F, {1})}};
    Convolution cx = convolve(tx);

    BimoduleMap f{cx.total, cy.total, 0, fix::from_rows(F, 3, 1, {0, 1, 0})};
    CHECK(is_closed(f));
    CHECK_FALSE(is_one_sided(cx, cy, f));

    OneSidedResult r = make_one_sided(cx, cy, f);
    CHECK(is_one_sided(cx, cy, r.map));
    CHECK(is_closed(r.map));
    CHECK(r.map.mat == add(f, map_differential(r.homotopy)).mat);
    CHECK(component_of(cx, cy, r.map, 1, 1) == fix::from_rows(F, 1, 1, {-1}));
  }

  SUBCASE("an essential backward component throws") {
    TwistedComplex ty;
    ty.obj = {{0, fix::kmod(F, {1})}, {1, fix::kmod(F, {5})}};
    Convolution cy = convolve(ty);
    TwistedComplex tx;
    tx.obj = {{1, fix::kmod(F, {1})}};
    Convolution cx = convolve(tx);
    BimoduleMap f{cx.total, cy.total, 0, fix::from_rows(F, 2, 1, {1, 0})};
    CHECK(is_closed(f));
    CHECK_THROWS_WITH_AS(make_one_sided(cx, cy, f), doctest::Contains("witness"),
                         std::runtime_error);
  }
}

TEST_CASE("twisted: cyclic coextension maps") {
  SUBCASE("zero connecting maps, top degree 2m") {
    const int m = 2;
    auto H = fix::kmod(F, {m});
    CyclicCoextension co;
    co.H = H;
    co.n = 2;
    co.powers.resize(3);
    co.powers[1] = tensor_chain({H});
    co.powers[2] = tensor_chain({H, H});
    co.base.obj = {{0, fix::kmod(F, {0})}, {-1, co.powers[1].total}, {-2, co.powers[2].total}};

    CoextensionMaps cm = coextension_maps(co);
    CHECK(cm.Q[0]->dim() == 1);
    CHECK(cm.Q[1]->dim() == 2);
    CHECK(cm.Q[2]->dim() == 3);
    CHECK(dims_by_degree(*cm.Q[2]) == std::map<int, int>{{0, 1}, {m, 1}, {2 * m, 1}});
    CHECK(compose(cm.mu[2], cm.iota_full).mat.is_zero());
    CHECK(cm.lambda.mat.is_zero());

    // cone(iota) is quasi-isomorphic to J via (a, q) -> kappa(q)
    ConeTriple ci = cone(cm.iota_full);
    ExactMatrix mat(F, cm.J->dim(), ci.total->dim());
    mat.set_block(0, cm.Q[0]->dim(), cm.kappa.mat);
    BimoduleMap cmp{ci.total, cm.J, 0, mat};
    CHECK(is_closed(cmp));
    CHECK(is_quasi_iso(cmp));
  }

  SUBCASE("one nonzero connecting map: lambda is an isomorphism") {
    auto H = fix::kmod(F, {-1});
    CyclicCoextension co;
    co.H = H;
    co.n = 1;
    co.powers.resize(2);
    co.powers[1] = tensor_chain({H});
    co.base.obj = {{0, fix::kmod(F, {0})}, {-1, co.powers[1].total}};
    co.base.comp[{-1, 0}] = fix::from_rows(F, 1, 1, {1});

    CoextensionMaps cm = coextension_maps(co);
    CHECK(is_acyclic(*cm.Q[1]));
    CHECK(cm.lambda.mat == fix::from_rows(F, 1, 1, {1}));
    CHECK(is_quasi_iso(cm.lambda));
    ConeTriple ci = cone(cm.iota_full);
    ExactMatrix mat(F, cm.J->dim(), ci.total->dim());
    mat.set_block(0, cm.Q[0]->dim(), cm.kappa.mat);
    BimoduleMap cmp{ci.total, cm.J, 0, mat};
    CHECK(is_closed(cmp));
    CHECK(is_quasi_iso(cmp));
  }
}

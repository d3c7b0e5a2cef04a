#include <doctest.h>

#include "fixtures.hpp"
#include "pnv/hom.hpp"
#include "pnv/tensor.hpp"

using namespace pnv;

TEST_CASE("unit absorption: A (x)_A A = A") {
  FieldSpec f = field_prime(7);
  auto a = fix::truncated_poly(f, 1, 2);  // k[x]/x^2, |x| = 2
  auto m = diagonal_bimodule(a);
  auto t = tensor_over(m, m);
  CHECK(dims_by_degree(*t) == std::map<int, int>{{0, 1}, {2, 1}});
  CHECK(same_algebra(t->left, a));
  CHECK(same_algebra(t->right, a));

  // three factors collapse the same way
  auto t3 = tensor_chain({m, m, m});
  CHECK(dims_by_degree(*t3.total) == dims_by_degree(*m));
  CHECK(t3.free_dim == 8);
  CHECK((t3.proj * t3.sect) == ExactMatrix::identity(f, 2));
}

TEST_CASE("tensor over the ground field multiplies dimensions") {
  FieldSpec f = field_prime(7);
  auto e = underlying_complex(diagonal_bimodule(fix::exterior(f)));
  auto t = tensor_over(e, e);
  CHECK(dims_by_degree(*t) == std::map<int, int>{{0, 1}, {1, 2}, {2, 1}});
}

TEST_CASE("projectivity is required at the junction") {
  FieldSpec f = field_prime(7);
  auto e = fix::exterior(f);
  auto pt_ka = fix::exterior_point(e, false);  // (k, A)
  auto pt_ak = fix::exterior_point(e, true);   // (A, k)
  CHECK_THROWS_WITH_AS(tensor_over(pt_ka, pt_ak),
                       doctest::Contains("projective"), std::runtime_error);
}

TEST_CASE("chain bases select monomials") {
  FieldSpec f = field_prime(7);
  auto a = fix::truncated_poly(f, 2, 0);  // k[x]/x^3
  auto m = diagonal_bimodule(a);
  auto cb = tensor_chain({m, m});
  auto cd = composite_degrees(cb.factors);
  for (int i = 0; i < cb.total->dim(); ++i) {
    int nz = 0, row = -1;
    for (int r = 0; r < cb.sect.rows(); ++r)
      if (!cb.sect.entry_zero(r, i)) { ++nz; row = r; }
    CHECK(nz == 1);
    CHECK(cd[row] == cb.total->deg[i]);
  }
}

TEST_CASE("tensor_map agrees with the dense free-level matrix") {
  FieldSpec f = field_prime(7);
  auto alg = fix::uv_algebra(f);
  auto m = diagonal_bimodule(alg);
  auto cb = tensor_chain({m, m});

  // identity (x) identity is the identity
  auto idid = tensor_map(cb, cb, {identity_map(m), identity_map(m)});
  CHECK(idid.mat == ExactMatrix::identity(f, cb.total->dim()));

  // mixed-degree maps: d (x) id, id (x) d, d (x) d
  BimoduleMap d{m, m, 1, m->diff};
  for (auto fs : {std::vector<BimoduleMap>{d, identity_map(m)},
                  std::vector<BimoduleMap>{identity_map(m), d},
                  std::vector<BimoduleMap>{d, d}}) {
    int deg = fs[0].degree + fs[1].degree;
    auto via_ops = tensor_map(cb, cb, fs);
    auto via_free = induce(cb, cb, free_tensor_matrix(fs), deg);
    CHECK(via_ops.mat == via_free.mat);
  }

  // the induced differential is d (x) 1 + (-1)^{|x|} 1 (x) d
  auto d1 = induce(cb, cb, free_tensor_matrix({d, identity_map(m)}), 1);
  auto d2 = induce(cb, cb, free_tensor_matrix({identity_map(m), d}), 1);
  CHECK((d1.mat + d2.mat) == cb.total->diff);
}

TEST_CASE("absorption slot op realises the canonical isomorphism") {
  FieldSpec f = field_prime(7);
  auto e = fix::exterior(f);
  auto m = diagonal_bimodule(e);
  auto ea = tensor_chain({m, m});
  auto just_e = tensor_chain({m});

  SlotOp absorb{0, 2, {m->deg}, m->ract, 0};
  auto iso = induce_ops(ea, just_e, {absorb}, 0);
  CHECK(is_closed(iso));
  CHECK(is_bilinear(iso));
  CHECK(rank(iso.mat) == m->dim());
}

TEST_CASE("three-factor chains are associative up to dimensions") {
  FieldSpec f = field_prime(7);
  auto e = fix::exterior(f);
  auto m = diagonal_bimodule(e);
  auto abc = tensor_chain({m, m, m}).total;
  auto ab = tensor_over(m, m);
  auto ab_c = tensor_over(ab, m);
  CHECK(dims_by_degree(*abc) == dims_by_degree(*ab_c));
  CHECK(cohomology_dims(*abc) == cohomology_dims(*ab_c));
}

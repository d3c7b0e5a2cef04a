#pragma once

#include "pnv/dga.hpp"

#include <initializer_list>

// Shared hand-built fixtures for the unit tests.  Everything here is small
// enough to verify against the structure constants by inspection.
namespace fix {

inline pnv::ExactMatrix from_rows(pnv::FieldSpec f, int r, int c,
                                  std::initializer_list<long long> v) {
  pnv::ExactMatrix m(f, r, c);
  auto it = v.begin();
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m.set_int(i, j, *it++);
  return m;
}

inline pnv::ExactMatrix vec(const pnv::ExactMatrix& m) {
  pnv::ExactMatrix v(m.field(), m.rows() * m.cols(), 1);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (!m.entry_zero(i, j)) v.set(i * m.cols() + j, 0, m.at(i, j));
  return v;
}

// Exterior algebra on one generator of degree d: k<1, x>, x^2 = 0, no
// differential.
inline pnv::AlgebraPtr exterior(pnv::FieldSpec f, int d = 1) {
  pnv::DgAlgebra a;
  a.field = f;
  a.label = {"1", "x"};
  a.deg = {0, d};
  a.unit = 0;
  a.mult = pnv::ExactMatrix(f, 2, 4);
  a.mult.set_int(0, 0, 1);  // 1*1
  a.mult.set_int(1, 1, 1);  // 1*x
  a.mult.set_int(1, 2, 1);  // x*1
  a.diff = pnv::ExactMatrix(f, 2, 2);
  return make_algebra(std::move(a));
}

// k<1, u, v> with |u| = 0, |v| = 1, d(u) = v and the ideal (u, v) squaring
// to zero.  Cohomology of the diagonal is one-dimensional.
inline pnv::AlgebraPtr uv_algebra(pnv::FieldSpec f) {
  pnv::DgAlgebra a;
  a.field = f;
  a.label = {"1", "u", "v"};
  a.deg = {0, 0, 1};
  a.unit = 0;
  a.mult = pnv::ExactMatrix(f, 3, 9);
  a.mult.set_int(0, 0, 1);  // 1*1
  a.mult.set_int(1, 1, 1);  // 1*u
  a.mult.set_int(1, 3, 1);  // u*1
  a.mult.set_int(2, 2, 1);  // 1*v
  a.mult.set_int(2, 6, 1);  // v*1
  a.diff = pnv::ExactMatrix(f, 3, 3);
  a.diff.set_int(2, 1, 1);  // d(u) = v
  return make_algebra(std::move(a));
}

// Truncated polynomial algebra k[x]/x^{n+1} with |x| = d (d even or char 2
// if commutativity of the square is to be meaningful; we only use even d or
// d = 0).
inline pnv::AlgebraPtr truncated_poly(pnv::FieldSpec f, int n, int d = 0) {
  pnv::DgAlgebra a;
  a.field = f;
  int m = n + 1;
  for (int i = 0; i < m; ++i) {
    a.label.push_back(i == 0 ? "1" : "x^" + std::to_string(i));
    a.deg.push_back(i * d);
  }
  a.field = f;
  a.unit = 0;
  a.mult = pnv::ExactMatrix(f, m, m * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i + j < m) a.mult.set_int(i + j, i * m + j, 1);
  a.diff = pnv::ExactMatrix(f, m, m);
  return make_algebra(std::move(a));
}

// Complex of vector spaces with the given degrees and differential, as a
// (k, k)-bimodule.
inline pnv::BimodulePtr kmod(pnv::FieldSpec f, std::vector<int> degs,
                             pnv::ExactMatrix diff) {
  pnv::DgBimodule m;
  auto k = pnv::ground_algebra(f);
  m.left = k;
  m.right = k;
  int n = (int)degs.size();
  for (int i = 0; i < n; ++i) m.label.push_back("e" + std::to_string(i));
  m.deg = std::move(degs);
  m.diff = std::move(diff);
  m.lact = pnv::ExactMatrix::identity(f, n);
  m.ract = m.lact;
  return make_bimodule(std::move(m));
}

inline pnv::BimodulePtr kmod(pnv::FieldSpec f, std::vector<int> degs) {
  int n = (int)degs.size();
  return kmod(f, std::move(degs), pnv::ExactMatrix(f, n, n));
}

// Free rank-one bimodule A (x) h (x) A with a generator h of degree w and
// d(h) = 0.  Basis element (i, j) is a_i h a_j at index i*dim(A) + j.
inline pnv::BimodulePtr free_bimodule(const pnv::AlgebraPtr& a, int w) {
  pnv::FieldSpec f = a->field;
  int n = a->dim();
  pnv::DgBimodule m;
  m.left = a;
  m.right = a;
  int d = n * n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      m.label.push_back(a->label[i] + ".h." + a->label[j]);
      m.deg.push_back(a->deg[i] + w + a->deg[j]);
    }
  m.lact = pnv::ExactMatrix(f, d, n * d);
  m.ract = pnv::ExactMatrix(f, d, d * n);
  m.diff = pnv::ExactMatrix(f, d, d);
  for (int b = 0; b < n; ++b)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int c = 0; c < n; ++c) {
          if (!a->mult.entry_zero(c, b * n + i))
            m.lact.add_at(c * n + j, b * d + i * n + j, a->mult.at(c, b * n + i));
          if (!a->mult.entry_zero(c, j * n + b))
            m.ract.add_at(i * n + c, (i * n + j) * n + b, a->mult.at(c, j * n + b));
        }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int c = 0; c < n; ++c) {
        if (!a->diff.entry_zero(c, i)) m.diff.add_at(c * n + j, i * n + j, a->diff.at(c, i));
        if (!a->diff.entry_zero(c, j)) {
          pnv::Scalar s = a->diff.at(c, j);
          if ((a->deg[i] + w) % 2 != 0) s = -s;
          m.diff.add_at(i * n + c, i * n + j, s);
        }
      }
  return make_bimodule(std::move(m));
}

// The simple module k = A/(x) over the exterior algebra, as an (A, k)- or
// (k, A)-bimodule depending on `left_action`.
inline pnv::BimodulePtr exterior_point(const pnv::AlgebraPtr& a, bool left_action) {
  pnv::DgBimodule m;
  pnv::FieldSpec f = a->field;
  auto k = pnv::ground_algebra(f);
  m.left = left_action ? a : k;
  m.right = left_action ? k : a;
  m.label = {"pt"};
  m.deg = {0};
  m.diff = pnv::ExactMatrix(f, 1, 1);
  m.lact = pnv::ExactMatrix(f, 1, m.left->dim());
  m.lact.set_int(0, 0, 1);
  m.ract = pnv::ExactMatrix(f, 1, m.right->dim());
  m.ract.set_int(0, 0, 1);
  return make_bimodule(std::move(m));
}

}  // namespace fix

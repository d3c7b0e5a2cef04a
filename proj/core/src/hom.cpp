#include "pnv/hom.hpp"

#include "pnv/linsys.hpp"

#include <algorithm>
#include <stdexcept>

namespace pnv {

namespace {

enum class Flavor { Both, RightOnly, LeftOnly };

ExactMatrix vec_of(const ExactMatrix& m) {
  ExactMatrix v(m.field(), m.rows() * m.cols(), 1);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      Scalar s = m.at(i, j);
      if (!s.is_zero()) v.set(i * m.cols() + j, 0, s);
    }
  return v;
}

HomComplex build_hom(const BimodulePtr& m, const BimodulePtr& n, Flavor flavor) {
  FieldSpec f = m->field();
  if (!(n->field() == f)) throw std::runtime_error("hom: field mismatch");
  if (flavor != Flavor::LeftOnly && !same_algebra(m->right, n->right))
    throw std::runtime_error("hom: right algebras differ");
  if (flavor != Flavor::RightOnly && !same_algebra(m->left, n->left))
    throw std::runtime_error("hom: left algebras differ");

  HomComplex hc;
  hc.src = m;
  hc.dst = n;

  int gmin = 0, gmax = -1;
  if (m->dim() > 0 && n->dim() > 0) {
    auto [mn_m, mx_m] = std::minmax_element(m->deg.begin(), m->deg.end());
    auto [mn_n, mx_n] = std::minmax_element(n->deg.begin(), n->deg.end());
    gmin = *mn_n - *mx_m;
    gmax = *mx_n - *mn_m;
  }

  std::vector<int> bdeg;
  for (int g = gmin; g <= gmax; ++g) {
    LinearSystem sys(f);
    int var = sys.add_map_var(m, n, g);
    if (sys.support_size(var) == 0) continue;
    switch (flavor) {
      case Flavor::Both:
        add_bilinearity_constraints(sys, var, m, n, g);
        break;
      case Flavor::RightOnly:
        add_right_linearity(sys, var, m, n);
        break;
      case Flavor::LeftOnly:
        add_left_linearity(sys, var, m, n, g);
        break;
    }
    auto sp = sys.solution_space();
    for (const auto& b : sp.basis) {
      hc.basis.push_back(BimoduleMap{m, n, g, b[0]});
      bdeg.push_back(g);
    }
  }

  // the complex carrying these maps, with flavor-dependent actions
  DgBimodule cx;
  AlgebraPtr ground = ground_algebra(f);
  switch (flavor) {
    case Flavor::Both:      cx.left = ground;   cx.right = ground;   break;
    case Flavor::RightOnly: cx.left = n->left;  cx.right = m->left;  break;
    case Flavor::LeftOnly:  cx.left = m->right; cx.right = n->right; break;
  }
  cx.deg = bdeg;
  for (size_t i = 0; i < bdeg.size(); ++i)
    cx.label.push_back("f" + std::to_string(bdeg[i]) + "_" + std::to_string(i));
  int hd = (int)bdeg.size();
  cx.diff = ExactMatrix(f, hd, hd);
  cx.lact = ExactMatrix(f, hd, cx.left->dim() * hd);
  cx.ract = ExactMatrix(f, hd, hd * cx.right->dim());

  // coordinate solver against the assembled basis (per degree)
  auto coords_of = [&](const ExactMatrix& mat, int degree) -> ExactMatrix {
    std::vector<int> idx;
    for (int i = 0; i < hd; ++i)
      if (bdeg[i] == degree) idx.push_back(i);
    ExactMatrix out(f, hd, 1);
    if (idx.empty()) {
      if (!mat.is_zero())
        throw std::runtime_error("hom: realization outside the computed basis");
      return out;
    }
    ExactMatrix stacked(f, mat.rows() * mat.cols(), (int)idx.size());
    for (int c = 0; c < (int)idx.size(); ++c)
      stacked.set_block(0, c, vec_of(hc.basis[idx[c]].mat));
    auto x = solve(stacked, vec_of(mat));
    if (!x) throw std::runtime_error("hom: realization outside the computed basis");
    for (int c = 0; c < (int)idx.size(); ++c) out.set(idx[c], 0, x->at(c, 0));
    return out;
  };

  for (int i = 0; i < hd; ++i) {
    BimoduleMap dfi = map_differential(hc.basis[i]);
    ExactMatrix col = coords_of(dfi.mat, bdeg[i] + 1);
    for (int r = 0; r < hd; ++r) {
      Scalar v = col.at(r, 0);
      if (!v.is_zero()) cx.diff.set(r, i, v);
    }
  }

  for (int i = 0; i < hd; ++i) {
    const ExactMatrix& phi = hc.basis[i].mat;
    for (int a = 0; a < cx.left->dim(); ++a) {
      ExactMatrix real(f, 0, 0);
      int dresult = 0;
      switch (flavor) {
        case Flavor::Both:
          real = phi;  // unit of the ground field
          dresult = bdeg[i];
          break;
        case Flavor::RightOnly:
          real = lact_slice(*n, a) * phi;
          dresult = bdeg[i] + n->left->deg[a];
          break;
        case Flavor::LeftOnly: {
          // (b.phi)(x) = (-1)^{|b|(|phi|+|x|)} phi(x.b), b from m->right
          ExactMatrix t = phi * ract_slice(*m, a);
          std::vector<int> signs(m->dim());
          for (int x = 0; x < m->dim(); ++x)
            signs[x] = ((m->right->deg[a] * m->deg[x]) % 2 == 0) ? 1 : -1;
          t = t.col_signed(signs);
          int sg = (m->right->deg[a] * bdeg[i]) % 2 == 0 ? 1 : -1;
          real = t.scaled(Scalar(f, sg));
          dresult = bdeg[i] + m->right->deg[a];
          break;
        }
      }
      ExactMatrix col = coords_of(real, dresult);
      for (int r = 0; r < hd; ++r) {
        Scalar v = col.at(r, 0);
        if (!v.is_zero()) cx.lact.set(r, a * hd + i, v);
      }
    }
    for (int b = 0; b < cx.right->dim(); ++b) {
      ExactMatrix real(f, 0, 0);
      int dresult = 0;
      switch (flavor) {
        case Flavor::Both:
          real = phi;
          dresult = bdeg[i];
          break;
        case Flavor::RightOnly:
          // (phi.a1)(x) = phi(a1.x)
          real = phi * lact_slice(*m, b);
          dresult = bdeg[i] + m->left->deg[b];
          break;
        case Flavor::LeftOnly: {
          // (phi.b2)(x) = (-1)^{|b2||x|} phi(x).b2
          ExactMatrix t = ract_slice(*n, b) * phi;
          std::vector<int> signs(m->dim());
          for (int x = 0; x < m->dim(); ++x)
            signs[x] = ((n->right->deg[b] * m->deg[x]) % 2 == 0) ? 1 : -1;
          real = t.col_signed(signs);
          dresult = bdeg[i] + n->right->deg[b];
          break;
        }
      }
      ExactMatrix col = coords_of(real, dresult);
      for (int r = 0; r < hd; ++r) {
        Scalar v = col.at(r, 0);
        if (!v.is_zero()) cx.ract.set(r, i * cx.right->dim() + b, v);
      }
    }
  }

  hc.cx = make_bimodule(std::move(cx));
  return hc;
}

}  // namespace

std::optional<ExactMatrix> HomComplex::coords(const BimoduleMap& f) const {
  FieldSpec fld = src->field();
  std::vector<int> idx;
  for (int i = 0; i < cx->dim(); ++i)
    if (cx->deg[i] == f.degree) idx.push_back(i);
  ExactMatrix out(fld, cx->dim(), 1);
  if (idx.empty()) {
    if (f.mat.is_zero()) return out;
    return std::nullopt;
  }
  ExactMatrix stacked(fld, f.mat.rows() * f.mat.cols(), (int)idx.size());
  for (int c = 0; c < (int)idx.size(); ++c)
    stacked.set_block(0, c, vec_of(basis[idx[c]].mat));
  auto x = solve(stacked, vec_of(f.mat));
  if (!x) return std::nullopt;
  for (int c = 0; c < (int)idx.size(); ++c) out.set(idx[c], 0, x->at(c, 0));
  return out;
}

BimoduleMap HomComplex::realize(const ExactMatrix& c) const {
  FieldSpec fld = src->field();
  ExactMatrix m(fld, dst->dim(), src->dim());
  int degree = 0;
  bool seen = false;
  for (int i = 0; i < cx->dim(); ++i) {
    Scalar v = c.at(i, 0);
    if (v.is_zero()) continue;
    if (!seen) { degree = cx->deg[i]; seen = true; }
    else if (cx->deg[i] != degree)
      throw std::runtime_error("realize: mixed degrees in coordinate vector");
    m = m + basis[i].mat.scaled(v);
  }
  return BimoduleMap{src, dst, degree, std::move(m)};
}

HomComplex hom_complex(const BimodulePtr& m, const BimodulePtr& n) {
  return build_hom(m, n, Flavor::Both);
}

HomComplex hom_right(const BimodulePtr& m, const BimodulePtr& n) {
  return build_hom(m, n, Flavor::RightOnly);
}

HomComplex hom_left(const BimodulePtr& m, const BimodulePtr& n) {
  return build_hom(m, n, Flavor::LeftOnly);
}

HomComplex dual_right(const BimodulePtr& e) {
  if (!is_projective(e, true))
    throw std::runtime_error("dual_right: module is not graded-projective over its right algebra");
  return hom_right(e, diagonal_bimodule(e->right));
}

HomComplex dual_left(const BimodulePtr& e) {
  if (!is_projective(e, false))
    throw std::runtime_error("dual_left: module is not graded-projective over its left algebra");
  return hom_left(e, diagonal_bimodule(e->left));
}

std::optional<BimoduleMap> nullhomotopy(const BimoduleMap& f) {
  if (!is_closed(f)) throw std::runtime_error("nullhomotopy: map is not closed");
  FieldSpec fld = f.src->field();
  LinearSystem sys(fld);
  int h = sys.add_map_var(f.src, f.dst, f.degree - 1);
  add_bilinearity_constraints(sys, h, f.src, f.dst, f.degree - 1);
  sys.begin_equation(f.dst->dim(), f.src->dim());
  sys.add_term(h, &f.dst->diff, nullptr);
  // d(h) = d h - (-1)^{deg h} h d with deg h = deg f - 1
  sys.add_term(h, nullptr, &f.src->diff, Scalar(fld, f.degree % 2 == 0 ? 1 : -1));
  sys.add_const(-f.mat);
  sys.end_equation();
  auto sol = sys.solve_system();
  if (!sol) return std::nullopt;
  return BimoduleMap{f.src, f.dst, f.degree - 1, (*sol)[0]};
}

namespace {

std::optional<ExactMatrix> compute_splitting(const DgBimodule& m, bool right_side) {
  FieldSpec f = m.field();
  int dm = m.dim();
  if (right_side) {
    const DgAlgebra& B = *m.right;
    int db = B.dim();
    std::vector<int> fdeg((size_t)dm * db);
    for (int i = 0; i < dm; ++i)
      for (int j = 0; j < db; ++j) fdeg[(size_t)i * db + j] = m.deg[i] + B.deg[j];
    LinearSystem sys(f);
    int S = sys.add_raw_var(fdeg, m.deg, 0);
    for (int b : algebra_generators(B)) {
      ExactMatrix rb_src = ract_slice(m, b);
      ExactMatrix rbF(f, dm * db, dm * db);
      for (int i = 0; i < dm; ++i)
        for (int j = 0; j < db; ++j)
          for (int r = 0; r < db; ++r) {
            Scalar v = B.mult.at(r, j * db + b);
            if (!v.is_zero()) rbF.set(i * db + r, i * db + j, v);
          }
      sys.begin_equation(dm * db, dm);
      sys.add_term(S, nullptr, &rb_src);
      sys.add_term(S, &rbF, nullptr, Scalar(f, -1));
      sys.end_equation();
    }
    sys.begin_equation(dm, dm);
    sys.add_term(S, &m.ract, nullptr);
    sys.add_const(-ExactMatrix::identity(f, dm));
    sys.end_equation();
    auto sol = sys.solve_system();
    if (!sol) return std::nullopt;
    return (*sol)[0];
  }
  const DgAlgebra& A = *m.left;
  int da = A.dim();
  std::vector<int> fdeg((size_t)da * dm);
  for (int a = 0; a < da; ++a)
    for (int i = 0; i < dm; ++i) fdeg[(size_t)a * dm + i] = A.deg[a] + m.deg[i];
  LinearSystem sys(f);
  int S = sys.add_raw_var(fdeg, m.deg, 0);
  for (int a : algebra_generators(A)) {
    ExactMatrix la_src = lact_slice(m, a);
    ExactMatrix laF(f, da * dm, da * dm);
    for (int r = 0; r < da; ++r)
      for (int c = 0; c < da; ++c) {
        Scalar v = A.mult.at(r, a * da + c);
        if (v.is_zero()) continue;
        for (int i = 0; i < dm; ++i) laF.set(r * dm + i, c * dm + i, v);
      }
    sys.begin_equation(da * dm, dm);
    sys.add_term(S, nullptr, &la_src);
    sys.add_term(S, &laF, nullptr, Scalar(f, -1));
    sys.end_equation();
  }
  sys.begin_equation(dm, dm);
  sys.add_term(S, &m.lact, nullptr);
  sys.add_const(-ExactMatrix::identity(f, dm));
  sys.end_equation();
  auto sol = sys.solve_system();
  if (!sol) return std::nullopt;
  return (*sol)[0];
}

}  // namespace

bool is_projective(const BimodulePtr& m, bool right_side) {
  auto& cache = right_side ? m->proj_right_cache : m->proj_left_cache;
  if (cache) return *cache;
  auto s = compute_splitting(*m, right_side);
  cache = s.has_value();
  (right_side ? m->split_right_cache : m->split_left_cache) = s ? std::optional<ExactMatrix>(*s)
                                                                : std::nullopt;
  return *cache;
}

std::optional<ExactMatrix> projective_splitting(const BimodulePtr& m, bool right_side) {
  is_projective(m, right_side);
  return right_side ? m->split_right_cache : m->split_left_cache;
}

}  // namespace pnv

#include "pnv/linsys.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace pnv {

int LinearSystem::add_raw_var(const std::vector<int>& dst_deg,
                              const std::vector<int>& src_deg, int degree) {
  Var v;
  v.dst_deg = dst_deg;
  v.src_deg = src_deg;
  v.degree = degree;
  v.entry_index.assign(dst_deg.size() * src_deg.size(), -1);
  v.offset = total_unknowns;
  for (int i = 0; i < (int)dst_deg.size(); ++i)
    for (int j = 0; j < (int)src_deg.size(); ++j)
      if (dst_deg[i] == src_deg[j] + degree) {
        v.entry_index[(size_t)i * src_deg.size() + j] = total_unknowns++;
        v.entries.push_back({i, j});
      }
  vars.push_back(std::move(v));
  return (int)vars.size() - 1;
}

int LinearSystem::add_map_var(const BimodulePtr& src, const BimodulePtr& dst,
                              int degree) {
  return add_raw_var(dst->deg, src->deg, degree);
}

void LinearSystem::begin_equation(int rows, int cols) {
  if (in_eq) throw std::runtime_error("nested equation block");
  in_eq = true;
  cur_rows = rows;
  cur_cols = cols;
}

void LinearSystem::add_term(int vi, const ExactMatrix* A, const ExactMatrix* B) {
  add_term(vi, A, B, Scalar(fld, 1));
}

void LinearSystem::add_term(int vi, const ExactMatrix* A, const ExactMatrix* B,
                            const Scalar& coeff) {
  if (!in_eq) throw std::runtime_error("add_term outside equation block");
  if (coeff.is_zero()) return;
  const Var& v = vars[vi];
  int vr = (int)v.dst_deg.size(), vc = (int)v.src_deg.size();

  // Precompute sparse access patterns for A (by column) and B (by row).
  std::vector<std::vector<std::pair<int, Scalar>>> acols;
  if (A) {
    if (A->cols() != vr || A->rows() != cur_rows)
      throw std::runtime_error("term factor A has wrong shape");
    acols.resize(vr);
    for (int j = 0; j < vr; ++j)
      for (int i = 0; i < cur_rows; ++i)
        if (!A->entry_zero(i, j)) acols[j].push_back({i, A->at(i, j)});
  } else if (vr != cur_rows) {
    throw std::runtime_error("identity A factor has wrong shape");
  }
  std::vector<std::vector<std::pair<int, Scalar>>> brows;
  if (B) {
    if (B->rows() != vc || B->cols() != cur_cols)
      throw std::runtime_error("term factor B has wrong shape");
    brows.resize(vc);
    for (int i = 0; i < vc; ++i)
      for (int j = 0; j < cur_cols; ++j)
        if (!B->entry_zero(i, j)) brows[i].push_back({j, B->at(i, j)});
  } else if (vc != cur_cols) {
    throw std::runtime_error("identity B factor has wrong shape");
  }

  for (const auto& [i, j] : v.entries) {
    int unk = v.entry_index[(size_t)i * vc + j];
    if (A && B) {
      for (const auto& [r, va] : acols[i])
        for (const auto& [c, vb] : brows[j])
          trips.push_back({row_base + (long long)r * cur_cols + c, unk, coeff * va * vb});
    } else if (A) {
      for (const auto& [r, va] : acols[i])
        trips.push_back({row_base + (long long)r * cur_cols + j, unk, coeff * va});
    } else if (B) {
      for (const auto& [c, vb] : brows[j])
        trips.push_back({row_base + (long long)i * cur_cols + c, unk, coeff * vb});
    } else {
      trips.push_back({row_base + (long long)i * cur_cols + j, unk, coeff});
    }
  }
}

void LinearSystem::add_const(const ExactMatrix& c) {
  if (!in_eq) throw std::runtime_error("add_const outside equation block");
  if (c.rows() != cur_rows || c.cols() != cur_cols)
    throw std::runtime_error("constant term has wrong shape");
  for (int i = 0; i < cur_rows; ++i)
    for (int j = 0; j < cur_cols; ++j)
      if (!c.entry_zero(i, j))
        rhs.push_back({row_base + (long long)i * cur_cols + j, -c.at(i, j)});
}

void LinearSystem::end_equation() {
  if (!in_eq) throw std::runtime_error("end_equation without begin");
  in_eq = false;
  row_base += (long long)cur_rows * cur_cols;
}

std::vector<ExactMatrix> LinearSystem::reshape(const ExactMatrix& flat_col) const {
  std::vector<ExactMatrix> out;
  for (const auto& v : vars) {
    ExactMatrix m(fld, (int)v.dst_deg.size(), (int)v.src_deg.size());
    for (const auto& [i, j] : v.entries) {
      int unk = v.entry_index[(size_t)i * v.src_deg.size() + j];
      m.set(i, j, flat_col.at(unk, 0));
    }
    out.push_back(std::move(m));
  }
  return out;
}

namespace {

// Collapse global row ids to a compact local numbering.
std::map<long long, int> build_row_map(const std::vector<long long>& ids) {
  std::map<long long, int> m;
  for (long long id : ids) m.emplace(id, 0);
  int k = 0;
  for (auto& [id, local] : m) local = k++;
  return m;
}

}  // namespace

std::optional<std::vector<ExactMatrix>> LinearSystem::solve_system() {
  std::vector<long long> ids;
  ids.reserve(trips.size() + rhs.size());
  for (const auto& t : trips) ids.push_back(t.row);
  for (const auto& [r, v] : rhs) ids.push_back(r);
  auto rowmap = build_row_map(ids);
  int nrows = (int)rowmap.size();

  ExactMatrix a(fld, nrows, total_unknowns);
  ExactMatrix b(fld, nrows, 1);
  for (const auto& t : trips) a.add_at(rowmap.at(t.row), t.col, t.v);
  for (const auto& [r, v] : rhs) b.add_at(rowmap.at(r), 0, v);

  auto x = solve(a, b);
  if (!x) return std::nullopt;
  return reshape(*x);
}

LinearSystem::AffineSpace LinearSystem::solution_space() {
  std::vector<long long> ids;
  ids.reserve(trips.size() + rhs.size());
  for (const auto& t : trips) ids.push_back(t.row);
  for (const auto& [r, v] : rhs) ids.push_back(r);
  auto rowmap = build_row_map(ids);
  int nrows = (int)rowmap.size();

  ExactMatrix a(fld, nrows, total_unknowns);
  ExactMatrix b(fld, nrows, 1);
  for (const auto& t : trips) a.add_at(rowmap.at(t.row), t.col, t.v);
  for (const auto& [r, v] : rhs) b.add_at(rowmap.at(r), 0, v);

  AffineSpace sp;
  auto x = solve(a, b);
  if (!x) return sp;
  sp.solvable = true;
  sp.particular = reshape(*x);
  ExactMatrix k = kernel_basis(a);
  for (int c = 0; c < k.cols(); ++c)
    sp.basis.push_back(reshape(k.block(0, c, k.rows(), 1)));
  return sp;
}

std::vector<int> algebra_generators(const DgAlgebra& a) {
  int n = a.dim();
  FieldSpec f = a.field;
  // span grows as generators are added; closure under products each time
  ExactMatrix span(f, n, 1);
  span.set_int(a.unit, 0, 1);
  auto in_span = [&](const ExactMatrix& v) { return in_column_span(span, v); };
  auto close = [&]() {
    bool grew = true;
    while (grew) {
      grew = false;
      std::vector<ExactMatrix> cols;
      for (int c = 0; c < span.cols(); ++c) cols.push_back(span.block(0, c, n, 1));
      for (const auto& u : cols)
        for (const auto& v : cols) {
          ExactMatrix uv = a.mult * kron(u, v);
          if (!uv.is_zero() && !in_span(uv)) {
            span = hcat(span, uv);
            grew = true;
          }
        }
    }
  };
  std::vector<int> gens;
  close();
  for (int i = 0; i < n; ++i) {
    ExactMatrix e(f, n, 1);
    e.set_int(i, 0, 1);
    if (!in_span(e)) {
      gens.push_back(i);
      span = hcat(span, e);
      close();
    }
  }
  return gens;
}

void add_left_linearity(LinearSystem& sys, int var, const BimodulePtr& src,
                        const BimodulePtr& dst, int degree) {
  FieldSpec f = src->field();
  const AlgebraPtr& A = src->left;
  int ms = src->dim(), md = dst->dim();
  for (int a : algebra_generators(*A)) {
    // X . (a . -)  ==  (-1)^{degree |a|} (a . -) . X   as maps src -> dst
    ExactMatrix la_src(f, ms, ms), la_dst(f, md, md);
    for (int x = 0; x < ms; ++x)
      for (int r = 0; r < ms; ++r) {
        Scalar v = src->lact.at(r, a * ms + x);
        if (!v.is_zero()) la_src.set(r, x, v);
      }
    for (int x = 0; x < md; ++x)
      for (int r = 0; r < md; ++r) {
        Scalar v = dst->lact.at(r, a * md + x);
        if (!v.is_zero()) la_dst.set(r, x, v);
      }
    int sgn = ((degree * A->deg[a]) % 2 == 0) ? 1 : -1;
    sys.begin_equation(md, ms);
    sys.add_term(var, nullptr, &la_src);
    sys.add_term(var, &la_dst, nullptr, Scalar(f, -sgn));
    sys.end_equation();
  }
}

void add_right_linearity(LinearSystem& sys, int var, const BimodulePtr& src,
                         const BimodulePtr& dst) {
  FieldSpec f = src->field();
  const AlgebraPtr& B = src->right;
  int ms = src->dim(), md = dst->dim();
  for (int b : algebra_generators(*B)) {
    ExactMatrix rb_src(f, ms, ms), rb_dst(f, md, md);
    for (int x = 0; x < ms; ++x)
      for (int r = 0; r < ms; ++r) {
        Scalar v = src->ract.at(r, x * B->dim() + b);
        if (!v.is_zero()) rb_src.set(r, x, v);
      }
    for (int x = 0; x < md; ++x)
      for (int r = 0; r < md; ++r) {
        Scalar v = dst->ract.at(r, x * B->dim() + b);
        if (!v.is_zero()) rb_dst.set(r, x, v);
      }
    sys.begin_equation(md, ms);
    sys.add_term(var, nullptr, &rb_src);
    sys.add_term(var, &rb_dst, nullptr, Scalar(f, -1));
    sys.end_equation();
  }
}

void add_bilinearity_constraints(LinearSystem& sys, int var,
                                 const BimodulePtr& src, const BimodulePtr& dst,
                                 int degree) {
  add_left_linearity(sys, var, src, dst, degree);
  add_right_linearity(sys, var, src, dst);
}

void add_closedness_constraint(LinearSystem& sys, int var,
                               const BimodulePtr& src, const BimodulePtr& dst,
                               int degree) {
  FieldSpec f = src->field();
  sys.begin_equation(dst->dim(), src->dim());
  sys.add_term(var, &dst->diff, nullptr);
  sys.add_term(var, nullptr, &src->diff, Scalar(f, degree % 2 == 0 ? -1 : 1));
  sys.end_equation();
}

}  // namespace pnv

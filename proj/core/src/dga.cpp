#include "pnv/dga.hpp"

#include <sstream>
#include <stdexcept>

namespace pnv {

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw std::runtime_error(what);
}

// Sparse column view of a matrix: per column, the (row, value) pairs.
std::vector<std::vector<std::pair<int, Scalar>>> sparse_cols(const ExactMatrix& m) {
  std::vector<std::vector<std::pair<int, Scalar>>> cols(m.cols());
  for (int j = 0; j < m.cols(); ++j)
    for (int i = 0; i < m.rows(); ++i)
      if (!m.entry_zero(i, j)) cols[j].push_back({i, m.at(i, j)});
  return cols;
}

using Sparse = std::vector<std::vector<std::pair<int, Scalar>>>;

void axpy(std::vector<Scalar>& acc, const Scalar& c,
          const std::vector<std::pair<int, Scalar>>& col) {
  for (const auto& [i, v] : col) acc[i] = acc[i] + c * v;
}

std::vector<Scalar> zero_vec(FieldSpec f, int n) {
  return std::vector<Scalar>(n, Scalar(f, 0));
}

bool all_zero(const std::vector<Scalar>& v) {
  for (const auto& s : v)
    if (!s.is_zero()) return false;
  return true;
}

}  // namespace

std::vector<int> DgAlgebra::koszul_signs(int power) const {
  std::vector<int> s(deg.size());
  for (size_t i = 0; i < deg.size(); ++i)
    s[i] = ((deg[i] * power) % 2 == 0) ? 1 : -1;
  return s;
}

std::vector<int> DgBimodule::koszul_signs(int power) const {
  std::vector<int> s(deg.size());
  for (size_t i = 0; i < deg.size(); ++i)
    s[i] = ((deg[i] * power) % 2 == 0) ? 1 : -1;
  return s;
}

void validate(const DgAlgebra& a) {
  int n = a.dim();
  if (a.mult.rows() != n || a.mult.cols() != n * n) fail("algebra: mult shape");
  if (a.diff.rows() != n || a.diff.cols() != n) fail("algebra: diff shape");
  if (a.unit < 0 || a.unit >= n || a.deg[a.unit] != 0) fail("algebra: bad unit");

  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r)
      if (!a.diff.entry_zero(r, c) && a.deg[r] != a.deg[c] + 1)
        fail("algebra: differential is not of degree +1");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int r = 0; r < n; ++r)
        if (!a.mult.entry_zero(r, i * n + j) && a.deg[r] != a.deg[i] + a.deg[j])
          fail("algebra: multiplication is not degree-compatible");

  Sparse mc = sparse_cols(a.mult), dc = sparse_cols(a.diff);
  FieldSpec f = a.field;
  Scalar one(f, 1);

  // unit
  for (int i = 0; i < n; ++i) {
    auto ul = zero_vec(f, n), ur = zero_vec(f, n);
    axpy(ul, one, mc[a.unit * n + i]);
    axpy(ur, one, mc[i * n + a.unit]);
    ul[i] = ul[i] - one;
    ur[i] = ur[i] - one;
    if (!all_zero(ul) || !all_zero(ur)) fail("algebra: unit axiom fails");
  }

  // associativity on all basis triples
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto& ij = mc[i * n + j];
      for (int k = 0; k < n; ++k) {
        auto lhs = zero_vec(f, n), rhs = zero_vec(f, n);
        for (const auto& [r, v] : ij) axpy(lhs, v, mc[r * n + k]);
        for (const auto& [r, v] : mc[j * n + k]) axpy(rhs, v, mc[i * n + r]);
        for (int t = 0; t < n; ++t)
          if (!(lhs[t] == rhs[t])) fail("algebra: associativity fails");
      }
    }

  // d^2 = 0 and Leibniz
  for (int i = 0; i < n; ++i) {
    auto dd = zero_vec(f, n);
    for (const auto& [r, v] : dc[i]) axpy(dd, v, dc[r]);
    if (!all_zero(dd)) fail("algebra: d^2 != 0");
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto lhs = zero_vec(f, n), rhs = zero_vec(f, n);
      for (const auto& [r, v] : mc[i * n + j]) axpy(lhs, v, dc[r]);
      for (const auto& [r, v] : dc[i]) axpy(rhs, v, mc[r * n + j]);
      Scalar sg(f, a.deg[i] % 2 == 0 ? 1 : -1);
      for (const auto& [r, v] : dc[j]) axpy(rhs, sg * v, mc[i * n + r]);
      for (int t = 0; t < n; ++t)
        if (!(lhs[t] == rhs[t])) fail("algebra: Leibniz fails");
    }
}

void validate(const DgBimodule& m) {
  int n = m.dim(), na = m.left->dim(), nb = m.right->dim();
  if (m.lact.rows() != n || m.lact.cols() != na * n) fail("bimodule: lact shape");
  if (m.ract.rows() != n || m.ract.cols() != n * nb) fail("bimodule: ract shape");
  if (m.diff.rows() != n || m.diff.cols() != n) fail("bimodule: diff shape");
  if (!(m.left->field == m.right->field)) fail("bimodule: field mismatch");

  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r)
      if (!m.diff.entry_zero(r, c) && m.deg[r] != m.deg[c] + 1)
        fail("bimodule: differential is not of degree +1");
  for (int a = 0; a < na; ++a)
    for (int x = 0; x < n; ++x)
      for (int r = 0; r < n; ++r)
        if (!m.lact.entry_zero(r, a * n + x) && m.deg[r] != m.left->deg[a] + m.deg[x])
          fail("bimodule: left action is not degree-compatible");
  for (int x = 0; x < n; ++x)
    for (int b = 0; b < nb; ++b)
      for (int r = 0; r < n; ++r)
        if (!m.ract.entry_zero(r, x * nb + b) && m.deg[r] != m.deg[x] + m.right->deg[b])
          fail("bimodule: right action is not degree-compatible");

  FieldSpec f = m.field();
  Scalar one(f, 1);
  Sparse lc = sparse_cols(m.lact), rc = sparse_cols(m.ract), dc = sparse_cols(m.diff);
  Sparse mca = sparse_cols(m.left->mult), mcb = sparse_cols(m.right->mult);
  Sparse dca = sparse_cols(m.left->diff), dcb = sparse_cols(m.right->diff);

  for (int x = 0; x < n; ++x) {
    auto ul = zero_vec(f, n), ur = zero_vec(f, n), dd = zero_vec(f, n);
    axpy(ul, one, lc[m.left->unit * n + x]);
    axpy(ur, one, rc[x * nb + m.right->unit]);
    ul[x] = ul[x] - one;
    ur[x] = ur[x] - one;
    if (!all_zero(ul) || !all_zero(ur)) fail("bimodule: unit does not act as identity");
    for (const auto& [r, v] : dc[x]) axpy(dd, v, dc[r]);
    if (!all_zero(dd)) fail("bimodule: d^2 != 0");
  }

  // (a a') x = a (a' x)
  for (int a = 0; a < na; ++a)
    for (int a2 = 0; a2 < na; ++a2)
      for (int x = 0; x < n; ++x) {
        auto lhs = zero_vec(f, n), rhs = zero_vec(f, n);
        for (const auto& [r, v] : mca[a * na + a2]) axpy(lhs, v, lc[r * n + x]);
        for (const auto& [r, v] : lc[a2 * n + x]) axpy(rhs, v, lc[a * n + r]);
        for (int t = 0; t < n; ++t)
          if (!(lhs[t] == rhs[t])) fail("bimodule: left associativity fails");
      }
  // x (b b') = (x b) b'
  for (int x = 0; x < n; ++x)
    for (int b = 0; b < nb; ++b)
      for (int b2 = 0; b2 < nb; ++b2) {
        auto lhs = zero_vec(f, n), rhs = zero_vec(f, n);
        for (const auto& [r, v] : mcb[b * nb + b2]) axpy(lhs, v, rc[x * nb + r]);
        for (const auto& [r, v] : rc[x * nb + b]) axpy(rhs, v, rc[r * nb + b2]);
        for (int t = 0; t < n; ++t)
          if (!(lhs[t] == rhs[t])) fail("bimodule: right associativity fails");
      }
  // (a x) b = a (x b)
  for (int a = 0; a < na; ++a)
    for (int x = 0; x < n; ++x)
      for (int b = 0; b < nb; ++b) {
        auto lhs = zero_vec(f, n), rhs = zero_vec(f, n);
        for (const auto& [r, v] : lc[a * n + x]) axpy(lhs, v, rc[r * nb + b]);
        for (const auto& [r, v] : rc[x * nb + b]) axpy(rhs, v, lc[a * n + r]);
        for (int t = 0; t < n; ++t)
          if (!(lhs[t] == rhs[t])) fail("bimodule: actions do not commute");
      }
  // Leibniz, both sides
  for (int a = 0; a < na; ++a)
    for (int x = 0; x < n; ++x) {
      auto lhs = zero_vec(f, n), rhs = zero_vec(f, n);
      for (const auto& [r, v] : lc[a * n + x]) axpy(lhs, v, dc[r]);
      for (const auto& [r, v] : dca[a]) axpy(rhs, v, lc[r * n + x]);
      Scalar sg(f, m.left->deg[a] % 2 == 0 ? 1 : -1);
      for (const auto& [r, v] : dc[x]) axpy(rhs, sg * v, lc[a * n + r]);
      for (int t = 0; t < n; ++t)
        if (!(lhs[t] == rhs[t])) fail("bimodule: left Leibniz fails");
    }
  for (int x = 0; x < n; ++x)
    for (int b = 0; b < nb; ++b) {
      auto lhs = zero_vec(f, n), rhs = zero_vec(f, n);
      for (const auto& [r, v] : rc[x * nb + b]) axpy(lhs, v, dc[r]);
      for (const auto& [r, v] : dc[x]) axpy(rhs, v, rc[r * nb + b]);
      Scalar sg(f, m.deg[x] % 2 == 0 ? 1 : -1);
      for (const auto& [r, v] : dcb[b]) axpy(rhs, sg * v, rc[x * nb + r]);
      for (int t = 0; t < n; ++t)
        if (!(lhs[t] == rhs[t])) fail("bimodule: right Leibniz fails");
    }
}

void validate_map_degrees(const BimoduleMap& f) {
  for (int j = 0; j < f.mat.cols(); ++j)
    for (int i = 0; i < f.mat.rows(); ++i)
      if (!f.mat.entry_zero(i, j) && f.dst->deg[i] != f.src->deg[j] + f.degree)
        fail("map entries incompatible with its degree");
}

AlgebraPtr ground_algebra(FieldSpec f) {
  DgAlgebra k;
  k.field = f;
  k.label = {"1"};
  k.deg = {0};
  k.unit = 0;
  k.mult = ExactMatrix(f, 1, 1);
  k.mult.set_int(0, 0, 1);
  k.diff = ExactMatrix(f, 1, 1);
  return std::make_shared<const DgAlgebra>(std::move(k));
}

AlgebraPtr make_algebra(DgAlgebra a) {
  validate(a);
  return std::make_shared<const DgAlgebra>(std::move(a));
}

BimodulePtr make_bimodule(DgBimodule m) {
  validate(m);
  return std::make_shared<const DgBimodule>(std::move(m));
}

BimodulePtr diagonal_bimodule(const AlgebraPtr& a) {
  DgBimodule m;
  m.left = m.right = a;
  m.label = a->label;
  m.deg = a->deg;
  m.lact = a->mult;
  m.ract = a->mult;
  m.diff = a->diff;
  return make_bimodule(std::move(m));
}

BimodulePtr underlying_complex(const BimodulePtr& m) {
  DgBimodule u;
  u.left = u.right = ground_algebra(m->field());
  u.label = m->label;
  u.deg = m->deg;
  u.diff = m->diff;
  u.lact = ExactMatrix::identity(m->field(), m->dim());
  u.ract = u.lact;
  return make_bimodule(std::move(u));
}

std::map<int, int> dims_by_degree(const DgBimodule& m) {
  std::map<int, int> d;
  for (int g : m.deg) d[g]++;
  return d;
}

ExactMatrix lact_slice(const DgBimodule& m, int a) {
  ExactMatrix s(m.field(), m.dim(), m.dim());
  for (int x = 0; x < m.dim(); ++x)
    for (int r = 0; r < m.dim(); ++r)
      if (!m.lact.entry_zero(r, a * m.dim() + x)) s.set(r, x, m.lact.at(r, a * m.dim() + x));
  return s;
}

ExactMatrix ract_slice(const DgBimodule& m, int b) {
  ExactMatrix s(m.field(), m.dim(), m.dim());
  for (int x = 0; x < m.dim(); ++x)
    for (int r = 0; r < m.dim(); ++r)
      if (!m.ract.entry_zero(r, x * m.right->dim() + b)) s.set(r, x, m.ract.at(r, x * m.right->dim() + b));
  return s;
}

std::vector<int> degree_indices(const DgBimodule& m, int d) {
  std::vector<int> idx;
  for (int i = 0; i < m.dim(); ++i)
    if (m.deg[i] == d) idx.push_back(i);
  return idx;
}

BimodulePtr shift(const BimodulePtr& m, int s) {
  if (s == 0) return m;
  DgBimodule r = *m;
  for (auto& d : r.deg) d -= s;
  if (s % 2 != 0) r.diff = -r.diff;
  // twist the left action: a . x picks up (-1)^{s|a|}
  std::vector<int> colsigns(m->left->dim() * m->dim());
  for (int a = 0; a < m->left->dim(); ++a)
    for (int x = 0; x < m->dim(); ++x)
      colsigns[a * m->dim() + x] = ((s * m->left->deg[a]) % 2 == 0) ? 1 : -1;
  r.lact = r.lact.col_signed(colsigns);
  return std::make_shared<const DgBimodule>(std::move(r));
}

BimoduleMap shift_map(const BimoduleMap& f, int s) {
  BimoduleMap r;
  r.src = shift(f.src, s);
  r.dst = shift(f.dst, s);
  r.degree = f.degree;
  r.mat = ((s * f.degree) % 2 == 0) ? f.mat : -f.mat;
  return r;
}

BimoduleMap identity_map(const BimodulePtr& m) {
  return BimoduleMap{m, m, 0, ExactMatrix::identity(m->field(), m->dim())};
}

BimoduleMap zero_map(const BimodulePtr& src, const BimodulePtr& dst, int degree) {
  return BimoduleMap{src, dst, degree, ExactMatrix(src->field(), dst->dim(), src->dim())};
}

BimoduleMap compose(const BimoduleMap& g, const BimoduleMap& f) {
  if (g.src.get() != f.dst.get()) fail("compose: middle object mismatch");
  return BimoduleMap{f.src, g.dst, f.degree + g.degree, g.mat * f.mat};
}

BimoduleMap add(const BimoduleMap& f, const BimoduleMap& g) {
  if (f.src.get() != g.src.get() || f.dst.get() != g.dst.get() || f.degree != g.degree)
    fail("add: shape mismatch");
  return BimoduleMap{f.src, f.dst, f.degree, f.mat + g.mat};
}

BimoduleMap sub(const BimoduleMap& f, const BimoduleMap& g) {
  return add(f, negate(g));
}

BimoduleMap scale(const BimoduleMap& f, const Scalar& c) {
  return BimoduleMap{f.src, f.dst, f.degree, f.mat.scaled(c)};
}

BimoduleMap negate(const BimoduleMap& f) {
  return BimoduleMap{f.src, f.dst, f.degree, -f.mat};
}

BimoduleMap map_differential(const BimoduleMap& f) {
  ExactMatrix m = f.dst->diff * f.mat;
  if (f.degree % 2 == 0) m = m - f.mat * f.src->diff;
  else m = m + f.mat * f.src->diff;
  return BimoduleMap{f.src, f.dst, f.degree + 1, std::move(m)};
}

bool is_closed(const BimoduleMap& f) {
  return map_differential(f).mat.is_zero();
}

bool is_bilinear(const BimoduleMap& f) {
  const DgBimodule& M = *f.src;
  const DgBimodule& N = *f.dst;
  if (!same_algebra(M.left, N.left) || !same_algebra(M.right, N.right)) return false;
  int na = M.left->dim(), nb = M.right->dim();
  // f(a.x) = (-1)^{deg(f)|a|} a.f(x)
  std::vector<int> asigns(na * M.dim());
  for (int a = 0; a < na; ++a)
    for (int x = 0; x < M.dim(); ++x)
      asigns[a * M.dim() + x] = ((f.degree * M.left->deg[a]) % 2 == 0) ? 1 : -1;
  ExactMatrix lhs = f.mat * M.lact;
  ExactMatrix rhs =
      (N.lact * kron(ExactMatrix::identity(M.field(), na), f.mat)).col_signed(asigns);
  if (!(lhs == rhs)) return false;
  // f(x.b) = f(x).b
  ExactMatrix lhs2 = f.mat * M.ract;
  ExactMatrix rhs2 = N.ract * kron(f.mat, ExactMatrix::identity(M.field(), nb));
  return lhs2 == rhs2;
}

ConeTriple cone(const BimoduleMap& f) {
  if (f.degree != 0) fail("cone: map must have degree 0");
  if (!is_closed(f)) fail("cone: map must be closed");
  BimodulePtr s1 = shift(f.src, 1);
  SumTriple sum = direct_sum({s1, f.dst});
  DgBimodule total = *sum.total;
  // insert the connecting component f: src[1] -> dst (same matrix as f)
  int off = s1->dim();
  for (int j = 0; j < f.src->dim(); ++j)
    for (int i = 0; i < f.dst->dim(); ++i) {
      Scalar v = f.mat.at(i, j);
      if (!v.is_zero()) total.diff.set(off + i, j, v);
    }
  BimodulePtr tot = make_bimodule(std::move(total));
  BimoduleMap incl = sum.incl[1];
  incl.dst = tot;
  BimoduleMap proj = sum.proj[0];
  proj.src = tot;
  return ConeTriple{tot, std::move(incl), std::move(proj)};
}

SumTriple direct_sum(const std::vector<BimodulePtr>& parts) {
  if (parts.empty()) fail("direct_sum: empty");
  FieldSpec f = parts[0]->field();
  AlgebraPtr A = parts[0]->left, B = parts[0]->right;
  int total_dim = 0;
  for (const auto& p : parts) {
    if (!same_algebra(p->left, A) || !same_algebra(p->right, B))
      fail("direct_sum: algebra mismatch");
    total_dim += p->dim();
  }
  DgBimodule m;
  m.left = A;
  m.right = B;
  m.lact = ExactMatrix(f, total_dim, A->dim() * total_dim);
  m.ract = ExactMatrix(f, total_dim, total_dim * B->dim());
  m.diff = ExactMatrix(f, total_dim, total_dim);
  int off = 0;
  for (const auto& p : parts) {
    for (int i = 0; i < p->dim(); ++i) {
      m.label.push_back(p->label[i]);
      m.deg.push_back(p->deg[i]);
    }
    for (int a = 0; a < A->dim(); ++a)
      for (int x = 0; x < p->dim(); ++x)
        for (int r = 0; r < p->dim(); ++r) {
          Scalar v = p->lact.at(r, a * p->dim() + x);
          if (!v.is_zero()) m.lact.set(off + r, a * total_dim + (off + x), v);
        }
    for (int x = 0; x < p->dim(); ++x)
      for (int b = 0; b < B->dim(); ++b)
        for (int r = 0; r < p->dim(); ++r) {
          Scalar v = p->ract.at(r, x * B->dim() + b);
          if (!v.is_zero()) m.ract.set(off + r, (off + x) * B->dim() + b, v);
        }
    for (int j = 0; j < p->dim(); ++j)
      for (int i = 0; i < p->dim(); ++i) {
        Scalar v = p->diff.at(i, j);
        if (!v.is_zero()) m.diff.set(off + i, off + j, v);
      }
    off += p->dim();
  }
  BimodulePtr tot = std::make_shared<const DgBimodule>(std::move(m));
  SumTriple st;
  st.total = tot;
  off = 0;
  for (const auto& p : parts) {
    ExactMatrix in(f, total_dim, p->dim()), pr(f, p->dim(), total_dim);
    for (int i = 0; i < p->dim(); ++i) {
      in.set_int(off + i, i, 1);
      pr.set_int(i, off + i, 1);
    }
    st.incl.push_back(BimoduleMap{p, tot, 0, std::move(in)});
    st.proj.push_back(BimoduleMap{tot, p, 0, std::move(pr)});
    off += p->dim();
  }
  return st;
}

Cohomology cohomology(const BimodulePtr& mp) {
  const DgBimodule& m = *mp;
  FieldSpec f = m.field();
  int n = m.dim();

  // degreewise cycles and boundaries, assembled in ambient coordinates
  std::map<int, std::vector<int>> by_deg;
  for (int i = 0; i < n; ++i) by_deg[m.deg[i]].push_back(i);

  ExactMatrix bnd(f, n, 0), rep(f, n, 0);
  for (const auto& [g, idx] : by_deg) {
    std::vector<int> up = degree_indices(m, g + 1);
    ExactMatrix dg = m.diff.select_rows(up).select_cols(idx);
    ExactMatrix zg = kernel_basis(dg);  // coords in idx
    // boundaries entering degree g
    std::vector<int> dn = degree_indices(m, g - 1);
    ExactMatrix dprev = m.diff.select_rows(idx).select_cols(dn);
    // span of dprev columns + cycle columns, in idx-coordinates
    ExactMatrix paired = hcat(dprev, zg);
    std::vector<int> piv;
    rref(paired, &piv);
    // pivots among the dprev block give a boundary basis; pivots in the
    // cycle block give representatives of cohomology classes
    ExactMatrix blocal(f, n, 0), rlocal(f, n, 0);
    for (int c : piv) {
      ExactMatrix col =
          (c < dprev.cols()) ? dprev.block(0, c, dprev.rows(), 1) : zg.block(0, c - dprev.cols(), zg.rows(), 1);
      ExactMatrix amb(f, n, 1);
      for (int i = 0; i < (int)idx.size(); ++i) amb.set(idx[i], 0, col.at(i, 0));
      if (c < dprev.cols()) bnd = hcat(bnd, amb);
      else rep = hcat(rep, amb);
    }
  }

  // complete [bnd | rep] to a basis of the ambient space by standard vectors
  ExactMatrix br = hcat(bnd, rep);
  ExactMatrix full = hcat(br, ExactMatrix::identity(f, n));
  std::vector<int> piv;
  rref(full, &piv);
  std::vector<int> extension;
  for (int c : piv)
    if (c >= br.cols()) extension.push_back(c - br.cols());
  ExactMatrix basis = br;
  for (int e : extension) {
    ExactMatrix col(f, n, 1);
    col.set_int(e, 0, 1);
    basis = hcat(basis, col);
  }
  auto inv = solve(basis, ExactMatrix::identity(f, n));
  if (!inv) fail("cohomology: internal basis completion failed");
  std::vector<int> rep_rows(rep.cols());
  for (int i = 0; i < rep.cols(); ++i) rep_rows[i] = bnd.cols() + i;
  ExactMatrix proj = inv->select_rows(rep_rows);

  // H is a complex of vector spaces: the actions of the original algebras do
  // not descend unless their differentials vanish, so we do not carry them.
  DgBimodule h;
  h.left = ground_algebra(f);
  h.right = h.left;
  for (int i = 0; i < rep.cols(); ++i) {
    // degree of the representative: its unique nonzero degree
    int g = 0;
    for (int r = 0; r < n; ++r)
      if (!rep.entry_zero(r, i)) { g = m.deg[r]; break; }
    h.deg.push_back(g);
    h.label.push_back("h" + std::to_string(g) + "_" + std::to_string(i));
  }
  int hd = rep.cols();
  h.diff = ExactMatrix(f, hd, hd);
  h.lact = ExactMatrix::identity(f, hd);
  h.ract = ExactMatrix::identity(f, hd);
  BimodulePtr H = make_bimodule(std::move(h));
  return Cohomology{H, rep, proj};
}

std::map<int, int> cohomology_dims(const DgBimodule& m) {
  std::map<int, int> out;
  std::map<int, std::vector<int>> by_deg;
  for (int i = 0; i < m.dim(); ++i) by_deg[m.deg[i]].push_back(i);
  for (const auto& [g, idx] : by_deg) {
    std::vector<int> up = degree_indices(m, g + 1), dn = degree_indices(m, g - 1);
    int rk_out = rank(m.diff.select_rows(up).select_cols(idx));
    int rk_in = rank(m.diff.select_rows(idx).select_cols(dn));
    int h = (int)idx.size() - rk_out - rk_in;
    if (h != 0) out[g] = h;
  }
  return out;
}

bool is_acyclic(const DgBimodule& m) {
  return cohomology_dims(m).empty();
}

bool is_quasi_iso(const BimoduleMap& f) {
  if (f.degree != 0) fail("is_quasi_iso: map must have degree 0");
  if (!is_closed(f)) fail("is_quasi_iso: map must be closed");
  Cohomology hs = cohomology(f.src), hd = cohomology(f.dst);
  auto ds = dims_by_degree(*hs.H), dd = dims_by_degree(*hd.H);
  if (ds != dd) return false;
  ExactMatrix hf = hd.proj * (f.mat * hs.incl);
  for (const auto& [g, cnt] : ds) {
    std::vector<int> rs = degree_indices(*hd.H, g), cs = degree_indices(*hs.H, g);
    if (rank(hf.select_rows(rs).select_cols(cs)) != cnt) return false;
  }
  return true;
}

BimoduleMap cohomology_map(const BimoduleMap& f, const Cohomology& hs, const Cohomology& hd) {
  return BimoduleMap{hs.H, hd.H, f.degree, hd.proj * (f.mat * hs.incl)};
}

bool same_algebra(const AlgebraPtr& a, const AlgebraPtr& b) {
  if (a.get() == b.get()) return true;
  return a->field == b->field && a->deg == b->deg && a->unit == b->unit &&
         a->mult == b->mult && a->diff == b->diff;
}

}  // namespace pnv

#include "pnv/tensor.hpp"

#include "pnv/hom.hpp"
#include "pnv/linsys.hpp"

#include <stdexcept>

namespace pnv {

namespace {

struct PairResult {
  BimodulePtr total;
  ExactMatrix proj, sect;
};

// M (x)_A N for a single junction; proj/sect relate the quotient to the
// dm*dn free product.  The chosen basis consists of monomial tensors.
PairResult tensor_pair(const BimodulePtr& mp, const BimodulePtr& np) {
  const DgBimodule& m = *mp;
  const DgBimodule& n = *np;
  FieldSpec f = m.field();
  if (!same_algebra(m.right, n.left))
    throw std::runtime_error("tensor: junction algebras differ");
  if (!is_projective(mp, true) && !is_projective(np, false))
    throw std::runtime_error(
        "tensor: neither factor is projective over the junction algebra");
  const DgAlgebra& A = *m.right;
  int dm = m.dim(), dn = n.dim();
  int free2 = dm * dn;

  // balancing relations (m.a)(x)n - m(x)(a.n) for algebra generators a
  ExactMatrix rel(f, free2, 0);
  ExactMatrix idm = ExactMatrix::identity(f, dm);
  ExactMatrix idn = ExactMatrix::identity(f, dn);
  for (int a : algebra_generators(A)) {
    ExactMatrix cols =
        kron(ract_slice(m, a), idn) - kron(idm, lact_slice(n, a));
    rel = hcat(rel, cols);
  }
  std::vector<int> piv;
  rref(rel, &piv);
  ExactMatrix b = rel.select_cols(piv);

  // complete the relation span to a basis by standard vectors; the leftover
  // standard vectors are the quotient basis
  std::vector<int> piv2;
  rref(hcat(b, ExactMatrix::identity(f, free2)), &piv2);
  std::vector<int> ext;
  for (int c : piv2)
    if (c >= b.cols()) ext.push_back(c - b.cols());
  ExactMatrix basis = b;
  ExactMatrix sect(f, free2, (int)ext.size());
  for (int i = 0; i < (int)ext.size(); ++i) {
    sect.set_int(ext[i], i, 1);
    ExactMatrix col(f, free2, 1);
    col.set_int(ext[i], 0, 1);
    basis = hcat(basis, col);
  }
  auto inv = solve(basis, ExactMatrix::identity(f, free2));
  if (!inv) throw std::runtime_error("tensor: basis completion failed");
  std::vector<int> qrows(ext.size());
  for (size_t i = 0; i < ext.size(); ++i) qrows[i] = b.cols() + (int)i;
  ExactMatrix proj = inv->select_rows(qrows);

  DgBimodule t;
  t.left = m.left;
  t.right = n.right;
  for (int e : ext) {
    int i = e / dn, j = e % dn;
    t.deg.push_back(m.deg[i] + n.deg[j]);
    t.label.push_back(m.label[i] + "(x)" + n.label[j]);
  }
  int q = (int)ext.size();

  // induced structure through the free level
  ExactMatrix dfree = kron(m.diff, idn) +
                      kron(idm.col_signed(m.koszul_signs()), n.diff);
  t.diff = proj * (dfree * sect);
  t.lact = ExactMatrix(f, q, m.left->dim() * q);
  for (int a = 0; a < m.left->dim(); ++a) {
    ExactMatrix pa = proj * (kron(lact_slice(m, a), idn) * sect);
    for (int x = 0; x < q; ++x)
      for (int r = 0; r < q; ++r)
        if (!pa.entry_zero(r, x)) t.lact.set(r, a * q + x, pa.at(r, x));
  }
  t.ract = ExactMatrix(f, q, q * n.right->dim());
  for (int bb = 0; bb < n.right->dim(); ++bb) {
    ExactMatrix pb = proj * (kron(idm, ract_slice(n, bb)) * sect);
    for (int x = 0; x < q; ++x)
      for (int r = 0; r < q; ++r)
        if (!pb.entry_zero(r, x)) t.ract.set(r, x * n.right->dim() + bb, pb.at(r, x));
  }
  return PairResult{make_bimodule(std::move(t)), std::move(proj), std::move(sect)};
}

}  // namespace

ChainBasis tensor_chain(const std::vector<BimodulePtr>& factors) {
  if (factors.empty()) throw std::runtime_error("tensor_chain: no factors");
  FieldSpec f = factors[0]->field();
  ChainBasis cb;
  cb.factors = factors;
  BimodulePtr cur = factors[0];
  ExactMatrix proj = ExactMatrix::identity(f, cur->dim());
  ExactMatrix sect = proj;
  long long freed = cur->dim();
  for (size_t t = 1; t < factors.size(); ++t) {
    PairResult pr = tensor_pair(cur, factors[t]);
    int d = factors[t]->dim();
    int qnew = pr.total->dim();
    // sect' = (sect (x) id_d) * pr.sect; pr.sect columns are monomials, so
    // scatter sect columns instead of forming the kron factor
    ExactMatrix s2(f, freed * d, qnew);
    for (int y = 0; y < qnew; ++y)
      for (int xj = 0; xj < pr.sect.rows(); ++xj) {
        if (pr.sect.entry_zero(xj, y)) continue;
        Scalar c = pr.sect.at(xj, y);
        int x = xj / d, j = xj % d;
        for (int p = 0; p < (int)freed; ++p)
          if (!sect.entry_zero(p, x)) s2.add_at((long long)p * d + j, y, c * sect.at(p, x));
      }
    // proj' = pr.proj * (proj (x) id_d)
    ExactMatrix p2(f, qnew, freed * d);
    for (int y = 0; y < qnew; ++y)
      for (int xj = 0; xj < pr.proj.cols(); ++xj) {
        if (pr.proj.entry_zero(y, xj)) continue;
        Scalar c = pr.proj.at(y, xj);
        int x = xj / d, j = xj % d;
        for (int p = 0; p < (int)freed; ++p)
          if (!proj.entry_zero(x, p)) p2.add_at(y, (long long)p * d + j, c * proj.at(x, p));
      }
    sect = std::move(s2);
    proj = std::move(p2);
    cur = pr.total;
    freed *= d;
  }
  cb.total = cur;
  cb.proj = std::move(proj);
  cb.sect = std::move(sect);
  cb.free_dim = freed;
  return cb;
}

BimodulePtr tensor_over(const BimodulePtr& m, const BimodulePtr& n) {
  return tensor_chain({m, n}).total;
}

long long FreeLayout::total_dim() const {
  long long d = 1;
  for (const auto& v : degs) d *= (long long)v.size();
  return d;
}

FreeLayout layout_of(const std::vector<BimodulePtr>& factors) {
  FreeLayout lay;
  for (const auto& m : factors) lay.degs.push_back(m->deg);
  return lay;
}

std::pair<FreeLayout, ExactMatrix> apply_slot_op(const FreeLayout& lay,
                                                 const SlotOp& op,
                                                 const ExactMatrix& vecs) {
  FieldSpec f = vecs.field();
  long long pre = 1, in_block = 1, post = 1;
  for (int t = 0; t < op.slot; ++t) pre *= (long long)lay.degs[t].size();
  for (int t = op.slot; t < op.slot + op.arity; ++t)
    in_block *= (long long)lay.degs[t].size();
  for (int t = op.slot + op.arity; t < (int)lay.degs.size(); ++t)
    post *= (long long)lay.degs[t].size();
  if (pre * in_block * post != vecs.rows())
    throw std::runtime_error("apply_slot_op: layout does not match the columns");
  long long out_block = 1;
  for (const auto& v : op.out_degs) out_block *= (long long)v.size();
  if (op.mat.rows() != out_block || op.mat.cols() != in_block)
    throw std::runtime_error("apply_slot_op: block shape mismatch");

  // prefix Koszul signs
  std::vector<int> psign(pre, 1);
  if (op.koszul_degree % 2 != 0) {
    for (long long p = 0; p < pre; ++p) {
      long long rest = p;
      int dsum = 0;
      for (int t = op.slot - 1; t >= 0; --t) {
        long long d = (long long)lay.degs[t].size();
        dsum += lay.degs[t][rest % d];
        rest /= d;
      }
      psign[p] = (dsum % 2 == 0) ? 1 : -1;
    }
  }

  ExactMatrix out(f, pre * out_block * post, vecs.cols());
  for (int r = 0; r < op.mat.rows(); ++r)
    for (int c = 0; c < op.mat.cols(); ++c) {
      if (op.mat.entry_zero(r, c)) continue;
      Scalar v = op.mat.at(r, c);
      for (long long p = 0; p < pre; ++p) {
        Scalar pv = psign[p] == 1 ? v : -v;
        for (long long q = 0; q < post; ++q) {
          long long src = (p * in_block + c) * post + q;
          long long dst = (p * out_block + r) * post + q;
          for (int col = 0; col < vecs.cols(); ++col) {
            if (vecs.entry_zero((int)src, col)) continue;
            out.add_at((int)dst, col, pv * vecs.at((int)src, col));
          }
        }
      }
    }

  FreeLayout nl;
  for (int t = 0; t < op.slot; ++t) nl.degs.push_back(lay.degs[t]);
  for (const auto& v : op.out_degs) nl.degs.push_back(v);
  for (int t = op.slot + op.arity; t < (int)lay.degs.size(); ++t)
    nl.degs.push_back(lay.degs[t]);
  return {std::move(nl), std::move(out)};
}

BimoduleMap induce_ops(const ChainBasis& src, const ChainBasis& dst,
                       const std::vector<SlotOp>& ops, int degree) {
  FreeLayout lay = layout_of(src.factors);
  ExactMatrix cols = src.sect;
  for (const auto& op : ops) {
    auto [nl, nc] = apply_slot_op(lay, op, cols);
    lay = std::move(nl);
    cols = std::move(nc);
  }
  if (lay.total_dim() != dst.free_dim)
    throw std::runtime_error("induce_ops: operator does not land in the target chain");
  return BimoduleMap{src.total, dst.total, degree, dst.proj * cols};
}

BimoduleMap tensor_map(const ChainBasis& src, const ChainBasis& dst,
                       const std::vector<BimoduleMap>& fs) {
  if (fs.size() != src.factors.size() || fs.size() != dst.factors.size())
    throw std::runtime_error("tensor_map: factor count mismatch");
  std::vector<SlotOp> ops;
  int degree = 0;
  for (int t = (int)fs.size() - 1; t >= 0; --t) {
    // applying the rightmost factor first realises the standard sign
    ops.push_back(SlotOp{t, 1, {dst.factors[t]->deg}, fs[t].mat, fs[t].degree});
    degree += fs[t].degree;
  }
  return induce_ops(src, dst, ops, degree);
}

ExactMatrix free_tensor_matrix(const std::vector<BimoduleMap>& fs) {
  if (fs.empty()) throw std::runtime_error("free_tensor_matrix: no maps");
  ExactMatrix t = fs[0].mat;
  std::vector<int> srcdeg = fs[0].src->deg;
  for (size_t i = 1; i < fs.size(); ++i) {
    if (fs[i].degree % 2 != 0) {
      std::vector<int> signs(srcdeg.size());
      for (size_t j = 0; j < srcdeg.size(); ++j) signs[j] = (srcdeg[j] % 2 == 0) ? 1 : -1;
      t = t.col_signed(signs);
    }
    t = kron(t, fs[i].mat);
    std::vector<int> nd;
    for (int a : srcdeg)
      for (int b : fs[i].src->deg) nd.push_back(a + b);
    srcdeg = std::move(nd);
  }
  return t;
}

BimoduleMap induce(const ChainBasis& src, const ChainBasis& dst,
                   const ExactMatrix& free_mat, int degree) {
  return BimoduleMap{src.total, dst.total, degree,
                     dst.proj * (free_mat * src.sect)};
}

std::vector<int> composite_degrees(const std::vector<BimodulePtr>& factors) {
  std::vector<int> out{0};
  for (const auto& m : factors) {
    std::vector<int> nd;
    nd.reserve(out.size() * m->deg.size());
    for (int a : out)
      for (int b : m->deg) nd.push_back(a + b);
    out = std::move(nd);
  }
  return out;
}

const ChainBasis& ChainCache::get(const std::vector<BimodulePtr>& factors) {
  std::vector<const DgBimodule*> key;
  key.reserve(factors.size());
  for (const auto& m : factors) key.push_back(m.get());
  auto it = store.find(key);
  if (it == store.end()) it = store.emplace(key, tensor_chain(factors)).first;
  return it->second;
}

}  // namespace pnv

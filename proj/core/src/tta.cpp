#include "pnv/hom.hpp"
#include "pnv/linsys.hpp"
#include "pnv/twisted.hpp"

#include <stdexcept>
#include <string>

namespace pnv {

namespace {

// single nonzero row of a monomial column (sect columns have coefficient 1)
int monomial_row(const ExactMatrix& sect, int col) {
  int hit = -1;
  for (int r = 0; r < sect.rows(); ++r)
    if (!sect.entry_zero(r, col)) {
      if (hit >= 0 || !sect.at(r, col).is_one())
        throw std::runtime_error("tta: chain section is not monomial");
      hit = r;
    }
  if (hit < 0) throw std::runtime_error("tta: empty section column");
  return hit;
}

// xi_i : H^{(x)i} -> H^{(x)(i-1)}, the sum over slots of sigma contracted
// into a neighbour; Koszul prefix signs only (the adjacent-slot cross terms
// then cancel against the bilinearity signs of sigma, giving xi o xi = 0)
ExactMatrix xi_component(const CyclicCoextension& co, const BimoduleMap& sigma, int i) {
  const BimodulePtr& H = co.H;
  FieldSpec f = H->field();
  if (i == 1) return sigma.mat;
  int d = H->dim();
  ExactMatrix mat_left = H->lact * kron(sigma.mat, ExactMatrix::identity(f, d));
  ExactMatrix mat_right = H->ract * free_tensor_matrix({identity_map(H), sigma});
  ExactMatrix acc(f, co.powers[i - 1].total->dim(), co.powers[i].total->dim());
  for (int j = 0; j < i; ++j) {
    SlotOp op;
    op.slot = (j <= i - 2) ? j : i - 2;
    op.arity = 2;
    op.out_degs = {H->deg};
    op.mat = (j <= i - 2) ? mat_left : mat_right;
    op.koszul_degree = 1;
    acc = acc + induce_ops(co.powers[i], co.powers[i - 1], {op}, 1).mat;
  }
  return acc;
}

}  // namespace

TtaResult tta(const BimodulePtr& H, const BimoduleMap& sigma, int n) {
  if (!H || n < 1) throw std::runtime_error("tta: need H and n >= 1");
  if (!same_algebra(H->left, H->right))
    throw std::runtime_error("tta: H must be a bimodule over one algebra");
  FieldSpec f = H->field();
  if (sigma.src != H || sigma.degree != 1)
    throw std::runtime_error("tta: sigma must be a degree +1 map out of H");
  if (!is_closed(sigma) || !is_bilinear(sigma))
    throw std::runtime_error("tta: sigma must be closed and bilinear");
  const BimodulePtr& dg = sigma.dst;
  if (dg->dim() != H->left->dim() || dg->deg != H->left->deg ||
      !(dg->lact == H->left->mult) || !(dg->diff == H->left->diff))
    throw std::runtime_error("tta: sigma must land in the diagonal bimodule");

  TtaResult out;
  out.co.H = H;
  out.co.n = n;
  out.co.powers.resize(n + 1);
  std::vector<BimodulePtr> word;
  for (int i = 1; i <= n; ++i) {
    word.push_back(H);
    out.co.powers[i] = tensor_chain(word);
  }
  out.co.base.obj[0] = dg;
  for (int i = 1; i <= n; ++i) out.co.base.obj[-i] = out.co.powers[i].total;
  for (int i = 1; i <= n; ++i)
    out.co.base.comp[{-i, -i + 1}] = xi_component(out.co, sigma, i);

  out.conv = convolve(out.co.base);  // verifies Maurer-Cartan
  out.Rn = out.conv.total;
  out.unit = BimoduleMap{dg, out.Rn, 0, block_incl(out.conv, 0, 0)};
  if (!is_closed(out.unit) || !is_bilinear(out.unit))
    throw std::runtime_error("tta: unit defective");

  // multiplication: concatenation of words where the result still fits,
  // then a solved correction restoring closedness at the truncation edge
  out.square = tensor_chain({out.Rn, out.Rn});
  int rd = out.Rn->dim();
  std::vector<BimodulePtr> blocks(n + 1);
  blocks[0] = dg;
  for (int i = 1; i <= n; ++i) blocks[i] = out.co.powers[i].total;
  auto block_of = [&](int p) {
    for (const auto& [idx, sp] : out.conv.span)
      if (p >= sp.first && p < sp.second) return std::pair<int, int>{-idx, p - sp.first};
    throw std::runtime_error("tta: index out of range");
  };

  ExactMatrix m0(f, rd, out.square.total->dim());
  for (int t = 0; t < out.square.total->dim(); ++t) {
    int e = monomial_row(out.square.sect, t);
    auto [i, u] = block_of(e / rd);
    auto [j, v] = block_of(e % rd);
    if (i + j > n) continue;
    if (i == 0 || j == 0) {
      ExactMatrix act = (i == 0) ? lact_slice(*blocks[j], u) : ract_slice(*blocks[i], v);
      int col = (i == 0) ? v : u;
      int off = out.conv.span.at(-(i + j)).first;
      for (int r = 0; r < act.rows(); ++r)
        if (!act.entry_zero(r, col)) m0.add_at(off + r, t, act.at(r, col));
      continue;
    }
    long long uf = monomial_row(out.co.powers[i].sect, u);
    long long vf = monomial_row(out.co.powers[j].sect, v);
    long long free_idx = uf * out.co.powers[j].free_dim + vf;
    const ExactMatrix& pr = out.co.powers[i + j].proj;
    int off = out.conv.span.at(-(i + j)).first;
    for (int r = 0; r < pr.rows(); ++r)
      if (!pr.entry_zero(r, (int)free_idx)) m0.add_at(off + r, t, pr.at(r, (int)free_idx));
  }
  BimoduleMap mult0{out.square.total, out.Rn, 0, m0};
  if (!is_bilinear(mult0)) throw std::runtime_error("tta: concatenation not bilinear");

  // unit columns in quotient coordinates, for strictness
  int ug = out.conv.span.at(0).first + H->left->unit;
  ExactMatrix el(f, (int)out.square.free_dim, rd);
  ExactMatrix er = el;
  for (int q = 0; q < rd; ++q) {
    el.set_int((int)((long long)ug * rd + q), q, 1);
    er.set_int((int)((long long)q * rd + ug), q, 1);
  }
  ExactMatrix ul = out.square.proj * el;
  ExactMatrix ur = out.square.proj * er;
  ExactMatrix id_r = ExactMatrix::identity(f, rd);
  if (!(m0 * ul == id_r) || !(m0 * ur == id_r))
    throw std::runtime_error("tta: concatenation not strictly unital");

  ExactMatrix dm0 = map_differential(mult0).mat;
  if (dm0.is_zero()) {
    out.mult = mult0;
    return out;
  }

  // columns of the square spanned by pairs whose concatenation still fits
  std::vector<int> keep;
  for (auto& [ki, si] : out.conv.span)
    for (auto& [kj, sj] : out.conv.span) {
      if (-(ki + kj) > n) continue;
      for (int u = si.first; u < si.second; ++u)
        for (int v2 = sj.first; v2 < sj.second; ++v2)
          keep.push_back((int)((long long)u * rd + v2));
    }
  ExactMatrix nf(f, (int)out.square.free_dim, (int)keep.size());
  for (int t = 0; t < (int)keep.size(); ++t) nf.set_int(keep[t], t, 1);
  ExactMatrix no_q = out.square.proj * nf;
  ExactMatrix sqd = out.square.total->diff;

  // preferred corrections first: supported on the overflow blocks only
  // (keeps the product equal to concatenation wherever it fits), then merely
  // strictly unital, then unital up to a bimodule homotopy, then anything
  for (int stage = 0; stage < 4; ++stage) {
    LinearSystem sys(f);
    int v = sys.add_map_var(out.square.total, out.Rn, 0);
    add_bilinearity_constraints(sys, v, out.square.total, out.Rn, 0);
    sys.begin_equation(rd, out.square.total->dim());
    sys.add_term(v, &out.Rn->diff, nullptr);
    sys.add_term(v, nullptr, &sqd, Scalar(f, -1));
    sys.add_const(dm0);
    sys.end_equation();
    if (stage == 0) {
      sys.begin_equation(rd, (int)keep.size());
      sys.add_term(v, nullptr, &no_q);
      sys.end_equation();
    } else if (stage == 1) {
      sys.begin_equation(rd, rd);
      sys.add_term(v, nullptr, &ul);
      sys.end_equation();
      sys.begin_equation(rd, rd);
      sys.add_term(v, nullptr, &ur);
      sys.end_equation();
    } else if (stage == 2) {
      int tl = sys.add_map_var(out.Rn, out.Rn, -1);
      int tr = sys.add_map_var(out.Rn, out.Rn, -1);
      add_bilinearity_constraints(sys, tl, out.Rn, out.Rn, -1);
      add_bilinearity_constraints(sys, tr, out.Rn, out.Rn, -1);
      sys.begin_equation(rd, rd);
      sys.add_term(v, nullptr, &ul);
      sys.add_term(tl, &out.Rn->diff, nullptr, Scalar(f, -1));
      sys.add_term(tl, nullptr, &out.Rn->diff, Scalar(f, -1));
      sys.end_equation();
      sys.begin_equation(rd, rd);
      sys.add_term(v, nullptr, &ur);
      sys.add_term(tr, &out.Rn->diff, nullptr, Scalar(f, -1));
      sys.add_term(tr, nullptr, &out.Rn->diff, Scalar(f, -1));
      sys.end_equation();
    }
    if (auto sol = sys.solve_system()) {
      out.mult = BimoduleMap{out.square.total, out.Rn, 0, m0 + (*sol)[v]};
      if (!is_closed(out.mult)) throw std::runtime_error("tta: corrected product not closed");
      return out;
    }
  }
  throw std::runtime_error("tta: no closed correction of the concatenation product");
}

// -------------------------------------------------------------- comparison

namespace {

struct CompareTerm {
  int m = 0, i = 0;
  long long ik = 0, kk2 = 0, ssum = 0;
  ExactMatrix mat;  // block contribution with sign +1
};

}  // namespace

TtaCompareResult tta_compare(const TtaResult& r, const TtaResult& rp,
                             const BimoduleMap& f, const BimoduleMap& beta) {
  int n = r.co.n;
  if (rp.co.n != n) throw std::runtime_error("tta_compare: truncations differ");
  FieldSpec fld = r.Rn->field();
  const BimodulePtr &H = r.co.H, &Hp = rp.co.H;
  const BimodulePtr& dgp = rp.co.base.obj.at(0);
  if (f.src != H || f.dst != Hp || f.degree != 0 || !is_closed(f) || !is_bilinear(f))
    throw std::runtime_error("tta_compare: f must be a closed degree-0 map H -> H'");
  if (beta.src != H || beta.dst->dim() != dgp->dim() || beta.degree != 0 || !is_bilinear(beta))
    throw std::runtime_error("tta_compare: beta must be a degree-0 map H -> A");
  ExactMatrix sig = r.co.base.comp.at({-1, 0});
  ExactMatrix sigp = rp.co.base.comp.at({-1, 0});
  if (!(sig == sigp * f.mat + map_differential(beta).mat))
    throw std::runtime_error("tta_compare: sigma != sigma' f + d(beta)");

  // word maps H^{(x)m} -> H'^{(x)i}: choose k = m - i slots for beta, apply
  // f elsewhere, then absorb the algebra outputs into their neighbours
  std::vector<CompareTerm> terms;
  for (int m = 1; m <= n; ++m) {
    const ChainBasis& src = r.co.powers[m];
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
      int k = __builtin_popcount(mask);
      int i = m - k;
      CompareTerm ct;
      ct.m = m;
      ct.i = i;
      ct.ik = (long long)i * k;
      ct.kk2 = (long long)k * (k - 1) / 2;
      for (int j = 0; j < m; ++j)
        if (mask & (1u << j)) ct.ssum += j;

      FreeLayout lay = layout_of(std::vector<BimodulePtr>(m, H));
      ExactMatrix vecs = src.sect;
      std::vector<char> kind(m, 'H');
      for (int j = 0; j < m; ++j) {
        bool is_b = mask & (1u << j);
        SlotOp op;
        op.slot = j;
        op.arity = 1;
        op.out_degs = {is_b ? dgp->deg : Hp->deg};
        op.mat = is_b ? beta.mat : f.mat;
        std::tie(lay, vecs) = apply_slot_op(lay, op, vecs);
        kind[j] = is_b ? 'A' : 'H';
      }
      while (true) {
        int s = -1;
        for (int j = (int)kind.size() - 1; j >= 0; --j)
          if (kind[j] == 'A') {
            s = j;
            break;
          }
        if (s < 0 || (int)kind.size() == 1) break;
        SlotOp op;
        op.arity = 2;
        if (s + 1 < (int)kind.size()) {
          op.slot = s;
          op.mat = (kind[s + 1] == 'H') ? Hp->lact : dgp->lact;
          op.out_degs = {(kind[s + 1] == 'H') ? Hp->deg : dgp->deg};
          kind.erase(kind.begin() + s);
        } else {
          op.slot = s - 1;
          op.mat = (kind[s - 1] == 'H') ? Hp->ract : dgp->ract;
          op.out_degs = {(kind[s - 1] == 'H') ? Hp->deg : dgp->deg};
          kind.erase(kind.begin() + s - 1);
        }
        std::tie(lay, vecs) = apply_slot_op(lay, op, vecs);
      }
      ct.mat = (i >= 1) ? rp.co.powers[i].proj * vecs : vecs;
      terms.push_back(std::move(ct));
    }
  }

  TtaCompareResult out;
  bool found = false;
  for (int b1 = 0; b1 < 2 && !found; ++b1)
    for (int b2 = 0; b2 < 2 && !found; ++b2)
      for (int b3 = 0; b3 < 2 && !found; ++b3) {
        ExactMatrix io(fld, rp.Rn->dim(), r.Rn->dim());
        auto [a0, a1] = rp.conv.span.at(0);
        io.set_block(a0, r.conv.span.at(0).first, ExactMatrix::identity(fld, a1 - a0));
        for (const CompareTerm& ct : terms) {
          long long par = b1 * ct.ik + b2 * ct.kk2 + b3 * ct.ssum;
          ExactMatrix m = (par % 2) ? -ct.mat : ct.mat;
          int r0 = rp.conv.span.at(-ct.i).first;
          int c0 = r.conv.span.at(-ct.m).first;
          for (int rr = 0; rr < m.rows(); ++rr)
            for (int cc = 0; cc < m.cols(); ++cc)
              if (!m.entry_zero(rr, cc)) io.add_at(r0 + rr, c0 + cc, m.at(rr, cc));
        }
        BimoduleMap cand{r.Rn, rp.Rn, 0, io};
        if (is_closed(cand)) {
          out.iota = cand;
          found = true;
        }
      }
  if (!found)
    throw std::runtime_error("tta_compare: no sign convention closes the comparison map");
  if (!is_bilinear(out.iota))
    throw std::runtime_error("tta_compare: comparison map not bilinear");

  out.unit_intertwined = compose(out.iota, r.unit).mat == rp.unit.mat;
  BimoduleMap ii = tensor_map(r.square, rp.square, {out.iota, out.iota});
  BimoduleMap gap = sub(compose(out.iota, r.mult), compose(rp.mult, ii));
  out.mult_homotopy = nullhomotopy(gap);
  return out;
}

}  // namespace pnv

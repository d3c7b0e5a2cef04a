#include "pnv/twisted.hpp"

#include "pnv/hom.hpp"
#include "pnv/linsys.hpp"

#include <stdexcept>
#include <string>

namespace pnv {

namespace {

std::string idx2(int i, int j) {
  return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

// [[m00, m01], [m10, m11]] with row blocks r0, r1 and column blocks c0, c1;
// null blocks are zero.
ExactMatrix block2(FieldSpec f, int r0, int r1, int c0, int c1,
                   const ExactMatrix* m00, const ExactMatrix* m01,
                   const ExactMatrix* m10, const ExactMatrix* m11) {
  ExactMatrix out(f, r0 + r1, c0 + c1);
  if (m00) out.set_block(0, 0, *m00);
  if (m01) out.set_block(0, c0, *m01);
  if (m10) out.set_block(r0, 0, *m10);
  if (m11) out.set_block(r0, c0, *m11);
  return out;
}

}  // namespace

void validate(const TwistedComplex& t) {
  if (t.obj.empty()) throw std::runtime_error("twisted: no objects");
  const BimodulePtr& first = t.obj.begin()->second;
  for (const auto& [i, m] : t.obj) {
    if (!m) throw std::runtime_error("twisted: null object at " + std::to_string(i));
    if (!same_algebra(m->left, first->left) || !same_algebra(m->right, first->right))
      throw std::runtime_error("twisted: objects over different algebra pairs");
  }
  for (const auto& [ij, mat] : t.comp) {
    auto [i, j] = ij;
    if (i >= j) throw std::runtime_error("twisted: component " + idx2(i, j) + " not one-sided");
    auto si = t.obj.find(i), sj = t.obj.find(j);
    if (si == t.obj.end() || sj == t.obj.end())
      throw std::runtime_error("twisted: component " + idx2(i, j) + " between missing objects");
    if (mat.rows() != sj->second->dim() || mat.cols() != si->second->dim())
      throw std::runtime_error("twisted: component " + idx2(i, j) + " has wrong shape");
    BimoduleMap f{si->second, sj->second, 1, mat};
    validate_map_degrees(f);
    if (!is_bilinear(f))
      throw std::runtime_error("twisted: component " + idx2(i, j) + " not bilinear");
  }
  // Maurer-Cartan:  d(alpha_{ik}) + sum_j alpha_{jk} alpha_{ij} = 0.
  FieldSpec f = first->field();
  for (auto it = t.obj.begin(); it != t.obj.end(); ++it)
    for (auto jt = std::next(it); jt != t.obj.end(); ++jt) {
      int i = it->first, k = jt->first;
      ExactMatrix acc(f, jt->second->dim(), it->second->dim());
      if (auto c = t.comp.find({i, k}); c != t.comp.end())
        acc = map_differential(BimoduleMap{it->second, jt->second, 1, c->second}).mat;
      for (auto mt = std::next(it); mt != jt; ++mt) {
        int j = mt->first;
        auto lo = t.comp.find({i, j});
        auto hi = t.comp.find({j, k});
        if (lo != t.comp.end() && hi != t.comp.end()) acc = acc + hi->second * lo->second;
      }
      if (!acc.is_zero())
        throw std::runtime_error("twisted: Maurer-Cartan fails at " + idx2(i, k));
    }
}

Convolution convolve(const TwistedComplex& t) {
  validate(t);
  Convolution c;
  c.tw = t;
  std::vector<BimodulePtr> parts;
  int off = 0;
  for (const auto& [i, m] : t.obj) {
    c.span[i] = {off, off + m->dim()};
    off += m->dim();
    parts.push_back(m);
  }
  if (parts.size() == 1) {
    c.total = parts[0];
    return c;
  }
  SumTriple sum = direct_sum(parts);
  DgBimodule tot = *sum.total;
  for (const auto& [ij, mat] : t.comp) {
    auto [ri, ri_end] = c.span[ij.first];
    auto [rj, rj_end] = c.span[ij.second];
    (void)ri_end;
    (void)rj_end;
    for (int r = 0; r < mat.rows(); ++r)
      for (int cc = 0; cc < mat.cols(); ++cc)
        if (!mat.entry_zero(r, cc)) tot.diff.add_at(rj + r, ri + cc, mat.at(r, cc));
  }
  c.total = make_bimodule(std::move(tot));
  return c;
}

TwistedComplex interval(const TwistedComplex& t, int lo, int hi) {
  TwistedComplex r;
  for (const auto& [i, m] : t.obj)
    if (i >= lo && i <= hi) r.obj.emplace(i, m);
  for (const auto& [ij, mat] : t.comp)
    if (ij.first >= lo && ij.second <= hi) r.comp.emplace(ij, mat);
  return r;
}

ExactMatrix block_proj(const Convolution& c, int lo, int hi) {
  int total = c.total->dim();
  std::vector<int> rows;
  for (const auto& [i, sp] : c.span)
    if (i >= lo && i <= hi)
      for (int r = sp.first; r < sp.second; ++r) rows.push_back(r);
  return ExactMatrix::identity(c.total->field(), total).select_rows(rows);
}

ExactMatrix block_incl(const Convolution& c, int lo, int hi) {
  return block_proj(c, lo, hi).transpose();
}

ExactMatrix component_of(const Convolution& cx, const Convolution& cy,
                         const BimoduleMap& f, int i, int j) {
  auto [ci, ci_end] = cx.span.at(i);
  auto [rj, rj_end] = cy.span.at(j);
  return f.mat.block(rj, ci, rj_end - rj, ci_end - ci);
}

bool is_one_sided(const Convolution& cx, const Convolution& cy,
                  const BimoduleMap& f) {
  for (const auto& [i, spx] : cx.span)
    for (const auto& [j, spy] : cy.span) {
      if (j >= i) continue;
      if (!f.mat.block(spy.first, spx.first, spy.second - spy.first,
                       spx.second - spx.first)
               .is_zero())
        return false;
    }
  return true;
}

// ------------------------------------------------------------------ replace

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::runtime_error(std::string("replace: ") + what);
}

}  // namespace

ReplaceResult replace(const ReplaceInput& in) {
  const BimodulePtr &Q = in.Q, &R = in.R, &P = in.P;
  require(Q && R && P, "missing module");
  require(same_algebra(Q->left, R->left) && same_algebra(Q->right, R->right) &&
              same_algebra(Q->left, P->left) && same_algebra(Q->right, P->right),
          "modules over different algebra pairs");
  require(R->diff.is_zero(), "R must carry the zero differential");
  FieldSpec f = Q->field();
  int dq = Q->dim(), dr = R->dim(), dp = P->dim();
  require(in.eta.rows() == dq && in.eta.cols() == dr, "eta has wrong shape");
  require(in.zeta.rows() == dr && in.zeta.cols() == dq, "zeta has wrong shape");
  require(in.delta.rows() == dr && in.delta.cols() == dr, "delta has wrong shape");

  // the homotopy equivalence package; the contraction data is normalised to
  //   d(theta_q) = id - alpha beta,  d(theta_p) = beta alpha - id,
  //   d(phi) = beta theta_q + theta_p beta,
  // accepting either global sign of each
  require(in.alpha.degree == 0 && in.beta.degree == 0, "alpha, beta must have degree 0");
  require(is_closed(in.alpha) && is_bilinear(in.alpha), "alpha not a closed bilinear map");
  require(is_closed(in.beta) && is_bilinear(in.beta), "beta not a closed bilinear map");
  BimoduleMap ab = compose(in.alpha, in.beta);  // Q -> Q
  BimoduleMap ba = compose(in.beta, in.alpha);  // P -> P
  BimoduleMap theta_q = in.theta_q, theta_p = in.theta_p, phi = in.phi;
  ExactMatrix want_tq = sub(identity_map(Q), ab).mat;
  if (!(map_differential(theta_q).mat == want_tq)) {
    theta_q.mat = -theta_q.mat;
    require(map_differential(theta_q).mat == want_tq, "d(theta_q) != +-(id - alpha beta)");
  }
  ExactMatrix want_tp = sub(ba, identity_map(P)).mat;
  if (!(map_differential(theta_p).mat == want_tp)) {
    theta_p.mat = -theta_p.mat;
    require(map_differential(theta_p).mat == want_tp, "d(theta_p) != +-(beta alpha - id)");
  }
  ExactMatrix want_phi = add(compose(in.beta, theta_q), compose(theta_p, in.beta)).mat;
  if (!(map_differential(phi).mat == want_phi)) {
    phi.mat = -phi.mat;
    require(map_differential(phi).mat == want_phi,
            "d(phi) != +-(beta theta_q + theta_p beta)");
  }

  // original and replaced complexes; make_bimodule certifies d^2 = 0 and
  // Leibniz, which encodes the compatibility relations between the blocks
  ReplaceResult out;
  {
    SumTriple s = direct_sum({Q, R});
    DgBimodule e = *s.total;
    e.diff = block2(f, dq, dr, dq, dr, &Q->diff, &in.eta, &in.zeta, &in.delta);
    out.original = make_bimodule(std::move(e));
  }
  ExactMatrix beta_eta = in.beta.mat * in.eta;            // R -> P
  ExactMatrix zeta_alpha = in.zeta * in.alpha.mat;        // P -> R
  ExactMatrix delta_rep = in.delta - in.zeta * (theta_q.mat * in.eta);
  {
    SumTriple s = direct_sum({P, R});
    DgBimodule e = *s.total;
    e.diff = block2(f, dp, dr, dp, dr, &P->diff, &beta_eta, &zeta_alpha, &delta_rep);
    out.replaced = make_bimodule(std::move(e));
  }

  ExactMatrix zt = -(in.zeta * theta_q.mat);              // Q -> R, degree 0
  ExactMatrix te = -(theta_q.mat * in.eta);               // R -> Q, degree -1+1 = 0
  ExactMatrix idr = ExactMatrix::identity(f, dr);
  out.forward = BimoduleMap{out.original, out.replaced, 0,
                            block2(f, dp, dr, dq, dr, &in.beta.mat, nullptr, &zt, &idr)};
  out.backward = BimoduleMap{out.replaced, out.original, 0,
                             block2(f, dq, dr, dp, dr, &in.alpha.mat, &te, nullptr, &idr)};
  require(is_closed(out.forward) && is_bilinear(out.forward), "forward map not closed/bilinear");
  require(is_closed(out.backward) && is_bilinear(out.backward), "backward map not closed/bilinear");

  // d(h_orig) = id - backward forward, with h_orig = [[theta_q, 0], [0, 0]]
  BimoduleMap want_orig = sub(identity_map(out.original), compose(out.backward, out.forward));
  out.h_orig = BimoduleMap{out.original, out.original, -1,
                           block2(f, dq, dr, dq, dr, &theta_q.mat, nullptr, nullptr, nullptr)};
  if (!(map_differential(out.h_orig).mat == want_orig.mat)) {
    out.h_orig.mat = -out.h_orig.mat;
    if (!(map_differential(out.h_orig).mat == want_orig.mat)) {
      auto h = nullhomotopy(want_orig);
      require(h.has_value(), "no homotopy id ~ backward forward");
      out.h_orig = *h;
    }
  }

  // d(h_rep) = forward backward - id.  The proof's composite homotopy:
  //   [[theta_p, phi eta], [-zeta psi, -zeta w eta]]
  // with psi = alpha phi alpha + theta_q^2 alpha + alpha theta_p^2
  //            + theta_q alpha theta_p
  // and w a degree -3 self-map of Q whose differential absorbs the
  // remaining (R, R) corner; signs are fixed numerically.
  BimoduleMap want_rep = sub(compose(out.forward, out.backward), identity_map(out.replaced));
  ExactMatrix tq2 = theta_q.mat * theta_q.mat;
  ExactMatrix psi = in.alpha.mat * (phi.mat * in.alpha.mat) +
                    tq2 * in.alpha.mat +
                    in.alpha.mat * (theta_p.mat * theta_p.mat) +
                    theta_q.mat * (in.alpha.mat * theta_p.mat);
  ExactMatrix w1 = in.alpha.mat * (phi.mat * theta_q.mat) +
                   theta_q.mat * (in.alpha.mat * phi.mat) +
                   in.alpha.mat * (theta_p.mat * phi.mat) +
                   tq2 * theta_q.mat;
  ExactMatrix w2 = w1 - tq2 * theta_q.mat - tq2 * theta_q.mat;  // theta_q^3 flipped
  bool done = false;
  for (const ExactMatrix* w : {&w1, &w2}) {
    for (int s1 : {-1, 1})
      for (int s2 : {-1, 1}) {
        Scalar c1(f, s1), c2(f, s2);
        ExactMatrix pe = (phi.mat * in.eta).scaled(c1);
        ExactMatrix zp = (in.zeta * psi).scaled(Scalar(f, -s1));
        ExactMatrix zw = (in.zeta * (*w * in.eta)).scaled(c2);
        BimoduleMap cand{out.replaced, out.replaced, -1,
                         block2(f, dp, dr, dp, dr, &theta_p.mat, &pe, &zp, &zw)};
        if (map_differential(cand).mat == want_rep.mat) {
          out.h_rep = cand;
          done = true;
        }
        if (done) break;
      }
    if (done) break;
  }
  if (!done) {
    auto h = nullhomotopy(want_rep);
    require(h.has_value(), "no homotopy forward backward ~ id");
    out.h_rep = *h;
  }
  return out;
}

// ----------------------------------------------------------- one-sidedness

OneSidedResult make_one_sided(const Convolution& cx, const Convolution& cy,
                              const BimoduleMap& f) {
  if (f.src != cx.total || f.dst != cy.total)
    throw std::runtime_error("make_one_sided: map does not connect the convolutions");
  if (f.degree != 0 || !is_closed(f))
    throw std::runtime_error("make_one_sided: map must be closed of degree 0");
  FieldSpec fld = f.src->field();
  int maxx = cx.span.rbegin()->first;
  int maxy = cy.span.rbegin()->first;
  int miny = cy.span.begin()->first;

  OneSidedResult res{f, zero_map(cx.total, cy.total, -1)};
  for (int m = miny; m <= maxy; ++m) {
    if (!cy.span.count(m) || m + 1 > maxx) continue;
    ExactMatrix up_in = block_incl(cx, m + 1, maxx);
    ExactMatrix low_pr = block_proj(cy, miny, m);
    ExactMatrix off = low_pr * (res.map.mat * up_in);
    if (off.is_zero()) continue;

    Convolution sx = convolve(interval(cx.tw, m + 1, maxx));
    Convolution sy = convolve(interval(cy.tw, m, maxy));
    ExactMatrix up_pr = block_proj(cx, m + 1, maxx);
    ExactMatrix tail_in = block_incl(cy, m, maxy);
    ExactMatrix a1 = low_pr * (cy.total->diff * tail_in);
    ExactMatrix a2 = low_pr * tail_in;
    ExactMatrix b2 = sx.total->diff;

    LinearSystem sys(fld);
    int v = sys.add_map_var(sx.total, sy.total, -1);
    add_bilinearity_constraints(sys, v, sx.total, sy.total, -1);
    sys.begin_equation(low_pr.rows(), sx.total->dim());
    sys.add_term(v, &a1, nullptr);
    sys.add_term(v, &a2, &b2);
    sys.add_const(off);
    sys.end_equation();
    auto sol = sys.solve_system();
    if (!sol)
      throw std::runtime_error("make_one_sided: no witness at index " + std::to_string(m));

    ExactMatrix hfull = tail_in * ((*sol)[v] * up_pr);
    BimoduleMap h{cx.total, cy.total, -1, hfull};
    res.map = add(res.map, map_differential(h));
    res.homotopy = add(res.homotopy, h);
  }
  if (!is_one_sided(cx, cy, res.map))
    throw std::runtime_error("make_one_sided: sweep left backward components");
  return res;
}

// ------------------------------------------------------ cyclic coextensions

CoextensionMaps coextension_maps(const CyclicCoextension& c) {
  if (!c.base.obj.count(0)) throw std::runtime_error("coextension: no index-0 block");
  int n = c.n;
  CoextensionMaps out;
  out.Q.resize(n + 1);
  out.Qc.resize(n + 1);
  out.iota.resize(n + 1);
  out.mu.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    out.Qc[i] = convolve(interval(c.base, -i, 0));
    out.Q[i] = out.Qc[i].total;
  }
  for (int i = 1; i <= n; ++i) {
    out.iota[i] = BimoduleMap{out.Q[i - 1], out.Q[i], 0, block_incl(out.Qc[i], -(i - 1), 0)};
    if (!is_closed(out.iota[i]) || !is_bilinear(out.iota[i]))
      throw std::runtime_error("coextension: iota_" + std::to_string(i) + " defective");
    if ((int)c.powers.size() <= i || !c.powers[i].total)
      throw std::runtime_error("coextension: missing power chain " + std::to_string(i));
    const BimodulePtr& pw = c.powers[i].total;
    if (pw != c.base.obj.at(-i))
      throw std::runtime_error("coextension: block -" + std::to_string(i) +
                               " is not the stated tensor power");
    out.mu[i] = BimoduleMap{out.Q[i], pw, 0, block_proj(out.Qc[i], -i, -i)};
    if (!is_closed(out.mu[i]) || !is_bilinear(out.mu[i]))
      throw std::runtime_error("coextension: mu_" + std::to_string(i) + " defective");
    if (!compose(out.mu[i], out.iota[i]).mat.is_zero())
      throw std::runtime_error("coextension: mu_i iota_i != 0");
  }
  out.iota_full = BimoduleMap{out.Q[0], out.Q[n], 0, block_incl(out.Qc[n], 0, 0)};
  out.J = convolve(interval(c.base, -n, -1)).total;
  out.kappa = BimoduleMap{out.Q[n], out.J, 0, block_proj(out.Qc[n], -n, -1)};
  if (!is_closed(out.iota_full) || !is_closed(out.kappa))
    throw std::runtime_error("coextension: iota/kappa not closed");
  if (!compose(out.kappa, out.iota_full).mat.is_zero())
    throw std::runtime_error("coextension: kappa iota != 0");

  // connecting map: the components of the convolution differential into the
  // index-0 block, read as a closed degree-0 map J[-1] -> A
  auto [a0, a1] = out.Qc[n].span.at(0);
  ExactMatrix lam = out.Q[n]->diff.block(a0, 0, a1 - a0, a0);
  out.lambda = BimoduleMap{shift(out.J, -1), out.Q[0], 0, lam};
  if (!is_closed(out.lambda) || !is_bilinear(out.lambda))
    throw std::runtime_error("coextension: lambda not closed/bilinear");
  return out;
}

}  // namespace pnv

#include "pnv/pnfun.hpp"

#include "pnfun_util.hpp"
#include "pnv/linsys.hpp"

#include <random>
#include <stdexcept>
#include <utility>

namespace pnv::detail {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::runtime_error(msg);
}

bool struct_equal(const DgBimodule& a, const DgBimodule& b) {
  return a.left == b.left && a.right == b.right && a.deg == b.deg &&
         a.diff == b.diff && a.lact == b.lact && a.ract == b.ract;
}

BimoduleMap rebase(const BimoduleMap& f, const BimodulePtr& src,
                   const BimodulePtr& dst) {
  require(struct_equal(*f.src, *src) && struct_equal(*f.dst, *dst),
          "rebase: endpoints are not structurally equal");
  return BimoduleMap{src, dst, f.degree, f.mat};
}

BimoduleMap as_degree0(const BimoduleMap& f) {
  if (f.degree == 0) return f;
  return BimoduleMap{f.src, shift(f.dst, f.degree), 0, f.mat};
}

SlotOp op_map(ChainCache& cc, int slot, const std::vector<BimodulePtr>& in_f,
              const std::vector<BimodulePtr>& out_f, const BimoduleMap& g) {
  const ChainBasis& ic = cc.get(in_f);
  const ChainBasis& oc = cc.get(out_f);
  require(struct_equal(*g.src, *ic.total) && struct_equal(*g.dst, *oc.total),
          "op_map: endpoints do not match the slot chains");
  SlotOp op;
  op.slot = slot;
  op.arity = (int)in_f.size();
  op.out_degs = layout_of(out_f).degs;
  op.mat = oc.sect * g.mat * ic.proj;
  op.koszul_degree = g.degree;
  return op;
}

SlotOp op_insert(ChainCache& cc, int slot, const std::vector<BimodulePtr>& out_f,
                 const BimoduleMap& u) {
  const ChainBasis& oc = cc.get(out_f);
  require(struct_equal(*u.dst, *oc.total) && u.degree == 0,
          "op_insert: not a degree-0 map onto the slot chain");
  ExactMatrix col = u.mat.block(0, u.src->left->unit, u.mat.rows(), 1);
  SlotOp op;
  op.slot = slot;
  op.arity = 0;
  op.out_degs = layout_of(out_f).degs;
  op.mat = oc.sect * col;
  op.koszul_degree = 0;
  return op;
}

SlotOp op_eval(ChainCache& cc, int first_slot, const BimodulePtr& p0,
               const BimodulePtr& p1, const BimoduleMap& eval,
               const BimodulePtr& nb, bool nb_left) {
  const ChainBasis& pc = cc.get({p0, p1});
  require(struct_equal(*eval.src, *pc.total) && eval.degree == 0,
          "op_eval: not a degree-0 map off the pair chain");
  ExactMatrix evalfree = eval.mat * pc.proj;
  const FieldSpec f = evalfree.field();
  const int dA = eval.dst->dim();
  const int d0 = p0->dim(), d1 = p1->dim(), dn = nb->dim();
  SlotOp op;
  op.slot = first_slot;
  op.arity = 3;
  op.out_degs = {nb->deg};
  op.koszul_degree = 0;
  ExactMatrix m(f, dn, nb_left ? dn * d0 * d1 : d0 * d1 * dn);
  for (int b = 0; b < dA; ++b)
    for (int phi = 0; phi < d0; ++phi)
      for (int y = 0; y < d1; ++y) {
        Scalar e = evalfree.at(b, phi * d1 + y);
        if (e.is_zero()) continue;
        for (int r = 0; r < dn; ++r)
          for (int x = 0; x < dn; ++x) {
            Scalar c = nb_left ? nb->ract.at(r, x * dA + b)
                               : nb->lact.at(r, b * dn + x);
            if (c.is_zero()) continue;
            int col = nb_left ? (x * d0 + phi) * d1 + y : (phi * d1 + y) * dn + x;
            m.add_at(r, col, c * e);
          }
      }
  op.mat = m;
  return op;
}

BimoduleMap step(ChainCache& cc, const std::vector<BimodulePtr>& src_f,
                 const std::vector<BimodulePtr>& dst_f, const SlotOp& op,
                 int degree) {
  return induce_ops(cc.get(src_f), cc.get(dst_f), {op}, degree);
}

MapFamily closed_bilinear_maps(const BimodulePtr& src, const BimodulePtr& dst,
                               int degree) {
  LinearSystem sys(src->field());
  int v = sys.add_map_var(src, dst, degree);
  add_bilinearity_constraints(sys, v, src, dst, degree);
  add_closedness_constraint(sys, v, src, dst, degree);
  return var_family(sys.solution_space(), v);
}

MapFamily var_family(const LinearSystem::AffineSpace& sp, int var) {
  MapFamily fam;
  fam.solvable = sp.solvable;
  if (!sp.solvable) return fam;
  fam.particular = sp.particular[var];
  for (const auto& b : sp.basis)
    if (!b[var].is_zero()) fam.basis.push_back(b[var]);
  return fam;
}

const char* to_string(QisoOutcome o) {
  switch (o) {
    case QisoOutcome::Found: return "found";
    case QisoOutcome::DimsMismatch: return "cohomology dimensions differ";
    case QisoOutcome::SpaceEmpty: return "no map satisfies the constraints";
    case QisoOutcome::NoneExhaustive: return "no quasi-iso in the family (exhaustive)";
    case QisoOutcome::Exhausted: return "search exhausted";
  }
  return "?";
}

QisoResult qiso_in_family(const BimodulePtr& src, const BimodulePtr& dst,
                          const MapFamily& fam, const IsoSearchPolicy& pol) {
  QisoResult res;
  Cohomology hs = cohomology(src), hd = cohomology(dst);
  if (dims_by_degree(*hs.H) != dims_by_degree(*hd.H)) {
    res.outcome = QisoOutcome::DimsMismatch;
    return res;
  }
  if (!fam.solvable) {
    res.outcome = QisoOutcome::SpaceEmpty;
    return res;
  }
  const int hdim = hs.H->dim();
  auto good = [&](const ExactMatrix& m) {
    return rank(hd.proj * m * hs.incl) == hdim;
  };
  auto found = [&](const ExactMatrix& m) {
    res.outcome = QisoOutcome::Found;
    res.map = BimoduleMap{src, dst, 0, m};
    return res;
  };
  if (good(fam.particular)) return found(fam.particular);
  ExactMatrix sum = fam.particular;
  for (const auto& b : fam.basis) {
    ExactMatrix m = fam.particular + b;
    if (good(m)) return found(m);
    sum = sum + b;
  }
  if (!fam.basis.empty() && good(sum)) return found(sum);
  const int k = (int)fam.basis.size();
  if (k == 0) {
    res.outcome = QisoOutcome::NoneExhaustive;
    return res;
  }
  const FieldSpec f = src->field();
  bool small = f.ch != 0;
  long long space = 1;
  for (int i = 0; i < k && small; ++i) {
    space *= (long long)f.ch;
    if (space > pol.exhaustive_bound) small = false;
  }
  if (small) {
    std::vector<long long> cs(k, 0);
    while (true) {
      int pos = 0;
      while (pos < k) {
        if (++cs[pos] < (long long)f.ch) break;
        cs[pos] = 0;
        ++pos;
      }
      if (pos == k) break;
      ExactMatrix m = fam.particular;
      for (int i = 0; i < k; ++i)
        if (cs[i]) m = m + fam.basis[i].scaled(Scalar(f, cs[i]));
      if (good(m)) return found(m);
    }
    res.outcome = QisoOutcome::NoneExhaustive;
    return res;
  }
  std::mt19937 rng(pol.seed);
  for (int t = 0; t < pol.max_random; ++t) {
    ExactMatrix m = fam.particular;
    for (int i = 0; i < k; ++i) {
      long long c = f.ch ? (long long)(rng() % f.ch) : (long long)(rng() % 5) - 2;
      if (c) m = m + fam.basis[i].scaled(Scalar(f, c));
    }
    if (good(m)) return found(m);
  }
  res.outcome = QisoOutcome::Exhausted;
  return res;
}

QisoResult qiso_search(const BimodulePtr& src, const BimodulePtr& dst,
                       int degree, const IsoSearchPolicy& pol) {
  BimodulePtr d2 = degree == 0 ? dst : shift(dst, degree);
  if (cohomology_dims(*src) != cohomology_dims(*d2)) {
    QisoResult res;
    res.outcome = QisoOutcome::DimsMismatch;
    return res;
  }
  MapFamily fam = closed_bilinear_maps(src, d2, 0);
  QisoResult res = qiso_in_family(src, d2, fam, pol);
  if (res.outcome == QisoOutcome::Found && degree != 0)
    res.map = BimoduleMap{src, dst, degree, res.map->mat};
  return res;
}

void put_dims(ConditionReport& rep, const std::string& key, const DgBimodule& m) {
  rep.tables[key] = cohomology_dims(m);
}

}  // namespace pnv::detail

namespace pnv {

using detail::op_eval;
using detail::op_insert;
using detail::op_map;
using detail::require;
using detail::step;

// ------------------------------------------------------------- functor data

const ChainBasis& FunctorData::chain(const std::vector<BimodulePtr>& factors) const {
  return chains->get(factors);
}

FunctorData make_functor_data(const AlgebraPtr& A, const AlgebraPtr& B,
                              const BimodulePtr& E) {
  require(E->left == A && E->right == B,
          "make_functor_data: E is not an (A, B)-bimodule");
  require(A->field == B->field, "make_functor_data: mixed coefficient fields");
  require(is_projective(E, true),
          "make_functor_data: E is not graded projective over B");
  require(is_projective(E, false),
          "make_functor_data: E is not graded projective over A");

  FunctorData fd;
  fd.A = A;
  fd.B = B;
  fd.diagA = diagonal_bimodule(A);
  fd.diagB = diagonal_bimodule(B);
  fd.E = E;
  fd.dualr = dual_right(E);
  fd.duall = dual_left(E);
  fd.Ev = fd.dualr.cx;
  fd.El = fd.duall.cx;
  fd.chains = std::make_shared<ChainCache>();
  ChainCache& cc = *fd.chains;
  fd.RF = cc.get({E, fd.Ev}).total;
  fd.FR = cc.get({fd.Ev, E}).total;
  fd.LF = cc.get({E, fd.El}).total;
  fd.FL = cc.get({fd.El, E}).total;

  const FieldSpec f = A->field;
  const int dE = E->dim(), dEv = fd.Ev->dim(), dEl = fd.El->dim();
  const int dA = A->dim(), dB = B->dim();

  // evaluation FR -> B: phi_i (x) e_j -> phi_i(e_j)
  const ChainBasis& frch = cc.get({fd.Ev, E});
  ExactMatrix tracefree(f, dB, dEv * dE);
  for (int i = 0; i < dEv; ++i)
    tracefree.set_block(0, i * dE, fd.dualr.basis[i].mat);
  require(tracefree == (tracefree * frch.sect) * frch.proj,
          "make_functor_data: evaluation does not descend");
  fd.trace = BimoduleMap{fd.FR, fd.diagB, 0, tracefree * frch.sect};
  require(is_closed(fd.trace) && is_bilinear(fd.trace),
          "make_functor_data: evaluation is not a chain map");

  // left evaluation LF -> A: e_x (x) xi_j -> (-1)^{|x||xi|} xi_j(e_x)
  const ChainBasis& lfch = cc.get({E, fd.El});
  ExactMatrix tlfree(f, dA, dE * dEl);
  for (int x = 0; x < dE; ++x)
    for (int j = 0; j < dEl; ++j) {
      bool neg = (E->deg[x] * fd.El->deg[j]) % 2 != 0;
      for (int a = 0; a < dA; ++a) {
        Scalar v = fd.duall.basis[j].mat.at(a, x);
        if (!v.is_zero()) tlfree.set(a, x * dEl + j, neg ? -v : v);
      }
    }
  require(tlfree == (tlfree * lfch.sect) * lfch.proj,
          "make_functor_data: left evaluation does not descend");
  fd.trace_l = BimoduleMap{fd.LF, fd.diagA, 0, tlfree * lfch.sect};
  require(is_closed(fd.trace_l) && is_bilinear(fd.trace_l),
          "make_functor_data: left evaluation is not a chain map");

  // coevaluation A -> RF, solved from theta(u) = id_E with
  // theta(e_i (x) phi_j)(e_x) = e_i.phi_j(e_x)
  const ChainBasis& rfch = cc.get({E, fd.Ev});
  ExactMatrix theta(f, dE * dE, dE * dEv);
  for (int b = 0; b < dB; ++b) {
    ExactMatrix Mb(f, dE, dEv);
    for (int x = 0; x < dE; ++x)
      for (int j = 0; j < dEv; ++j) {
        Scalar v = fd.dualr.basis[j].mat.at(b, x);
        if (!v.is_zero()) Mb.set(x, j, v);
      }
    theta = theta + kron(ract_slice(*E, b), Mb);
  }
  ExactMatrix idvec(f, dE * dE, 1);
  for (int r = 0; r < dE; ++r) idvec.set_int(r * dE + r, 0, 1);
  ExactMatrix theta_q = theta * rfch.sect;
  auto q = solve(theta_q, idvec);
  require(q.has_value(), "make_functor_data: no coevaluation against a dual basis");
  ExactMatrix umat(f, fd.RF->dim(), dA);
  for (int a = 0; a < dA; ++a) {
    ExactMatrix col = lact_slice(*fd.RF, a) * *q;
    require(col == ract_slice(*fd.RF, a) * *q,
            "make_functor_data: coevaluation image is not central");
    umat.set_block(0, a, col);
  }
  fd.unit = BimoduleMap{fd.diagA, fd.RF, 0, umat};
  require(is_closed(fd.unit) && is_bilinear(fd.unit),
          "make_functor_data: coevaluation is not a chain map");

  // left coevaluation B -> FL, from theta'(w) = id_E with
  // theta'(xi_j (x) e_i)(e_x) = (-1)^{|x||xi|} xi_j(e_x).e_i
  const ChainBasis& flch = cc.get({fd.El, E});
  ExactMatrix thetap(f, dE * dE, dEl * dE);
  for (int a = 0; a < dA; ++a) {
    ExactMatrix La = lact_slice(*E, a);
    for (int j = 0; j < dEl; ++j)
      for (int x = 0; x < dE; ++x) {
        Scalar v = fd.duall.basis[j].mat.at(a, x);
        if (v.is_zero()) continue;
        if ((E->deg[x] * fd.El->deg[j]) % 2 != 0) v = -v;
        for (int r = 0; r < dE; ++r)
          for (int i = 0; i < dE; ++i) {
            Scalar w = La.at(r, i);
            if (!w.is_zero()) thetap.add_at(r * dE + x, j * dE + i, v * w);
          }
      }
  }
  ExactMatrix thetap_q = thetap * flch.sect;
  auto qp = solve(thetap_q, idvec);
  require(qp.has_value(), "make_functor_data: no left coevaluation against a dual basis");
  ExactMatrix wmat(f, fd.FL->dim(), dB);
  for (int b = 0; b < dB; ++b) {
    ExactMatrix col = lact_slice(*fd.FL, b) * *qp;
    require(col == ract_slice(*fd.FL, b) * *qp,
            "make_functor_data: left coevaluation image is not central");
    wmat.set_block(0, b, col);
  }
  fd.unit_l = BimoduleMap{fd.diagB, fd.FL, 0, wmat};
  require(is_closed(fd.unit_l) && is_bilinear(fd.unit_l),
          "make_functor_data: left coevaluation is not a chain map");

  // the four triangle identities, as exact matrix equalities
  auto tri = [&](const std::vector<BimodulePtr>& one,
                 const std::vector<BimodulePtr>& three, const SlotOp& ins,
                 const SlotOp& ev) {
    BimoduleMap s1 = step(cc, one, three, ins, 0);
    BimoduleMap s2 = step(cc, three, one, ev, 0);
    return compose(s2, s1).mat == ExactMatrix::identity(f, one[0]->dim());
  };
  std::vector<BimodulePtr> cE{E}, cEv{fd.Ev}, cEl{fd.El};
  std::vector<BimodulePtr> cEEv{E, fd.Ev}, cElE{fd.El, E};
  require(tri(cE, {E, fd.Ev, E}, op_insert(cc, 0, cEEv, fd.unit),
              op_eval(cc, 0, fd.Ev, E, fd.trace, E, true)),
          "make_functor_data: triangle identity (F, R) #1 fails");
  require(tri(cEv, {fd.Ev, E, fd.Ev}, op_insert(cc, 1, cEEv, fd.unit),
              op_eval(cc, 0, fd.Ev, E, fd.trace, fd.Ev, false)),
          "make_functor_data: triangle identity (F, R) #2 fails");
  require(tri(cE, {E, fd.El, E}, op_insert(cc, 1, cElE, fd.unit_l),
              op_eval(cc, 0, E, fd.El, fd.trace_l, E, false)),
          "make_functor_data: triangle identity (L, F) #1 fails");
  require(tri(cEl, {fd.El, E, fd.El}, op_insert(cc, 0, cElE, fd.unit_l),
              op_eval(cc, 0, E, fd.El, fd.trace_l, fd.El, true)),
          "make_functor_data: triangle identity (L, F) #2 fails");
  return fd;
}

// ----------------------------------------------------------------- (co)monad

MonadData monad(const FunctorData& fd) {
  MonadData md;
  md.end = hom_right(fd.E, fd.E);
  md.RF = md.end.cx;
  const FieldSpec f = fd.A->field;
  const int dA = fd.A->dim(), dn = md.RF->dim();

  ExactMatrix umat(f, dn, dA);
  for (int a = 0; a < dA; ++a) {
    BimoduleMap la{fd.E, fd.E, fd.A->deg[a], lact_slice(*fd.E, a)};
    auto c = md.end.coords(la);
    require(c.has_value(), "monad: left multiplication is not right linear");
    umat.set_block(0, a, *c);
  }
  md.unit = BimoduleMap{fd.diagA, md.RF, 0, umat};
  require(is_closed(md.unit) && is_bilinear(md.unit),
          "monad: unit is not a chain map");

  ChainCache& cc = *fd.chains;
  const ChainBasis& sq = cc.get({md.RF, md.RF});
  ExactMatrix multfree(f, dn, dn * dn);
  for (int i = 0; i < dn; ++i)
    for (int j = 0; j < dn; ++j) {
      auto c = md.end.coords(compose(md.end.basis[i], md.end.basis[j]));
      require(c.has_value(), "monad: composition leaves the basis span");
      multfree.set_block(0, i * dn + j, *c);
    }
  require(multfree == (multfree * sq.sect) * sq.proj,
          "monad: composition does not descend");
  md.mult = BimoduleMap{sq.total, md.RF, 0, multfree * sq.sect};
  require(is_closed(md.mult) && is_bilinear(md.mult),
          "monad: multiplication is not a chain map");

  // unit laws and associativity, strictly
  std::vector<BimodulePtr> c1{md.RF}, c2{md.RF, md.RF}, c3{md.RF, md.RF, md.RF};
  ExactMatrix idm = ExactMatrix::identity(f, dn);
  BimoduleMap ul = compose(md.mult, step(cc, c1, c2, op_insert(cc, 0, c1, md.unit), 0));
  BimoduleMap ur = compose(md.mult, step(cc, c1, c2, op_insert(cc, 1, c1, md.unit), 0));
  require(ul.mat == idm && ur.mat == idm, "monad: unit laws fail");
  BimoduleMap m_l = compose(md.mult, step(cc, c3, c2, op_map(cc, 0, c2, c1, md.mult), 0));
  BimoduleMap m_r = compose(md.mult, step(cc, c3, c2, op_map(cc, 1, c2, c1, md.mult), 0));
  require(m_l.mat == m_r.mat, "monad: associativity fails");
  return md;
}

ComonadData comonad(const FunctorData& fd) {
  ComonadData cd;
  cd.FR = fd.FR;
  cd.counit = fd.trace;
  ChainCache& cc = *fd.chains;
  std::vector<BimodulePtr> c2{fd.Ev, fd.E}, c4{fd.Ev, fd.E, fd.Ev, fd.E};
  cd.comult = step(cc, c2, c4, op_insert(cc, 1, {fd.E, fd.Ev}, fd.unit), 0);
  require(is_closed(cd.comult) && is_bilinear(cd.comult),
          "comonad: comultiplication is not a chain map");
  // both counit laws, strictly
  BimoduleMap cl = step(cc, c4, c2, op_eval(cc, 0, fd.Ev, fd.E, fd.trace, fd.Ev, false), 0);
  BimoduleMap cr = step(cc, c4, c2, op_eval(cc, 1, fd.Ev, fd.E, fd.trace, fd.E, true), 0);
  ExactMatrix idm = ExactMatrix::identity(fd.A->field, fd.FR->dim());
  require(compose(cl, cd.comult).mat == idm && compose(cr, cd.comult).mat == idm,
          "comonad: counit laws fail");
  return cd;
}

BimoduleMap monad_mult_tensor(const FunctorData& fd) {
  ChainCache& cc = *fd.chains;
  return step(cc, {fd.E, fd.Ev, fd.E, fd.Ev}, {fd.E, fd.Ev},
              op_eval(cc, 0, fd.Ev, fd.E, fd.trace, fd.E, true), 0);
}

// --------------------------------------------------------------- structures

BimoduleMap PnStructure::gamma1() const {
  return BimoduleMap{coext.base.obj.at(-1), gamma.dst, 0,
                     gamma.mat * block_incl(maps->Qc[coext.n], -1, -1)};
}

BimoduleMap PnStructure::gamma_tail(int i) const {
  return BimoduleMap{maps->Q[i], gamma.dst, 0,
                     gamma.mat * block_incl(maps->Qc[coext.n], -i, 0)};
}

BimoduleMap PnStructure::sigma1() const {
  const TwistedComplex& t = coext.base;
  BimodulePtr Hb = t.obj.at(-1), Ab = t.obj.at(0);
  auto it = t.comp.find({-1, 0});
  ExactMatrix m = it != t.comp.end()
                      ? it->second
                      : ExactMatrix(Hb->field(), Ab->dim(), Hb->dim());
  return BimoduleMap{Hb, Ab, 1, m};
}

PnStructure make_pn_structure(const FunctorData& fd, const BimodulePtr& H,
                              const BimodulePtr& Hinv, const BimoduleMap& ev_hh,
                              const BimoduleMap& ev_hih, CyclicCoextension coext,
                              const BimoduleMap& gamma) {
  require(coext.n >= 1, "pn structure: n must be at least 1");
  require(H->left == fd.A && H->right == fd.A,
          "pn structure: H must be an (A, A)-bimodule");
  require(coext.H == H, "pn structure: coextension is not over H");
  validate(coext.base);

  PnStructure S;
  S.H = H;
  S.Hinv = Hinv;
  S.coext = std::move(coext);
  S.maps = std::make_shared<CoextensionMaps>(coextension_maps(S.coext));
  require(detail::struct_equal(*S.maps->Q[0], *fd.diagA),
          "pn structure: coextension block 0 is not the diagonal");

  ChainCache& cc = *fd.chains;
  S.ev_hh = detail::rebase(ev_hh, cc.get({H, Hinv}).total, fd.diagA);
  S.ev_hih = detail::rebase(ev_hih, cc.get({Hinv, H}).total, fd.diagA);
  require(S.ev_hh.degree == 0 && is_closed(S.ev_hh) && is_bilinear(S.ev_hh) &&
              is_quasi_iso(S.ev_hh),
          "pn structure: ev_hh is not a closed degree-0 quasi-iso");
  require(S.ev_hih.degree == 0 && is_closed(S.ev_hih) && is_bilinear(S.ev_hih) &&
              is_quasi_iso(S.ev_hih),
          "pn structure: ev_hih is not a closed degree-0 quasi-iso");

  S.gamma = detail::rebase(gamma, S.maps->Q[S.coext.n], fd.RF);
  require(S.gamma.degree == 0 && is_closed(S.gamma) && is_bilinear(S.gamma),
          "pn structure: gamma is not a closed degree-0 bilinear map");
  require(is_quasi_iso(S.gamma), "pn structure: gamma is not a quasi-iso");

  BimoduleMap gi{fd.diagA, fd.RF, 0, S.gamma.mat * S.maps->iota_full.mat};
  auto h = nullhomotopy(sub(gi, fd.unit));
  require(h.has_value(),
          "pn structure: gamma does not carry the diagonal inclusion to the unit");
  S.unit_htpy = *h;
  return S;
}

// --------------------------------------------------------------------- psi

PsiResult psi(const FunctorData& fd, const PnStructure& S) {
  ChainCache& cc = *fd.chains;
  const BimodulePtr &E = fd.E, &Ev = fd.Ev;
  const FieldSpec f = fd.A->field;

  // W = (FR trace - trace FR) : [Ev, E, Ev, E] -> [Ev, E]
  std::vector<BimodulePtr> c4{Ev, E, Ev, E}, c2{Ev, E};
  BimoduleMap frt = step(cc, c4, c2, op_eval(cc, 0, Ev, E, fd.trace, Ev, false), 0);
  BimoduleMap tfr = step(cc, c4, c2, op_eval(cc, 1, Ev, E, fd.trace, E, true), 0);
  BimoduleMap W = sub(frt, tfr);

  // gamma_1 corrected by the unit homotopy against sigma_1
  BimoduleMap g1 = S.gamma1();
  BimoduleMap G{S.H, fd.RF, 0, g1.mat - S.unit_htpy.mat * S.sigma1().mat};

  PsiResult out;
  std::vector<BimodulePtr> cHR{Ev, S.H, E};
  out.psi = compose(W, step(cc, cHR, c4, op_map(cc, 1, {S.H}, {E, Ev}, G), 0));
  require(is_closed(out.psi) && is_bilinear(out.psi),
          "psi: the twisted formula is not a chain map");

  auto th = nullhomotopy(compose(fd.trace, out.psi));
  require(th.has_value(), "psi: trace o psi is not nullhomotopic");
  out.trace_psi_h = *th;

  // the tail variant on F Q_1 R, and its vanishing on the unit block
  const BimodulePtr& Q1 = S.maps->Q[1];
  std::vector<BimodulePtr> cQ1{Ev, Q1, E};
  BimoduleMap psi_t =
      compose(W, step(cc, cQ1, c4, op_map(cc, 1, {Q1}, {E, Ev}, S.gamma_tail(1)), 0));
  require(is_closed(psi_t), "psi: the tail formula is not closed");
  out.psi_tail = psi_t;
  BimoduleMap i1 = detail::rebase(S.maps->iota[1], fd.diagA, Q1);
  std::vector<BimodulePtr> cAR{Ev, fd.diagA, E};
  BimoduleMap i1w = step(cc, cAR, cQ1, op_map(cc, 1, {fd.diagA}, {Q1}, i1), 0);
  auto ih = nullhomotopy(compose(psi_t, i1w));
  require(ih.has_value(), "psi: psi o (F iota_1 R) is not nullhomotopic");
  out.psi_iota_h = *ih;

  // splitting F H R -> F Q_1 R against F mu_1 R, strict section first
  const BimodulePtr FHR = cc.get(cHR).total;
  const BimodulePtr FQ1R = cc.get(cQ1).total;
  BimoduleMap m1w = step(cc, cQ1, cHR, op_map(cc, 1, {Q1}, {S.H}, S.maps->mu[1]), 0);
  ExactMatrix idh = ExactMatrix::identity(f, FHR->dim());
  std::optional<ExactMatrix> phi;
  {
    LinearSystem sys(f);
    int v = sys.add_map_var(FHR, FQ1R, 0);
    add_bilinearity_constraints(sys, v, FHR, FQ1R, 0);
    add_closedness_constraint(sys, v, FHR, FQ1R, 0);
    sys.begin_equation(FHR->dim(), FHR->dim());
    sys.add_term(v, &m1w.mat, nullptr);
    sys.add_const(-idh);
    sys.end_equation();
    if (auto sol = sys.solve_system()) phi = (*sol)[v];
  }
  if (!phi) {
    LinearSystem sys(f);
    int v = sys.add_map_var(FHR, FQ1R, 0);
    int vh = sys.add_map_var(FHR, FHR, -1);
    add_bilinearity_constraints(sys, v, FHR, FQ1R, 0);
    add_closedness_constraint(sys, v, FHR, FQ1R, 0);
    add_bilinearity_constraints(sys, vh, FHR, FHR, -1);
    sys.begin_equation(FHR->dim(), FHR->dim());
    sys.add_term(v, &m1w.mat, nullptr);
    sys.add_term(vh, &FHR->diff, nullptr, Scalar(f, -1));
    sys.add_term(vh, nullptr, &FHR->diff, Scalar(f, -1));
    sys.add_const(-idh);
    sys.end_equation();
    auto sol = sys.solve_system();
    require(sol.has_value(), "psi: Q_1 is not F-split");
    phi = (*sol)[v];
  }
  out.splitting = BimoduleMap{FHR, FQ1R, 0, *phi};

  auto dh = nullhomotopy(sub(out.psi, compose(psi_t, out.splitting)));
  require(dh.has_value(), "psi: the splitting route is not homotopic to the formula");
  out.split_diff_h = *dh;
  return out;
}

// ----------------------------------------------------------------- P-twists

PTwistResult p_twist(const FunctorData& fd, const PnStructure& S) {
  PTwistResult out;
  out.psi = psi(fd, S);
  ChainCache& cc = *fd.chains;
  const BimodulePtr FHR = cc.get({fd.Ev, S.H, fd.E}).total;

  TwistedComplex t;
  t.obj[-2] = shift(FHR, 2);
  t.obj[-1] = shift(fd.FR, 1);
  t.obj[0] = fd.diagB;
  t.comp[{-2, -1}] = out.psi.psi.mat;
  t.comp[{-1, 0}] = fd.trace.mat;
  BimoduleMap tp{t.obj.at(-2), t.obj.at(0), 2,
                 fd.trace.mat * out.psi.psi.mat};
  auto fill = nullhomotopy(negate(tp));
  require(fill.has_value(), "p_twist: no Maurer-Cartan filler");
  if (!fill->mat.is_zero()) t.comp[{-2, 0}] = fill->mat;
  validate(t);

  out.conv = convolve(t);
  out.total = out.conv.total;
  out.incl_B = BimoduleMap{fd.diagB, out.total, 0, block_incl(out.conv, 0, 0)};
  require(is_closed(out.incl_B) && is_bilinear(out.incl_B),
          "p_twist: inclusion of the identity block is not a chain map");
  return out;
}

PTwistDualResult p_twist_dual(const FunctorData& fd, const PnStructure& S) {
  ChainCache& cc = *fd.chains;
  const FieldSpec f = fd.A->field;
  const BimodulePtr &E = fd.E, &Ev = fd.Ev, &El = fd.El;

  PTwistDualResult out;
  HomComplex Hd = dual_left(S.H);
  out.Hdual = Hd.cx;
  const BimodulePtr& Hp = out.Hdual;
  const int dH = S.H->dim(), dHp = Hp->dim(), dA = fd.A->dim();

  // pairing [H, H'] -> A: h (x) xi -> (-1)^{|h||xi|} xi(h)
  const ChainBasis& hh = cc.get({S.H, Hp});
  ExactMatrix lamfree0(f, dA, dH * dHp);
  for (int h = 0; h < dH; ++h)
    for (int x = 0; x < dHp; ++x) {
      bool neg = (S.H->deg[h] * Hp->deg[x]) % 2 != 0;
      for (int a = 0; a < dA; ++a) {
        Scalar v = Hd.basis[x].mat.at(a, h);
        if (!v.is_zero()) lamfree0.set(a, h * dHp + x, neg ? -v : v);
      }
    }
  require(lamfree0 == (lamfree0 * hh.sect) * hh.proj,
          "p_twist_dual: pairing does not descend");
  BimoduleMap lam{hh.total, fd.diagA, 0, lamfree0 * hh.sect};
  require(is_closed(lam) && is_bilinear(lam),
          "p_twist_dual: pairing is not a chain map");

  // p : [H, E, El] -> A, gamma_1 expanded then contracted against trace
  std::vector<BimodulePtr> c3f{S.H, E, El}, c4f{E, Ev, E, El}, cLF{E, El};
  const ChainBasis& c3 = cc.get(c3f);
  BimoduleMap expand = step(cc, c3f, c4f, op_map(cc, 0, {S.H}, {E, Ev}, S.gamma1()), 0);
  BimoduleMap contract = step(cc, c4f, cLF, op_eval(cc, 0, Ev, E, fd.trace, E, true), 0);
  BimoduleMap p = compose(fd.trace_l, compose(contract, expand));

  // gamma'_1 : LF -> H' from lambda o (id_H (x) X) = p, bilinearity only
  const ChainBasis& lfch = cc.get(cLF);
  const int dEE = E->dim() * El->dim();
  ExactMatrix lamfree = lam.mat * hh.proj;
  ExactMatrix pfree = p.mat * c3.proj;
  LinearSystem sys(f);
  int vg = sys.add_map_var(fd.LF, Hp, 0);
  add_bilinearity_constraints(sys, vg, fd.LF, Hp, 0);
  std::vector<ExactMatrix> lts(dH, ExactMatrix(f, dA, dHp));
  for (int t = 0; t < dH; ++t) {
    for (int a = 0; a < dA; ++a)
      for (int x = 0; x < dHp; ++x) {
        Scalar v = lamfree.at(a, t * dHp + x);
        if (!v.is_zero()) lts[t].set(a, x, v);
      }
    sys.begin_equation(dA, dEE);
    sys.add_term(vg, &lts[t], &lfch.proj);
    sys.add_const(-pfree.block(0, t * dEE, dA, dEE));
    sys.end_equation();
  }
  auto sol = sys.solve_system();
  require(sol.has_value(), "p_twist_dual: the pairing does not characterise a left dual");
  BimoduleMap g1p{fd.LF, Hp, 0, (*sol)[vg]};

  // psi' = F gamma'_1 L o (eta' F L - F L eta') : [El, E] -> [El, H', E]
  std::vector<BimodulePtr> cFL{El, E}, c4d{El, E, El, E}, cOut{El, Hp, E};
  BimoduleMap insR = step(cc, cFL, c4d, op_insert(cc, 2, cFL, fd.unit_l), 0);
  BimoduleMap insL = step(cc, cFL, c4d, op_insert(cc, 0, cFL, fd.unit_l), 0);
  BimoduleMap gmap = step(cc, c4d, cOut, op_map(cc, 1, cLF, {Hp}, g1p), 0);
  out.psi_dual = compose(gmap, sub(insR, insL));
  require(is_bilinear(out.psi_dual), "p_twist_dual: psi' is not bilinear");
  if (!is_closed(out.psi_dual)) {
    auto chi = nullhomotopy(map_differential(out.psi_dual));
    require(chi.has_value(), "p_twist_dual: psi' cannot be corrected to a chain map");
    out.psi_dual = sub(out.psi_dual, *chi);
    require(is_closed(out.psi_dual), "p_twist_dual: correction failed");
  }

  TwistedComplex t;
  t.obj[0] = fd.diagB;
  t.obj[1] = shift(fd.FL, -1);
  t.obj[2] = shift(cc.get(cOut).total, -2);
  t.comp[{0, 1}] = fd.unit_l.mat;
  t.comp[{1, 2}] = out.psi_dual.mat;
  BimoduleMap pu{t.obj.at(0), t.obj.at(2), 2, out.psi_dual.mat * fd.unit_l.mat};
  auto fill = nullhomotopy(negate(pu));
  require(fill.has_value(), "p_twist_dual: no Maurer-Cartan filler");
  if (!fill->mat.is_zero()) t.comp[{0, 2}] = fill->mat;
  validate(t);
  out.conv = convolve(t);
  out.total = out.conv.total;

  // composite P_F (x)_B P'_F and the pinned unit
  PTwistResult P = p_twist(fd, S);
  const ChainBasis& pp = cc.get({P.total, out.total});
  out.composite = pp.total;
  ExactMatrix kap = fd.B->mult *
                    kron(block_proj(P.conv, 0, 0), block_proj(out.conv, 0, 0)) *
                    pp.sect;
  LinearSystem us(f);
  int vu = us.add_map_var(fd.diagB, out.composite, 0);
  add_bilinearity_constraints(us, vu, fd.diagB, out.composite, 0);
  add_closedness_constraint(us, vu, fd.diagB, out.composite, 0);
  us.begin_equation(fd.B->dim(), fd.B->dim());
  us.add_term(vu, &kap, nullptr);
  us.add_const(-ExactMatrix::identity(f, fd.B->dim()));
  us.end_equation();
  auto sp = us.solution_space();
  require(sp.solvable, "p_twist_dual: no unital chain map into the composite");
  detail::MapFamily fam = detail::var_family(sp, vu);
  auto qr = detail::qiso_in_family(fd.diagB, out.composite, fam, IsoSearchPolicy{});
  out.unit = qr.outcome == detail::QisoOutcome::Found
                 ? *qr.map
                 : BimoduleMap{fd.diagB, out.composite, 0, fam.particular};
  return out;
}

// ----------------------------------------------------------------- verdicts

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "Pass";
    case Verdict::Fail: return "Fail";
    case Verdict::Indeterminate: return "Indeterminate";
  }
  return "?";
}

void ConditionReport::fail(const std::string& why) {
  verdict = Verdict::Fail;
  notes.push_back(why);
}

std::optional<BimoduleMap> find_quasi_iso(const BimodulePtr& src,
                                          const BimodulePtr& dst, int degree,
                                          ConditionReport* rep,
                                          const IsoSearchPolicy& pol) {
  detail::QisoResult r = detail::qiso_search(src, dst, degree, pol);
  if (rep) {
    rep->data["qiso"] = detail::to_string(r.outcome);
    rep->tables["H(src)"] = cohomology_dims(*src);
    rep->tables["H(dst)"] =
        degree == 0 ? cohomology_dims(*dst) : cohomology_dims(*shift(dst, degree));
  }
  if (r.outcome == detail::QisoOutcome::Found) return r.map;
  return std::nullopt;
}

}  // namespace pnv

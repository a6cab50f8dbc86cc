#include "corrcolim/transform.hpp"

#include "corrcolim/errors.hpp"

#include <algorithm>

namespace corrcolim {

namespace {

Mat eye(int n) { return Mat::Identity(n, n); }

// f (x) g between canonical tensor products built on the fly.
Mat tmap(const Correspondence& a1, const Correspondence& b1, const Correspondence& a2, const Correspondence& b2,
         const Mat& f, const Mat& g) {
  return tensor_maps(tensor(a1, b1), tensor(a2, b2), f, g);
}

Mat apply_esses(const std::vector<Mat>& s, const Vec& v, int rows, int cols) {
  Mat out = Mat::Zero(rows, cols);
  for (int i = 0; i < v.size(); ++i)
    if (v(i) != cplx(0)) out += v(i) * s[i];
  return out;
}

void check_parallel(const CorrFunctor& a, const CorrFunctor& b) {
  if (a.shape.num_objects() != b.shape.num_objects() || a.shape.num_arrows() != b.shape.num_arrows())
    throw Error(ErrorKind::ShapeError, "functors are defined on different shapes");
}

}  // namespace

CorrIso canonical_vee(const Correspondence& gamma) { return left_unit(gamma).adjoint() * right_unit(gamma); }

Transformation identity_transformation(std::shared_ptr<const CorrFunctor> f) {
  Transformation t{f, f, {}, {}};
  for (const auto& a : f->algebras) t.gammas.push_back(identity_correspondence(a));
  for (int g = 0; g < f->shape.num_arrows(); ++g) {
    const Correspondence& e = f->corr(g);
    t.vees.push_back(right_unit(e).adjoint() * left_unit(e));
  }
  return t;
}

TransformationRoutes transformation_routes(const Transformation& t, int g, int h) {
  const CorrFunctor& f0 = *t.source;
  const CorrFunctor& f1 = *t.target;
  const Shape& s = f0.shape;
  const int x = s.arrows[h].source, y = s.arrows[h].target, z = s.arrows[g].target;
  const int gh = s.compose(g, h);
  const auto &gx = t.gammas[x], &gy = t.gammas[y], &gz = t.gammas[z];
  const auto &e1h = f1.corr(h), &e1g = f1.corr(g), &e0h = f0.corr(h), &e0g = f0.corr(g);

  Tensor t1hg = tensor(e1h, e1g);
  Mat a = t.vees[gh] * tmap(gx, t1hg.corr, gx, f1.corr(gh), eye(gx.dim()), f1.mult(g, h)) * associator(gx, e1h, e1g);

  Tensor gxh = tensor(gx, e1h);
  Tensor e0hy = tensor(e0h, gy);
  Tensor gyg = tensor(gy, e1g);
  Tensor e0gz = tensor(e0g, gz);
  Tensor e0hg = tensor(e0h, e0g);
  Mat b = tmap(e0hg.corr, gz, f0.corr(gh), gz, f0.mult(g, h), eye(gz.dim())) * associator(e0h, e0g, gz).adjoint() *
          tmap(e0h, gyg.corr, e0h, e0gz.corr, eye(e0h.dim()), t.vees[g]) * associator(e0h, gy, e1g) *
          tmap(gxh.corr, e1g, e0hy.corr, e1g, t.vees[h], eye(e1g.dim()));
  return {a, b};
}

Report validate_transformation(const Transformation& t, double tol) {
  Report rep(tol);
  const CorrFunctor& f0 = *t.source;
  const CorrFunctor& f1 = *t.target;
  check_parallel(f0, f1);
  const Shape& s = f0.shape;
  if (static_cast<int>(t.gammas.size()) != s.num_objects() || static_cast<int>(t.vees.size()) != s.num_arrows())
    throw Error(ErrorKind::ShapeError, "transformation needs one gamma per object and one V per arrow");

  bool ends = true;
  std::string w;
  double gd = 0;
  for (int x = 0; x < s.num_objects(); ++x) {
    if (t.gammas[x].source != f0.algebras[x] || t.gammas[x].target() != f1.algebras[x]) {
      ends = false;
      w = s.objects[x];
      continue;
    }
    Report r = validate_correspondence(t.gammas[x], tol);
    if (!r.pass() && w.empty()) w = s.objects[x] + ": " + r.first_failure()->name;
    gd = std::max(gd, r.max_defect());
    ends = ends && r.pass();
  }
  rep.flag("gammas", ends, w, gd);
  if (!ends) return rep;

  double vd = 0, idd = 0;
  std::string vw, iw;
  for (int g = 0; g < s.num_arrows(); ++g) {
    const Arrow& a = s.arrows[g];
    Tensor src = tensor(t.gammas[a.source], f1.corr(g));
    Tensor dst = tensor(f0.corr(g), t.gammas[a.target]);
    Report r = validate_iso(t.vees[g], src.corr, dst.corr, tol);
    double d = std::isfinite(r.max_defect()) && r.pass() ? r.max_defect() : std::max(1.0, r.max_defect());
    if (!r.pass() && vw.empty()) vw = a.name + ": " + r.first_failure()->name;
    vd = std::max(vd, std::isfinite(d) ? d : 1.0);
    if (a.identity && r.find("shape") == nullptr) {
      double e = opnorm(t.vees[g] - canonical_vee(t.gammas[a.source]));
      if (e > idd) idd = e, iw = a.name;
    }
  }
  rep.add("vees", vd, vw);
  rep.add("identity_vees", idd, iw);
  if (vd > tol) return rep;

  double pd = 0;
  std::string pw;
  for (auto [g, h] : composable_pairs(s)) {
    auto r = transformation_routes(t, g, h);
    double d = opnorm(r.route_a - r.route_b);
    if (d > pd || (pw.empty() && d > tol)) pd = d, pw = pair_name(s, g, h);
  }
  rep.add("naturality", pd, pd > tol ? pw : "");

  if (!s.twoarrows.empty()) {
    double td = 0;
    std::string tw;
    for (size_t i = 0; i < s.twoarrows.size(); ++i) {
      const auto& ta = s.twoarrows[i];
      const Arrow& ag = s.arrows[ta.from];
      const auto &gx = t.gammas[ag.source], &gy = t.gammas[ag.target];
      Mat lhs = tmap(f0.corr(ta.from), gy, f0.corr(ta.to), gy, f0.twos[i], eye(gy.dim())) * t.vees[ta.from];
      Mat rhs = t.vees[ta.to] * tmap(gx, f1.corr(ta.from), gx, f1.corr(ta.to), eye(gx.dim()), f1.twos[i]);
      double d = opnorm(lhs - rhs);
      if (d > td) td = d, tw = ta.name;
    }
    rep.add("twoarrow_naturality", td, tw);
  }
  return rep;
}

Report validate_modification(const Modification& m, double tol) {
  Report rep(tol);
  const Transformation& t1 = *m.source;
  const Transformation& t2 = *m.target;
  check_parallel(*t1.source, *t2.source);
  const CorrFunctor& f0 = *t1.source;
  const CorrFunctor& f1 = *t1.target;
  const Shape& s = f0.shape;
  if (static_cast<int>(m.dubs.size()) != s.num_objects()) throw Error(ErrorKind::ShapeError, "need one W per object");
  double wd = 0;
  std::string ww;
  for (int x = 0; x < s.num_objects(); ++x) {
    Report r = validate_iso(m.dubs[x], t1.gammas[x], t2.gammas[x], tol);
    double d = r.find("shape") ? INFINITY : r.max_defect();
    if (d > wd) wd = d, ww = s.objects[x];
  }
  rep.add("dubs", wd, ww);
  if (!std::isfinite(wd)) return rep;
  double ad = 0;
  std::string aw;
  for (int g = 0; g < s.num_arrows(); ++g) {
    const Arrow& a = s.arrows[g];
    if (a.identity) continue;
    const auto &e0 = f0.corr(g), &e1 = f1.corr(g);
    Mat lhs = tmap(e0, t1.gammas[a.target], e0, t2.gammas[a.target], eye(e0.dim()), m.dubs[a.target]) * t1.vees[g];
    Mat rhs = t2.vees[g] * tmap(t1.gammas[a.source], e1, t2.gammas[a.source], e1, m.dubs[a.source], eye(e1.dim()));
    double d = opnorm(lhs - rhs);
    if (d > ad) ad = d, aw = a.name;
  }
  rep.add("arrows", ad, aw);
  return rep;
}

Transformation compose_transformations(const Transformation& t01, const Transformation& t12) {
  const CorrFunctor& mid1 = *t01.target;
  const CorrFunctor& mid2 = *t12.source;
  bool same = t01.target == t12.source;
  if (!same) {
    same = mid1.algebras == mid2.algebras && mid1.shape.num_arrows() == mid2.shape.num_arrows();
    for (int g = 0; same && g < mid1.shape.num_arrows(); ++g) same = mid1.corr(g).module == mid2.corr(g).module;
  }
  if (!same) throw Error(ErrorKind::CompositionError, "transformations are not composable");
  const CorrFunctor& f0 = *t01.source;
  const CorrFunctor& f1 = mid1;
  const CorrFunctor& f2 = *t12.target;
  const Shape& s = f0.shape;
  Transformation out{t01.source, t12.target, {}, {}};
  for (int x = 0; x < s.num_objects(); ++x) out.gammas.push_back(tensor(t01.gammas[x], t12.gammas[x]).corr);
  for (int g = 0; g < s.num_arrows(); ++g) {
    const Arrow& a = s.arrows[g];
    const auto &ax = t01.gammas[a.source], &bx = t12.gammas[a.source];
    const auto &ay = t01.gammas[a.target], &by = t12.gammas[a.target];
    const auto &e0 = f0.corr(g), &e1 = f1.corr(g), &e2 = f2.corr(g);
    Tensor bx_e2 = tensor(bx, e2);
    Tensor e1_by = tensor(e1, by);
    Tensor ax_e1 = tensor(ax, e1);
    Tensor e0_ay = tensor(e0, ay);
    Mat v = associator(e0, ay, by) * tmap(ax_e1.corr, by, e0_ay.corr, by, t01.vees[g], eye(by.dim())) *
            associator(ax, e1, by).adjoint() * tmap(ax, bx_e2.corr, ax, e1_by.corr, eye(ax.dim()), t12.vees[g]) *
            associator(ax, bx, e2);
    out.vees.push_back(v);
  }
  return out;
}

std::optional<Modification> find_modification(std::shared_ptr<const Transformation> t1,
                                              std::shared_ptr<const Transformation> t2, double tol, std::uint64_t seed) {
  const CorrFunctor& f0 = *t1->source;
  const CorrFunctor& f1 = *t1->target;
  check_parallel(f0, *t2->source);
  const Shape& s = f0.shape;
  const int nobj = s.num_objects();
  // unknowns: the blocks of each W_x
  struct Slot {
    int x, j, rows, cols, offset;
  };
  std::vector<Slot> slots;
  int nunk = 0;
  for (int x = 0; x < nobj; ++x) {
    const auto &g1 = t1->gammas[x], &g2 = t2->gammas[x];
    if (g1.source != g2.source || g1.target() != g2.target()) return std::nullopt;
    for (int j = 0; j < g1.target().num_blocks(); ++j) {
      int r = g2.module.mult[j], c = g1.module.mult[j];
      if (r != c) return std::nullopt;
      slots.push_back({x, j, r, c, nunk});
      nunk += r * c;
    }
  }
  auto assemble = [&](const Vec& u) {
    std::vector<Mat> ws;
    for (int x = 0; x < nobj; ++x) {
      std::vector<Mat> blocks;
      for (const auto& sl : slots) {
        if (sl.x != x) continue;
        Mat b(sl.rows, sl.cols);
        for (int r = 0; r < sl.rows; ++r)
          for (int c = 0; c < sl.cols; ++c) b(r, c) = u(sl.offset + r * sl.cols + c);
        blocks.push_back(b);
      }
      ws.push_back(map_full(t1->gammas[x].module, t2->gammas[x].module, blocks));
    }
    return ws;
  };
  // precomputed pieces of each equation
  struct ArrowEq {
    int x, y;
    Mat v1, v2, emb_l, lift_l, emb_r, lift_r;
    int de0, de1;
  };
  std::vector<ArrowEq> eqs;
  for (int g = 0; g < s.num_arrows(); ++g) {
    const Arrow& a = s.arrows[g];
    if (a.identity) continue;
    const auto &e0 = f0.corr(g), &e1 = f1.corr(g);
    Tensor l_src = tensor(e0, t1->gammas[a.target]), l_dst = tensor(e0, t2->gammas[a.target]);
    Tensor r_src = tensor(t1->gammas[a.source], e1), r_dst = tensor(t2->gammas[a.source], e1);
    eqs.push_back({a.source, a.target, t1->vees[g], t2->vees[g], l_dst.embed, l_src.lift, r_dst.embed, r_src.lift,
                   e0.dim(), e1.dim()});
  }
  auto residual = [&](const Vec& u) {
    auto ws = assemble(u);
    std::vector<Mat> parts;
    for (int x = 0; x < nobj; ++x) {
      const auto &g1 = t1->gammas[x], &g2 = t2->gammas[x];
      for (int a = 0; a < g1.source.dim(); ++a) parts.push_back(ws[x] * left_full(g1, a) - left_full(g2, a) * ws[x]);
    }
    for (const auto& e : eqs) {
      Mat lhs = e.emb_l * kron(eye(e.de0), ws[e.y]) * e.lift_l * e.v1;
      Mat rhs = e.v2 * e.emb_r * kron(ws[e.x], eye(e.de1)) * e.lift_r;
      parts.push_back(lhs - rhs);
    }
    int len = 0;
    for (const auto& p : parts) len += static_cast<int>(p.size());
    Vec out(len);
    int k = 0;
    for (const auto& p : parts)
      for (int c = 0; c < p.cols(); ++c)
        for (int r = 0; r < p.rows(); ++r) out(k++) = p(r, c);
    return out;
  };
  Modification m{t1, t2, {}};
  if (nunk == 0) {
    m.dubs = assemble(Vec(0));
  } else {
    Vec r0 = residual(Vec::Zero(nunk));
    Mat sys(r0.size(), nunk);
    for (int i = 0; i < nunk; ++i) sys.col(i) = residual(Vec::Unit(nunk, i));
    Mat ns = null_space(sys);
    if (ns.cols() == 0) return std::nullopt;
    Rng rng(seed);
    Vec u = ns * random_matrix(static_cast<int>(ns.cols()), 1, rng);
    for (const auto& sl : slots) {
      Mat b(sl.rows, sl.cols);
      for (int r = 0; r < sl.rows; ++r)
        for (int c = 0; c < sl.cols; ++c) b(r, c) = u(sl.offset + r * sl.cols + c);
      Mat p = polar_unitary(b);
      for (int r = 0; r < sl.rows; ++r)
        for (int c = 0; c < sl.cols; ++c) u(sl.offset + r * sl.cols + c) = p(r, c);
    }
    m.dubs = assemble(u);
  }
  if (!validate_modification(m, tol).pass()) return std::nullopt;
  return m;
}

Modification horizontal_compose(const Modification& m1, const Modification& m2,
                                std::shared_ptr<const Transformation> src, std::shared_ptr<const Transformation> dst) {
  Modification out{src, dst, {}};
  for (size_t x = 0; x < m1.dubs.size(); ++x) {
    const auto &a1 = m1.source->gammas[x], &b1 = m2.source->gammas[x];
    const auto &a2 = m1.target->gammas[x], &b2 = m2.target->gammas[x];
    out.dubs.push_back(tmap(a1, b1, a2, b2, m1.dubs[x], m2.dubs[x]));
  }
  return out;
}

bool is_constant_target(const Transformation& t, Algebra* d) {
  const CorrFunctor& f = *t.target;
  if (f.algebras.empty()) return false;
  const Algebra& a = f.algebras[0];
  for (const auto& b : f.algebras)
    if (b != a) return false;
  Correspondence id = identity_correspondence(a);
  for (const auto& c : f.corrs) {
    if (c.source != a || !(c.module == id.module)) return false;
    for (int i = 0; i < a.dim(); ++i)
      for (int j = 0; j < a.num_blocks(); ++j)
        if (opnorm(c.left[i][j] - id.left[i][j]) > kDefaultTol) return false;
  }
  if (d) *d = a;
  return true;
}

RepresentationData cone_to_representation(const Transformation& cone) {
  Algebra d;
  if (!is_constant_target(cone, &d)) throw Error(ErrorKind::NotACone, "target functor is not constant");
  const CorrFunctor& f = *cone.source;
  const Shape& s = f.shape;
  RepresentationData r{cone.source, d, cone.gammas, {}};
  for (int g = 0; g < s.num_arrows(); ++g) {
    const Arrow& a = s.arrows[g];
    const auto &gx = cone.gammas[a.source], &gy = cone.gammas[a.target];
    const Correspondence& e = f.corr(g);
    Tensor t = tensor(e, gy);
    Mat m = right_unit(gx) * cone.vees[g].adjoint() * t.embed;
    std::vector<Mat> es;
    for (int k = 0; k < e.dim(); ++k) es.push_back(m.middleCols(k * gy.dim(), gy.dim()));
    r.esses.push_back(es);
  }
  return r;
}

Report validate_representation(const RepresentationData& r, double tol) {
  Report rep(tol);
  const CorrFunctor& f = *r.functor;
  const Shape& s = f.shape;
  double la = 0, ra = 0, dl = 0, ip = 0, unit = 0, mul = 0, two = 0;
  std::string lw, rw, dw, iw, uw, mw, tw, nw;
  bool nondeg = true;
  for (int g = 0; g < s.num_arrows(); ++g) {
    const Arrow& a = s.arrows[g];
    const auto &gx = r.gammas[a.source], &gy = r.gammas[a.target];
    const Correspondence& e = f.corr(g);
    const auto& sg = r.esses[g];
    const int dx = gx.dim(), dy = gy.dim();
    if (a.identity) {
      for (int i = 0; i < e.dim(); ++i) {
        double d = opnorm(sg[i] - left_full(gx, i));
        if (d > unit) unit = d, uw = a.name;
      }
      continue;
    }
    for (int k = 0; k < e.dim(); ++k) {
      double d = right_linearity_defect(gy.module, gx.module, sg[k]);
      if (d > dl) dl = d, dw = a.name;
      for (int i = 0; i < f.algebras[a.source].dim(); ++i) {
        Vec v = left_full(e, i).col(k);
        double dd = opnorm(apply_esses(sg, v, dx, dy) - left_full(gx, i) * sg[k]);
        if (dd > la) la = dd, lw = a.name;
      }
      for (int b = 0; b < f.algebras[a.target].dim(); ++b) {
        Vec v = right_full(e.module, b).col(k);
        double dd = opnorm(apply_esses(sg, v, dx, dy) - sg[k] * left_full(gy, b));
        if (dd > ra) ra = dd, rw = a.name;
      }
      for (int l = 0; l < e.dim(); ++l) {
        Vec in = inner(e.module, Vec::Unit(e.dim(), k), Vec::Unit(e.dim(), l));
        double dd = opnorm(sg[k].adjoint() * sg[l] - left_full(gy, in));
        if (dd > ip) ip = dd, iw = a.name;
      }
    }
    if (dx > 0) {
      Mat all(dx, e.dim() * dy);
      for (int k = 0; k < e.dim(); ++k) all.middleCols(k * dy, dy) = sg[k];
      int rk = e.dim() * dy > 0 ? rank_of(all, tol) : 0;
      if (rk < dx && nondeg) {
        nondeg = false;
        nw = a.name + ": rank " + std::to_string(rk) + " of " + std::to_string(dx);
      }
    }
  }
  for (auto [g, h] : composable_pairs(s)) {
    int gh = s.compose(g, h);
    const int x = s.arrows[h].source, z = s.arrows[g].target;
    const int dx = r.gammas[x].dim(), dz = r.gammas[z].dim();
    Tensor t = tensor(f.corr(h), f.corr(g));
    Mat mu = f.mult(g, h) * t.embed;
    const int dh = f.corr(h).dim(), dg = f.corr(g).dim();
    for (int k = 0; k < dh; ++k)
      for (int l = 0; l < dg; ++l) {
        Mat lhs = r.esses[h][k] * r.esses[g][l];
        Mat rhs = apply_esses(r.esses[gh], mu.col(k * dg + l), dx, dz);
        double d = opnorm(lhs - rhs);
        if (d > mul) mul = d, mw = pair_name(s, g, h);
      }
  }
  for (size_t i = 0; i < s.twoarrows.size(); ++i) {
    const auto& ta = s.twoarrows[i];
    const Arrow& a = s.arrows[ta.from];
    const int dx = r.gammas[a.source].dim(), dy = r.gammas[a.target].dim();
    for (int k = 0; k < f.corr(ta.from).dim(); ++k) {
      double d = opnorm(apply_esses(r.esses[ta.to], f.twos[i].col(k), dx, dy) - r.esses[ta.from][k]);
      if (d > two) two = d, tw = ta.name;
    }
  }
  rep.add("(1a) left", la, lw);
  rep.add("(1a) right", ra, rw);
  rep.add("(1a) D-linear", dl, dw);
  rep.add("(1b) inner", ip, iw);
  rep.flag("(1c) nondegenerate", nondeg, nw);
  rep.add("(2) unit", unit, uw);
  rep.add("(3) multiplicative", mul, mw);
  if (!s.twoarrows.empty()) rep.add("twoarrows", two, tw);
  return rep;
}

Transformation representation_to_cone(const RepresentationData& r, double tol) {
  const CorrFunctor& f = *r.functor;
  const Shape& s = f.shape;
  auto target = std::make_shared<const CorrFunctor>(constant_functor(s, r.d));
  Transformation cone{r.functor, target, r.gammas, {}};
  for (int g = 0; g < s.num_arrows(); ++g) {
    const Arrow& a = s.arrows[g];
    const auto &gx = r.gammas[a.source], &gy = r.gammas[a.target];
    if (a.identity) continue;
    const Correspondence& e = f.corr(g);
    Tensor t = tensor(e, gy);
    const int dx = gx.dim(), dy = gy.dim();
    Mat raw(dx, e.dim() * dy);
    for (int k = 0; k < e.dim(); ++k) raw.middleCols(k * dy, dy) = r.esses[g][k];
    int rk = raw.size() > 0 ? rank_of(raw, tol) : 0;
    if (rk != dx || t.corr.dim() != dx)
      throw Error(ErrorKind::NotSurjective, "arrow " + a.name + ": rank " + std::to_string(rk) + ", dim gamma_x " +
                                                std::to_string(dx) + ", dim E_g (x) gamma_y " +
                                                std::to_string(t.corr.dim()));
  }
  Report pre = validate_representation(r, tol);
  for (const char* name : {"(1a) left", "(1a) right", "(1a) D-linear", "(1b) inner"}) {
    const Check* c = pre.find(name);
    if (!c->pass)
      throw Error(ErrorKind::NotACone, std::string("condition ") + name + " fails at " + c->witness +
                                           " (defect " + std::to_string(c->defect) + ")");
  }
  for (int g = 0; g < s.num_arrows(); ++g) {
    const Arrow& a = s.arrows[g];
    const auto &gx = r.gammas[a.source], &gy = r.gammas[a.target];
    if (a.identity) {
      cone.vees.push_back(canonical_vee(gx));
      continue;
    }
    const Correspondence& e = f.corr(g);
    Tensor t = tensor(e, gy);
    const int dx = gx.dim(), dy = gy.dim();
    Mat raw(dx, e.dim() * dy);
    for (int k = 0; k < e.dim(); ++k) raw.middleCols(k * dy, dy) = r.esses[g][k];
    Mat vstar = right_unit(gx).adjoint() * raw * t.lift;
    cone.vees.push_back(vstar.adjoint());
  }
  return cone;
}

std::vector<Mat> composite_esses(const CorrFunctor& f, int g, int h, const std::vector<Mat>& sg,
                                 const std::vector<Mat>& sh) {
  int gh = f.shape.compose(g, h);
  Tensor t = tensor(f.corr(h), f.corr(g));
  Mat m = f.mult(g, h) * t.embed;
  Mat x = pinv(m);
  const int dg = f.corr(g).dim();
  std::vector<Mat> out;
  const int rows = sh.empty() ? 0 : static_cast<int>(sh[0].rows());
  const int cols = sg.empty() ? 0 : static_cast<int>(sg[0].cols());
  for (int i = 0; i < f.corr(gh).dim(); ++i) {
    Mat s = Mat::Zero(rows, cols);
    for (int p = 0; p < x.rows(); ++p)
      if (std::abs(x(p, i)) > 0) s += x(p, i) * sh[p / dg] * sg[p % dg];
    out.push_back(s);
  }
  return out;
}

}  // namespace corrcolim

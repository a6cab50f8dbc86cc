#include "corrcolim/concrete_eval.hpp"

#include "corrcolim/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace corrcolim {

Algebra eval_direct_sum(const CorrFunctor& f) {
  if (f.shape.kind != ShapeKind::Discrete) throw Error(ErrorKind::NotEvaluable, "direct sum needs a discrete shape");
  return direct_sum(f.algebras, "direct_sum");
}

Mat ConvolutionAlgebra::left(const Vec& x) const {
  Mat m = Mat::Zero(dim, dim);
  for (int i = 0; i < dim; ++i)
    if (x(i) != cplx(0)) m += x(i) * lmul[i];
  return m;
}

ConvolutionAlgebra abstract_algebra(const Algebra& a) {
  ConvolutionAlgebra c;
  c.dim = a.dim();
  for (int i = 0; i < c.dim; ++i) {
    Mat l(c.dim, c.dim);
    for (int j = 0; j < c.dim; ++j) l.col(j) = product_coords(a, i, j);
    c.lmul.push_back(l);
  }
  c.star = Mat::Zero(c.dim, c.dim);
  for (int i = 0; i < c.dim; ++i) {
    auto u = a.unit(i);
    c.star(a.index(u.block, u.s, u.r), i) = 1.0;
  }
  c.unit = to_coords(a, unit_element(a));
  return c;
}

ConvolutionAlgebra convolution_algebra(const CorrFunctor& f, double tol) {
  const Shape& s = f.shape;
  if (s.kind != ShapeKind::Group) throw Error(ErrorKind::NotEvaluable, "section algebras need a group shape");
  const int n = s.num_arrows();
  const int e = s.identity_of[0];
  for (int g = 0; g < n; ++g)
    for (int m : f.corr(g).module.mult)
      if (m == 0) throw Error(ErrorKind::NotSaturated, "fibre " + s.arrows[g].name + " is not full");
  ConvolutionAlgebra c;
  c.fibre_offset.assign(n, 0);
  for (int g = 0; g < n; ++g) {
    c.fibre_offset[g] = c.dim;
    c.dim += f.corr(g).dim();
  }
  c.lmul.assign(c.dim, Mat::Zero(c.dim, c.dim));
  std::vector<Mat> prod(n * n);
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) {
      const int gh = s.compose(g, h);
      Tensor t = tensor(f.corr(h), f.corr(g));
      Mat m = f.mult(g, h) * t.embed;
      prod[g * n + h] = m;
      const int dh = f.corr(h).dim(), dg = f.corr(g).dim();
      for (int k = 0; k < dh; ++k)
        for (int l = 0; l < dg; ++l)
          c.lmul[c.fibre_offset[h] + k].col(c.fibre_offset[g] + l).segment(c.fibre_offset[gh], f.corr(gh).dim()) =
              m.col(k * dg + l);
    }
  c.unit = Vec::Zero(c.dim);
  c.unit.segment(c.fibre_offset[e], f.algebras[0].dim()) = to_coords(f.algebras[0], unit_element(f.algebras[0]));

  // xi^* in E_{g^-1} is determined by xi^* zeta = <xi, zeta> for all zeta in E_g
  c.star = Mat::Zero(c.dim, c.dim);
  const int da = f.algebras[0].dim();
  for (int g = 0; g < n; ++g) {
    int ginv = -1;
    for (int h = 0; h < n; ++h)
      if (s.compose(g, h) == e) ginv = h;
    const Correspondence& eg = f.corr(g);
    const int dg = eg.dim(), di = f.corr(ginv).dim();
    const Mat& m = prod[g * n + ginv];
    Mat sys(da * dg, di);
    for (int l = 0; l < dg; ++l)
      for (int x = 0; x < di; ++x) sys.block(l * da, x, da, 1) = m.col(x * dg + l);
    Mat sp = pinv(sys);
    for (int k = 0; k < dg; ++k) {
      Vec rhs(da * dg);
      for (int l = 0; l < dg; ++l) rhs.segment(l * da, da) = inner(eg.module, Vec::Unit(dg, k), Vec::Unit(dg, l));
      Vec x = sp * rhs;
      c.star_residual = std::max(c.star_residual, (sys * x - rhs).norm());
      c.star.col(c.fibre_offset[g] + k).segment(c.fibre_offset[ginv], di) = x;
    }
  }
  if (c.star_residual > std::max(tol, 1e-8))
    throw Error(ErrorKind::InvalidDiagram, "bundle has no compatible involution (residual " +
                                               std::to_string(c.star_residual) + ")");
  return c;
}

Report validate_convolution(const ConvolutionAlgebra& c, double tol) {
  Report rep(tol);
  double as = 0, st = 0, inv = 0, un = 0;
  for (int i = 0; i < c.dim; ++i) {
    Vec ei = Vec::Unit(c.dim, i);
    inv = std::max(inv, (c.adjoint(c.adjoint(ei)) - ei).norm());
    un = std::max(un, (c.product(c.unit, ei) - ei).norm() + (c.product(ei, c.unit) - ei).norm());
    for (int j = 0; j < c.dim; ++j) {
      Vec ej = Vec::Unit(c.dim, j);
      Vec eij = c.product(ei, ej);
      st = std::max(st, (c.adjoint(eij) - c.product(c.adjoint(ej), c.adjoint(ei))).norm());
      for (int k = 0; k < c.dim; ++k) {
        Vec ek = Vec::Unit(c.dim, k);
        as = std::max(as, (c.product(eij, ek) - c.product(ei, c.product(ej, ek))).norm());
      }
    }
  }
  rep.add("associative", as);
  rep.add("antimultiplicative_star", st);
  rep.add("involutive_star", inv);
  rep.add("unit", un);
  return rep;
}

namespace {

// Groups of eigenvalue indices separated by gaps larger than `gap`.
std::vector<std::vector<int>> clusters(const Eigen::VectorXd& ev, double gap) {
  std::vector<std::vector<int>> out;
  for (int i = 0; i < ev.size(); ++i) {
    if (i == 0 || ev(i) - ev(i - 1) > gap) out.emplace_back();
    out.back().push_back(i);
  }
  return out;
}

struct Summand {
  int d;
  std::vector<Vec> units;  // e_rs at r*d+s
};

}  // namespace

Wedderburn wedderburn_decompose(const ConvolutionAlgebra& c, double tol, std::uint64_t seed) {
  const int n = c.dim;
  if (n == 0) return Wedderburn{Algebra{}, Mat(0, 0), 0.0, 0};
  Vec tr(n);
  for (int m = 0; m < n; ++m) tr(m) = c.lmul[m].trace();
  auto tau = [&](const Vec& x) -> cplx { return (tr.transpose() * x)(0); };

  // trace form <x,y> = tau(x^* y); r turns it into the standard inner product
  Mat g(n, n);
  for (int i = 0; i < n; ++i) {
    Mat li = c.left(c.star.col(i));
    for (int j = 0; j < n; ++j) g(i, j) = tau(li.col(j));
  }
  g = 0.5 * (g + g.adjoint());
  Eigen::LLT<Mat> llt(g);
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::DecompositionFailed, "trace form is not positive definite");
  Mat r = llt.matrixU();
  Mat rinv = r.inverse();

  // center
  Mat sys(n * n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) sys.block(j * n, i, n, 1) = c.lmul[i].col(j) - c.lmul[j].col(i);
  Mat z = null_space(sys, 1e-10);
  const int nz = static_cast<int>(z.cols());
  if (nz == 0) throw Error(ErrorKind::DecompositionFailed, "trivial center");

  const double gap = 1e-6;
  Rng rng(seed);
  for (int attempt = 1; attempt <= 5; ++attempt) {
    Vec zc = z * random_matrix(nz, 1, rng);
    Vec zsa = 0.5 * (zc + c.adjoint(zc));
    Mat lz = r * c.left(zsa) * rinv;
    lz = 0.5 * (lz + lz.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> es(lz);
    double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    auto cl = clusters(es.eigenvalues(), gap * scale);
    if (static_cast<int>(cl.size()) != nz) continue;
    std::vector<Summand> sums;
    bool ok = true;
    for (const auto& idx : cl) {
      int dim = static_cast<int>(idx.size());
      int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(dim))));
      if (d * d != dim) {
        ok = false;
        break;
      }
      Mat v(n, dim);
      for (int t = 0; t < dim; ++t) v.col(t) = es.eigenvectors().col(idx[t]);
      Vec pk = rinv * (v * (v.adjoint() * (r * c.unit)));
      // diagonal matrix units from a random self-adjoint element of the summand
      Vec hr = random_matrix(n, 1, rng);
      Vec h = c.product(pk, c.product(hr, pk));
      h = 0.5 * (h + c.adjoint(h));
      Mat lh = v.adjoint() * (r * c.left(h) * rinv) * v;
      lh = 0.5 * (lh + lh.adjoint());
      Eigen::SelfAdjointEigenSolver<Mat> hs(lh);
      double hscale = std::max(1.0, hs.eigenvalues().cwiseAbs().maxCoeff());
      auto hc = clusters(hs.eigenvalues(), gap * hscale);
      if (static_cast<int>(hc.size()) != d) {
        ok = false;
        break;
      }
      std::vector<Vec> diag;
      for (const auto& hi : hc) {
        if (static_cast<int>(hi.size()) != d) {
          ok = false;
          break;
        }
        Mat u(dim, d);
        for (int t = 0; t < d; ++t) u.col(t) = hs.eigenvectors().col(hi[t]);
        Mat q = v * u;
        diag.push_back(rinv * (q * (q.adjoint() * (r * pk))));
      }
      if (!ok) break;
      Summand sm{d, std::vector<Vec>(d * d)};
      sm.units[0] = diag[0];
      double t11 = tau(diag[0]).real();
      for (int j = 1; j < d; ++j) {
        Vec w;
        double cnorm = 0;
        for (int tries = 0; tries < 4 && cnorm <= 1e-8 * t11; ++tries) {
          Vec x = random_matrix(n, 1, rng);
          w = c.product(diag[0], c.product(x, diag[j]));
          cnorm = tau(c.product(w, c.adjoint(w))).real();
        }
        if (cnorm <= 1e-8 * t11) {
          ok = false;
          break;
        }
        sm.units[j] = w / std::sqrt(cnorm / t11);
      }
      if (!ok) break;
      for (int i = 1; i < d; ++i) sm.units[i * d] = c.adjoint(sm.units[i]);
      for (int i = 1; i < d; ++i)
        for (int j = 1; j < d; ++j) sm.units[i * d + j] = c.product(sm.units[i * d], sm.units[j]);
      sums.push_back(sm);
    }
    if (!ok) continue;
    std::stable_sort(sums.begin(), sums.end(), [](const Summand& a, const Summand& b) { return a.d < b.d; });

    Wedderburn out;
    out.attempts = attempt;
    for (const auto& sm : sums) out.algebra.blocks.push_back(sm.d);
    out.iso = Mat::Zero(out.algebra.dim(), n);
    int row = 0;
    for (const auto& sm : sums) {
      const int d = sm.d;
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          // coefficient of e_ab in e_aa x e_bb, read off as tau(e_ba x e_bb) / tau(e_bb)
          const Vec& eba = sm.units[b * d + a];
          const Vec& ebb = sm.units[b * d + b];
          Mat rm(n, n);
          for (int i = 0; i < n; ++i) rm.col(i) = c.lmul[i] * ebb;
          Eigen::RowVectorXcd func = tr.transpose() * c.left(eba) * rm;
          out.iso.row(row++) = func / tau(ebb);
        }
    }
    double mdef = 0, sdef = 0;
    for (int i = 0; i < n; ++i) {
      Element xi = from_coords(out.algebra, out.iso.col(i));
      Element si = from_coords(out.algebra, out.iso * c.star.col(i));
      sdef = std::max(sdef, operator_norm(out.algebra, add(si, adjoint(xi), -1.0)));
      for (int j = 0; j < n; ++j) {
        Element xj = from_coords(out.algebra, out.iso.col(j));
        Element pij = from_coords(out.algebra, out.iso * c.lmul[i].col(j));
        mdef = std::max(mdef, operator_norm(out.algebra, add(pij, multiply(xi, xj), -1.0)));
      }
    }
    double bij = out.algebra.dim() == n ? (rank_of(out.iso) == n ? 0.0 : 1.0) : 1.0;
    out.iso_defect = std::max({mdef, sdef, bij});
    if (out.iso_defect > tol)
      throw Error(ErrorKind::DecompositionFailed, "isomorphism residual " + std::to_string(out.iso_defect));
    return out;
  }
  throw Error(ErrorKind::DecompositionFailed, "eigenvalue clusters did not separate after 5 attempts");
}

FellEval eval_fell_bundle(const CorrFunctor& f, double tol, std::uint64_t seed) {
  FellEval out;
  out.conv = convolution_algebra(f, tol);
  out.dec = wedderburn_decompose(out.conv, tol, seed);
  return out;
}

ChainEval eval_stabilized_chain(const CorrFunctor& f, double tol) {
  const Shape& s = f.shape;
  if (s.kind != ShapeKind::Chain) throw Error(ErrorKind::NotEvaluable, "not a chain");
  const int n = s.param;
  ChainEval out;
  std::vector<StarHom> phis;
  for (int i = 0; i < n; ++i) {
    auto h = underlying_hom(f.corr(s.generators[i]));
    if (!h) throw Error(ErrorKind::NotEvaluable, "link " + s.arrows[s.generators[i]].name + " does not come from a *-homomorphism");
    phis.push_back(*h);
    out.bratteli.push_back(multiplicity_matrix(*h, tol));
  }
  if (!s.stabilized_from) {
    out.reason = "chain is not marked stabilized; only Bratteli data is available";
    return out;
  }
  for (int i = *s.stabilized_from; i < n; ++i) {
    const StarHom& h = phis[i];
    bool iso = h.source.dim() == h.target.dim() && rank_of(h.map, tol) == h.source.dim() && is_unital(h, tol);
    if (!iso) throw Error(ErrorKind::NotEvaluable, "link " + std::to_string(i) + " is not an isomorphism");
  }
  out.evaluable = true;
  out.algebra = f.algebras[n];
  out.to_limit.assign(n + 1, identity_hom(f.algebras[n]));
  for (int i = n - 1; i >= 0; --i) out.to_limit[i] = compose(out.to_limit[i + 1], phis[i]);
  return out;
}

ConcreteColimit evaluate_colimit(const CorrFunctor& f, double tol, std::uint64_t seed) {
  const Shape& s = f.shape;
  ConcreteColimit cc;
  cc.mod_images.assign(s.num_arrows(), {});
  if (s.kind == ShapeKind::Discrete) {
    cc.kind = "DirectSum";
    cc.d = eval_direct_sum(f);
    int base = 0;
    for (int x = 0; x < s.num_objects(); ++x) {
      const Algebra& a = f.algebras[x];
      std::vector<Element> imgs;
      for (int i = 0; i < a.dim(); ++i) {
        Element e = zero_element(cc.d);
        auto u = a.unit(i);
        e[base + u.block](u.r, u.s) = 1.0;
        imgs.push_back(e);
      }
      Element p = zero_element(cc.d);
      for (int j = 0; j < a.num_blocks(); ++j) p[base + j].setIdentity();
      cc.units.push_back(p);
      cc.alg_images.push_back(imgs);
      base += a.num_blocks();
    }
    return cc;
  }
  if (s.kind == ShapeKind::Group) {
    cc.kind = "FellBundleSectionAlgebra";
    FellEval fe = eval_fell_bundle(f, tol, seed);
    cc.d = fe.dec.algebra;
    cc.iso_defect = fe.dec.iso_defect;
    auto img = [&](int g, int k) {
      Vec v = Vec::Zero(fe.conv.dim);
      v(fe.conv.fibre_offset[g] + k) = 1.0;
      return from_coords(cc.d, fe.dec.iso * v);
    };
    const int e = s.identity_of[0];
    std::vector<Element> alg;
    for (int i = 0; i < f.algebras[0].dim(); ++i) alg.push_back(img(e, i));
    cc.alg_images.push_back(alg);
    cc.units.push_back(from_coords(cc.d, fe.dec.iso * fe.conv.unit));
    for (int g = 0; g < s.num_arrows(); ++g) {
      if (g == e) continue;
      for (int k = 0; k < f.corr(g).dim(); ++k) cc.mod_images[g].push_back(img(g, k));
    }
    return cc;
  }
  if (s.kind == ShapeKind::Chain) {
    ChainEval ch = eval_stabilized_chain(f, tol);
    if (!ch.evaluable) throw Error(ErrorKind::NotEvaluable, ch.reason);
    cc.kind = "StabilizedChain";
    cc.d = ch.algebra;
    for (int x = 0; x < s.num_objects(); ++x) {
      const StarHom& h = ch.to_limit[x];
      std::vector<Element> imgs;
      for (int i = 0; i < h.source.dim(); ++i) imgs.push_back(from_coords(cc.d, h.map.col(i)));
      cc.alg_images.push_back(imgs);
      cc.units.push_back(apply_hom(h, unit_element(h.source)));
    }
    for (int g : s.generators) {
      const Correspondence& e = f.corr(g);
      const StarHom& h = ch.to_limit[s.arrows[g].target];
      for (int k = 0; k < e.dim(); ++k) cc.mod_images[g].push_back(apply_hom(h, module_element(e, Vec::Unit(e.dim(), k))));
    }
    return cc;
  }
  throw Error(ErrorKind::NotEvaluable, std::string("no concrete evaluation for shape ") + to_string(s.kind));
}

void fill_composite_esses(const CorrFunctor& f, std::vector<std::vector<Mat>>& esses, std::vector<bool>& have) {
  const Shape& s = f.shape;
  bool progress = true;
  while (progress) {
    progress = false;
    for (auto [g, h] : composable_pairs(s)) {
      int gh = s.compose(g, h);
      if (have[gh] || !have[g] || !have[h]) continue;
      esses[gh] = composite_esses(f, g, h, esses[g], esses[h]);
      have[gh] = true;
      progress = true;
    }
  }
  for (int g = 0; g < s.num_arrows(); ++g)
    if (!have[g]) throw Error(ErrorKind::InvalidAssignment, "arrow " + s.arrows[g].name + " is not reachable from generators");
}

RepresentationData tautological_representation(const ConcreteColimit& cc, std::shared_ptr<const CorrFunctor> f) {
  const Shape& s = f->shape;
  const Algebra& d = cc.d;
  RepresentationData r{f, d, {}, {}};
  std::vector<std::vector<Mat>> ws;
  for (int x = 0; x < s.num_objects(); ++x) {
    std::vector<Mat> w;
    std::vector<int> mult;
    for (int j = 0; j < d.num_blocks(); ++j) {
      Mat p = cc.units[x][j];
      w.push_back(range_basis(0.5 * (p + p.adjoint())));
      mult.push_back(static_cast<int>(w.back().cols()));
    }
    HilbertModule m = make_module(d, mult);
    const Algebra& a = f->algebras[x];
    std::vector<std::vector<Mat>> left;
    for (int i = 0; i < a.dim(); ++i) {
      std::vector<Mat> per;
      for (int j = 0; j < d.num_blocks(); ++j) per.push_back(w[j].adjoint() * cc.alg_images[x][i][j] * w[j]);
      left.push_back(per);
    }
    r.gammas.push_back(make_correspondence(a, m, std::move(left)));
    ws.push_back(w);
  }
  auto op = [&](const Element& e, int x, int y) {
    std::vector<Mat> blocks;
    for (int j = 0; j < d.num_blocks(); ++j) blocks.push_back(ws[x][j].adjoint() * e[j] * ws[y][j]);
    return map_full(r.gammas[y].module, r.gammas[x].module, blocks);
  };
  r.esses.assign(s.num_arrows(), {});
  std::vector<bool> have(s.num_arrows(), false);
  for (int g = 0; g < s.num_arrows(); ++g) {
    const Arrow& a = s.arrows[g];
    if (a.identity) {
      for (int i = 0; i < f->algebras[a.source].dim(); ++i) r.esses[g].push_back(left_full(r.gammas[a.source], i));
      have[g] = true;
    } else if (!cc.mod_images[g].empty() || f->corr(g).dim() == 0) {
      for (const auto& e : cc.mod_images[g]) r.esses[g].push_back(op(e, a.source, a.target));
      have[g] = true;
    }
  }
  fill_composite_esses(*f, r.esses, have);
  return r;
}

}  // namespace corrcolim

#include "corrcolim/repcheck.hpp"

#include "corrcolim/errors.hpp"

#include <algorithm>
#include <map>

namespace corrcolim {

namespace {

Mat eval_poly(const Poly& q, const std::vector<Mat>& images, int dim) {
  Mat out = Mat::Zero(dim, dim);
  for (const auto& m : q) {
    Mat t = Mat::Identity(dim, dim);
    for (const auto& f : m.factors) t = t * (f.star ? Mat(images[f.gen].adjoint()) : images[f.gen]);
    out += m.coeff * t;
  }
  return out;
}

struct GenIndex {
  std::map<std::pair<int, int>, int> alg, mod;
  explicit GenIndex(const Presentation& p) {
    for (size_t i = 0; i < p.generators.size(); ++i) {
      const auto& g = p.generators[i];
      if (g.kind == Generator::Kind::Alg) alg[{g.owner, g.index}] = static_cast<int>(i);
      if (g.kind == Generator::Kind::Mod) mod[{g.owner, g.index}] = static_cast<int>(i);
    }
  }
};

}  // namespace

double relation_defect(const Relation& rel, const std::vector<Mat>& images, int dim, const Mat* domain) {
  Mat r = eval_poly(rel.lhs, images, dim) - eval_poly(rel.rhs, images, dim);
  if (domain) r = r * *domain;
  return r.size() == 0 ? 0.0 : opnorm(r);
}

Report check_representation(const Presentation& p, const RepAssignment& r, double tol) {
  const int dim = r.dim();
  if (r.images.size() != p.generators.size())
    throw Error(ErrorKind::ShapeError, "assignment has " + std::to_string(r.images.size()) + " images for " +
                                           std::to_string(p.generators.size()) + " generators");
  for (size_t i = 0; i < r.images.size(); ++i)
    if (r.images[i].rows() != dim || r.images[i].cols() != dim)
      throw Error(ErrorKind::ShapeError, "image of " + p.generators[i].name + " is not " + std::to_string(dim) + "x" +
                                             std::to_string(dim));
  if (r.domain && r.domain->rows() != dim) throw Error(ErrorKind::ShapeError, "domain has the wrong number of rows");

  Report rep(tol);
  std::vector<std::string> order;
  std::map<std::string, std::pair<double, int>> worst, worst_dom;
  for (size_t k = 0; k < p.relations.size(); ++k) {
    const Relation& rel = p.relations[k];
    if (!worst.count(rel.clause)) {
      order.push_back(rel.clause);
      worst[rel.clause] = {0.0, -1};
      worst_dom[rel.clause] = {0.0, -1};
    }
    double d = relation_defect(rel, r.images, dim);
    if (worst[rel.clause].second < 0 || d > worst[rel.clause].first) worst[rel.clause] = {d, static_cast<int>(k)};
    if (r.domain) {
      double dd = relation_defect(rel, r.images, dim, &*r.domain);
      if (worst_dom[rel.clause].second < 0 || dd > worst_dom[rel.clause].first)
        worst_dom[rel.clause] = {dd, static_cast<int>(k)};
    }
  }
  auto witness = [&](int k) {
    if (k < 0) return std::string();
    const Relation& rel = p.relations[k];
    std::string s = "relation " + std::to_string(k);
    if (!rel.lhs.empty()) s += ": " + monomial_text(p, rel.lhs.front()) + (rel.lhs.size() > 1 ? " + ..." : "");
    return s;
  };
  for (const auto& c : order) rep.add("clause " + c, worst[c].first, witness(worst[c].second));
  if (r.domain)
    for (const auto& c : order) rep.add("domain:clause " + c, worst_dom[c].first, witness(worst_dom[c].second));

  bool nondeg = true;
  std::vector<int> algs;
  for (size_t i = 0; i < p.generators.size(); ++i)
    if (p.generators[i].kind == Generator::Kind::Alg) algs.push_back(static_cast<int>(i));
  if (!algs.empty() && dim > 0) {
    Mat cat(dim, dim * static_cast<int>(algs.size()));
    for (size_t i = 0; i < algs.size(); ++i) cat.middleCols(i * dim, dim) = r.images[algs[i]];
    nondeg = rank_of(cat) == dim;
  }
  rep.note(std::string("nondegenerate=") + (nondeg ? "true" : "false"));
  return rep;
}

SummedModule sum_modules(const RepresentationData& r) {
  std::vector<int> mult(r.d.num_blocks(), 0);
  for (const auto& g : r.gammas)
    for (int j = 0; j < r.d.num_blocks(); ++j) mult[j] += g.module.mult[j];
  SummedModule out{make_module(r.d, mult), {}};
  std::vector<int> off(r.d.num_blocks(), 0);
  for (const auto& g : r.gammas) {
    std::vector<Mat> blocks;
    for (int j = 0; j < r.d.num_blocks(); ++j) {
      Mat b = Mat::Zero(mult[j], g.module.mult[j]);
      b.middleRows(off[j], g.module.mult[j]).setIdentity();
      off[j] += g.module.mult[j];
      blocks.push_back(b);
    }
    out.embed.push_back(map_full(g.module, out.module, blocks));
  }
  return out;
}

RepAssignment assignment_from_representation(const Presentation& p, const RepresentationData& r) {
  const Shape& s = r.functor->shape;
  SummedModule sm = sum_modules(r);
  RepAssignment out{r.d, sm.module.mult, {}, std::nullopt};
  for (const auto& g : p.generators) {
    switch (g.kind) {
      case Generator::Kind::Alg:
        out.images.push_back(sm.embed[g.owner] * left_full(r.gammas[g.owner], g.index) * sm.embed[g.owner].adjoint());
        break;
      case Generator::Kind::Mod: {
        const Arrow& a = s.arrows[g.owner];
        out.images.push_back(sm.embed[a.source] * r.esses[g.owner][g.index] * sm.embed[a.target].adjoint());
        break;
      }
      case Generator::Kind::Free:
        throw Error(ErrorKind::InvalidAssignment, "generator " + g.name + " has no cone counterpart; emit without reduction");
    }
  }
  return out;
}

RepAssignment tautological_assignment(const Presentation& p, const ConcreteColimit& cc) {
  RepAssignment out{cc.d, cc.d.blocks, {}, std::nullopt};
  for (const auto& g : p.generators) {
    switch (g.kind) {
      case Generator::Kind::Alg:
        out.images.push_back(left_mult_matrix(cc.d, cc.alg_images[g.owner][g.index]));
        break;
      case Generator::Kind::Mod:
        if (cc.mod_images[g.owner].empty())
          throw Error(ErrorKind::InvalidAssignment, "no concrete image for " + g.name);
        out.images.push_back(left_mult_matrix(cc.d, cc.mod_images[g.owner][g.index]));
        break;
      case Generator::Kind::Free:
        throw Error(ErrorKind::InvalidAssignment, "generator " + g.name + " has no concrete image");
    }
  }
  return out;
}

RepresentationData induced_cone_from_representation(const Presentation& p, const RepAssignment& r,
                                                    std::shared_ptr<const CorrFunctor> f, double tol) {
  const Shape& s = f->shape;
  HilbertModule m = make_module(r.base, r.mult);
  const int dim = m.dim();
  if (r.images.size() != p.generators.size()) throw Error(ErrorKind::ShapeError, "image count mismatch");
  GenIndex idx(p);
  RepresentationData out{f, r.base, {}, {}};
  std::vector<Mat> embed;
  for (int x = 0; x < s.num_objects(); ++x) {
    const Algebra& a = f->algebras[x];
    Mat px = Mat::Zero(dim, dim);
    for (int j = 0; j < a.num_blocks(); ++j)
      for (int t = 0; t < a.blocks[j]; ++t) {
        auto it = idx.alg.find({x, a.index(j, t, t)});
        if (it == idx.alg.end()) throw Error(ErrorKind::InvalidAssignment, "missing unit generator at " + s.objects[x]);
        px += r.images[it->second];
      }
    double pd = std::max(opnorm(px * px - px), opnorm(px.adjoint() - px));
    double rd = right_linearity_defect(m, m, px);
    if (std::max(pd, rd) > tol)
      throw Error(ErrorKind::InvalidAssignment, "p_" + s.objects[x] + " is not a D-linear projection (defect " +
                                                    std::to_string(std::max(pd, rd)) + ")");
    std::vector<Mat> pb = map_blocks(m, m, px);
    std::vector<Mat> w;
    std::vector<int> mult;
    for (int j = 0; j < r.base.num_blocks(); ++j) {
      w.push_back(range_basis(0.5 * (pb[j] + pb[j].adjoint())));
      mult.push_back(static_cast<int>(w.back().cols()));
    }
    HilbertModule gm = make_module(r.base, mult);
    Mat jx = map_full(gm, m, w);
    std::vector<std::vector<Mat>> left;
    for (int i = 0; i < a.dim(); ++i) {
      auto it = idx.alg.find({x, i});
      if (it == idx.alg.end()) throw Error(ErrorKind::InvalidAssignment, "missing algebra generator at " + s.objects[x]);
      left.push_back(map_blocks(gm, gm, jx.adjoint() * r.images[it->second] * jx));
    }
    out.gammas.push_back(make_correspondence(a, gm, std::move(left)));
    embed.push_back(jx);
  }
  out.esses.assign(s.num_arrows(), {});
  std::vector<bool> have(s.num_arrows(), false);
  for (int g = 0; g < s.num_arrows(); ++g) {
    const Arrow& a = s.arrows[g];
    if (a.identity) {
      for (int i = 0; i < f->algebras[a.source].dim(); ++i) out.esses[g].push_back(left_full(out.gammas[a.source], i));
      have[g] = true;
      continue;
    }
    const int d = f->corr(g).dim();
    if (d > 0 && !idx.mod.count({g, 0})) continue;
    for (int k = 0; k < d; ++k)
      out.esses[g].push_back(embed[a.source].adjoint() * r.images[idx.mod.at({g, k})] * embed[a.target]);
    have[g] = true;
  }
  fill_composite_esses(*f, out.esses, have);
  return out;
}

double intertwining_defect(const RepAssignment& a, const RepAssignment& b, const Mat& u) {
  double d = 0;
  for (size_t i = 0; i < a.images.size(); ++i) d = std::max(d, opnorm(u * a.images[i] - b.images[i] * u));
  return d;
}

std::optional<Mat> find_intertwiner(const RepAssignment& a, const RepAssignment& b, double tol, std::uint64_t seed) {
  if (a.base != b.base || a.mult != b.mult || a.images.size() != b.images.size()) return std::nullopt;
  HilbertModule ma = make_module(a.base, a.mult), mb = make_module(b.base, b.mult);
  const int da = ma.dim(), db = mb.dim();
  std::vector<Mat> basis;
  std::vector<std::pair<int, std::pair<int, int>>> where;
  for (int j = 0; j < a.base.num_blocks(); ++j)
    for (int r = 0; r < b.mult[j]; ++r)
      for (int c = 0; c < a.mult[j]; ++c) {
        std::vector<Mat> blocks;
        for (int t = 0; t < a.base.num_blocks(); ++t) blocks.push_back(Mat::Zero(b.mult[t], a.mult[t]));
        blocks[j](r, c) = 1.0;
        basis.push_back(map_full(ma, mb, blocks));
        where.push_back({j, {r, c}});
      }
  const int np = static_cast<int>(basis.size());
  if (np == 0) return Mat::Zero(db, da);
  const int ng = static_cast<int>(a.images.size());
  Mat sys(static_cast<Eigen::Index>(ng) * db * da, np);
  for (int q = 0; q < np; ++q)
    for (int s = 0; s < ng; ++s) {
      Mat c = basis[q] * a.images[s] - b.images[s] * basis[q];
      sys.block(static_cast<Eigen::Index>(s) * db * da, q, db * da, 1) = c.reshaped();
    }
  Mat ns = null_space(sys);
  if (ns.cols() == 0) return std::nullopt;
  Rng rng(seed);
  Vec coeff = ns * random_matrix(static_cast<int>(ns.cols()), 1, rng);
  std::vector<Mat> blocks;
  for (int t = 0; t < a.base.num_blocks(); ++t) blocks.push_back(Mat::Zero(b.mult[t], a.mult[t]));
  for (int q = 0; q < np; ++q) blocks[where[q].first](where[q].second.first, where[q].second.second) = coeff(q);
  for (auto& bl : blocks)
    if (bl.size() > 0) bl = polar_unitary(bl);
  Mat u = map_full(ma, mb, blocks);
  if (intertwining_defect(a, b, u) > tol || opnorm(u.adjoint() * u - Mat::Identity(da, da)) > tol) return std::nullopt;
  return u;
}

Mat intertwiner_from_modification(const Modification& m, const RepresentationData& r1, const RepresentationData& r2) {
  SummedModule s1 = sum_modules(r1), s2 = sum_modules(r2);
  Mat u = Mat::Zero(s2.module.dim(), s1.module.dim());
  for (size_t x = 0; x < m.dubs.size(); ++x) u += s2.embed[x] * m.dubs[x] * s1.embed[x].adjoint();
  return u;
}

Modification modification_from_intertwiner(const Mat& u, std::shared_ptr<const Transformation> c1,
                                           std::shared_ptr<const Transformation> c2, const RepresentationData& r1,
                                           const RepresentationData& r2) {
  SummedModule s1 = sum_modules(r1), s2 = sum_modules(r2);
  Modification out{c1, c2, {}};
  for (size_t x = 0; x < s1.embed.size(); ++x) out.dubs.push_back(s2.embed[x].adjoint() * u * s1.embed[x]);
  return out;
}

}  // namespace corrcolim

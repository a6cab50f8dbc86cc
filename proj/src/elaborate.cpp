#include "corrcolim/elaborate.hpp"

#include "corrcolim/concrete_eval.hpp"
#include "corrcolim/errors.hpp"

#include <set>

namespace corrcolim {

using namespace dsl;

namespace {

std::string at(const Span& s) { return " (line " + std::to_string(s.line) + ")"; }

std::vector<std::vector<int>> int_matrix(const MatLit& m, const char* what) {
  std::vector<std::vector<int>> out;
  for (const auto& row : m) {
    std::vector<int> r;
    for (cplx z : row) {
      if (z.imag() != 0.0 || z.real() < 0 || z.real() != std::floor(z.real()))
        throw Error(ErrorKind::ShapeError, std::string(what) + " entries must be non-negative integers");
      r.push_back(static_cast<int>(z.real()));
    }
    out.push_back(r);
  }
  return out;
}

bool is_c(const Algebra& a) { return a.blocks == std::vector<int>{1}; }

bool preset(ShapeKind k) { return k != ShapeKind::Group && k != ShapeKind::Category && k != ShapeKind::TwoCategory; }

CorrIso default_mult(const Correspondence& eh, const Correspondence& eg, const Correspondence& egh, double tol,
                     const std::string& pair) {
  if (auto m = hom_composition_mult(eh, eg, egh, tol)) return *m;
  Tensor t = tensor(eh, eg);
  // over C the basis eta_k (x) xi_l goes to basis vector k*dim(E_g)+l
  if (is_c(eh.source) && is_c(eh.target()) && is_c(eg.target()) && t.corr.dim() == egh.dim() &&
      t.embed.rows() == t.embed.cols())
    return pinv(t.embed);
  IsoSearch s = find_isomorphism(t.corr, egh, tol);
  if (!s.iso) throw Error(ErrorKind::InvalidDiagram, "no isomorphism for mult " + pair + ": " + s.witness);
  return *s.iso;
}

int lookup(const std::map<std::string, int>& names, const std::string& n, const char* what, const Span& s) {
  auto it = names.find(n);
  if (it == names.end()) throw Error(ErrorKind::NameError, std::string("unknown ") + what + " " + n + at(s));
  return it->second;
}

ElabDiagram elaborate_diagram(const Shape& shape, const DiagramBlock& d, const ElabOptions& opts) {
  ElabDiagram out;
  out.name = d.name;
  const int nobj = shape.num_objects();
  for (int x = 0; x < nobj; ++x) out.object_names[shape.objects[x]] = x;
  for (int g = 0; g < shape.num_arrows(); ++g) out.arrow_names[shape.arrows[g].name] = g;

  // correspondences onto arrows: by arrow name, else (presets only) in order onto free generators
  std::vector<int> corr_arrow(d.corrs.size(), -1);
  std::set<int> taken;
  for (size_t i = 0; i < d.corrs.size(); ++i) {
    auto it = out.arrow_names.find(d.corrs[i].name);
    if (it == out.arrow_names.end()) continue;
    const Arrow& a = shape.arrows[it->second];
    if (a.identity) throw Error(ErrorKind::InvalidDiagram, "arrow " + a.name + " is an identity" + at(d.corrs[i].span));
    if (shape.generator_mode && !shape.is_generator(it->second))
      throw Error(ErrorKind::InvalidDiagram, "arrow " + a.name + " is not a generator" + at(d.corrs[i].span));
    corr_arrow[i] = it->second;
    taken.insert(it->second);
  }
  size_t free_gen = 0;
  for (size_t i = 0; i < d.corrs.size(); ++i) {
    if (corr_arrow[i] >= 0) continue;
    if (!preset(shape.kind)) throw Error(ErrorKind::NameError, "no arrow named " + d.corrs[i].name + at(d.corrs[i].span));
    while (free_gen < shape.generators.size() && taken.count(shape.generators[free_gen])) ++free_gen;
    if (free_gen == shape.generators.size())
      throw Error(ErrorKind::InvalidDiagram, "more correspondences than generating arrows" + at(d.corrs[i].span));
    corr_arrow[i] = shape.generators[free_gen];
    taken.insert(corr_arrow[i]);
    if (out.arrow_names.count(d.corrs[i].name))
      throw Error(ErrorKind::NameError, "correspondence name " + d.corrs[i].name + " clashes with an arrow");
    out.arrow_names[d.corrs[i].name] = corr_arrow[i];
  }

  // algebras onto objects: by object name, then by correspondence endpoints, then in order
  std::map<std::string, Algebra> declared;
  for (const auto& a : d.algebras) declared[a.name] = new_algebra(a.blocks, a.name);
  std::vector<std::string> bound(nobj);
  std::map<std::string, int> alias;
  auto bind = [&](const std::string& name, int x, const Span& s) {
    auto it = alias.find(name);
    if (it != alias.end()) {
      if (it->second != x)
        throw Error(ErrorKind::InvalidDiagram,
                    "algebra " + name + " sits at both " + shape.objects[it->second] + " and " + shape.objects[x] + at(s));
      return;
    }
    if (!bound[x].empty() && bound[x] != name)
      throw Error(ErrorKind::InvalidDiagram,
                  "object " + shape.objects[x] + " carries both " + bound[x] + " and " + name + at(s));
    bound[x] = name;
    alias[name] = x;
  };
  for (const auto& a : d.algebras)
    if (out.object_names.count(a.name)) bind(a.name, out.object_names[a.name], a.span);
  for (size_t i = 0; i < d.corrs.size(); ++i) {
    const CorrDecl& c = d.corrs[i];
    if (!c.source) continue;
    const Arrow& a = shape.arrows[corr_arrow[i]];
    for (auto [n, x] : {std::pair{*c.source, a.source}, std::pair{*c.target, a.target}}) {
      auto obj = out.object_names.find(n);
      if (obj != out.object_names.end() && !declared.count(n)) {
        if (obj->second != x)
          throw Error(ErrorKind::InvalidDiagram, "correspondence " + c.name + " does not match its arrow" + at(c.span));
        continue;
      }
      if (!declared.count(n)) throw Error(ErrorKind::NameError, "unknown algebra " + n + at(c.span));
      bind(n, x, c.span);
    }
  }
  size_t next_obj = 0;
  for (const auto& a : d.algebras) {
    if (alias.count(a.name)) continue;
    while (next_obj < bound.size() && !bound[next_obj].empty()) ++next_obj;
    if (next_obj == bound.size()) throw Error(ErrorKind::InvalidDiagram, "more algebras than objects" + at(a.span));
    bind(a.name, static_cast<int>(next_obj), a.span);
  }
  std::vector<Algebra> algebras(nobj, new_algebra({1}));
  for (int x = 0; x < nobj; ++x) {
    if (bound[x].empty()) continue;
    auto it = declared.find(bound[x]);
    if (it != declared.end()) algebras[x] = it->second;
  }
  for (const auto& [n, x] : alias) {
    auto it = out.object_names.find(n);
    if (it != out.object_names.end() && it->second != x)
      throw Error(ErrorKind::NameError, "algebra name " + n + " clashes with an object");
    out.object_names[n] = x;
  }

  std::vector<std::optional<Correspondence>> corrs(shape.num_arrows());
  for (size_t i = 0; i < d.corrs.size(); ++i) {
    const Arrow& a = shape.arrows[corr_arrow[i]];
    try {
      corrs[corr_arrow[i]] = build_correspondence(d.corrs[i].expr, algebras[a.source], algebras[a.target], opts.tol);
    } catch (const Error& e) {
      throw Error(e.kind(), "correspondence " + d.corrs[i].name + at(d.corrs[i].span) + ": " + e.detail());
    }
  }

  CorrFunctor f;
  if (shape.generator_mode) {
    GeneratorData gen{algebras, {}};
    for (int g : shape.generators) {
      if (!corrs[g]) throw Error(ErrorKind::InvalidDiagram, "no correspondence for generating arrow " + shape.arrows[g].name);
      gen.generators.push_back(*corrs[g]);
    }
    f = extend_from_generators(shape, gen);
  } else {
    std::vector<Correspondence> all(shape.num_arrows());
    for (int g = 0; g < shape.num_arrows(); ++g) {
      const Arrow& a = shape.arrows[g];
      if (a.identity) all[g] = identity_correspondence(algebras[a.source]);
      else if (corrs[g]) all[g] = *corrs[g];
      else throw Error(ErrorKind::InvalidDiagram, "no correspondence for arrow " + a.name);
    }
    std::map<std::pair<int, int>, CorrIso> mults;
    for (auto [g, h] : composable_pairs(shape))
      mults[{g, h}] = default_mult(all[h], all[g], all[shape.compose(g, h)], opts.tol, pair_name(shape, g, h));
    std::vector<CorrIso> twos;
    for (const auto& t : shape.twoarrows) {
      const Correspondence &from = all[t.from], &to = all[t.to];
      if (from.dim() == to.dim()) {
        twos.push_back(Mat::Identity(to.dim(), from.dim()));
      } else {
        IsoSearch s = find_isomorphism(from, to, opts.tol);
        if (!s.iso) throw Error(ErrorKind::InvalidDiagram, "no isomorphism for 2-arrow " + t.name + ": " + s.witness);
        twos.push_back(*s.iso);
      }
    }
    f = make_functor(shape, algebras, all, mults, twos);
  }

  for (const auto& m : d.mults) {
    int g = lookup(out.arrow_names, m.g, "arrow", m.span), h = lookup(out.arrow_names, m.h, "arrow", m.span);
    auto it = f.mults.find({g, h});
    if (it == f.mults.end())
      throw Error(ErrorKind::InvalidDiagram, "mult " + m.g + " " + m.h + " is not a composable pair" + at(m.span));
    if (m.kind == MultDecl::Kind::Scale) {
      it->second *= m.scale;
    } else if (m.kind == MultDecl::Kind::Matrix) {
      Mat u = matrix_literal(m.matrix);
      if (u.rows() != it->second.rows() || u.cols() != it->second.cols())
        throw Error(ErrorKind::ShapeError, "mult " + m.g + " " + m.h + " has the wrong size" + at(m.span));
      it->second = u;
    }
  }
  for (const auto& t : d.twomaps) {
    int a = -1;
    for (size_t k = 0; k < shape.twoarrows.size(); ++k)
      if (shape.twoarrows[k].name == t.name) a = static_cast<int>(k);
    if (a < 0) throw Error(ErrorKind::NameError, "unknown 2-arrow " + t.name + at(t.span));
    Mat v = matrix_literal(t.matrix);
    if (v.rows() != f.twos[a].rows() || v.cols() != f.twos[a].cols())
      throw Error(ErrorKind::ShapeError, "twomap " + t.name + " has the wrong size" + at(t.span));
    f.twos[a] = v;
  }
  out.functor = std::make_shared<const CorrFunctor>(std::move(f));
  return out;
}

std::vector<Correspondence> gammas_of(const std::vector<GammaLit>& lits, const ElabDiagram& d,
                                      const std::vector<Algebra>& targets, const std::string& owner, double tol) {
  const CorrFunctor& f = *d.functor;
  std::vector<std::optional<Correspondence>> g(f.shape.num_objects());
  for (const auto& lit : lits) {
    int x = lookup(d.object_names, lit.object, "object", lit.span);
    if (g[x]) throw Error(ErrorKind::NameError, owner + ": two gammas for object " + f.shape.objects[x] + at(lit.span));
    try {
      g[x] = build_correspondence(lit.expr, f.algebras[x], targets[x], tol);
    } catch (const Error& e) {
      throw Error(e.kind(), owner + ": gamma " + lit.object + at(lit.span) + ": " + e.detail());
    }
  }
  std::vector<Correspondence> out;
  for (int x = 0; x < f.shape.num_objects(); ++x) {
    if (!g[x]) throw Error(ErrorKind::InvalidDiagram, owner + ": no gamma for object " + f.shape.objects[x]);
    out.push_back(*g[x]);
  }
  return out;
}

}  // namespace

Mat matrix_literal(const MatLit& m) {
  const int rows = static_cast<int>(m.size());
  const int cols = rows ? static_cast<int>(m[0].size()) : 0;
  Mat out(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(m[r].size()) != cols) throw Error(ErrorKind::ShapeError, "ragged matrix literal");
    for (int c = 0; c < cols; ++c) out(r, c) = m[r][c];
  }
  return out;
}

Shape build_shape(const ShapeDecl& s, int depth) {
  if (s.kind == "discrete") return discrete_shape(s.args.at(0));
  if (s.kind == "pushout") return pushout_shape();
  if (s.kind == "coequalizer") return coequalizer_shape();
  if (s.kind == "endo") return endo_shape(depth);
  if (s.kind == "free_monoid") return free_monoid_shape(s.args.at(0), depth);
  if (s.kind == "chain") return chain_shape(s.args.at(0), s.stabilized_from);
  if (s.kind == "group") return group_shape(s.elements, s.table);
  std::vector<ArrowDecl> arrows;
  for (const auto& a : s.arrows) arrows.push_back({a.name, a.source, a.target});
  std::vector<ComposeDecl> compose;
  for (const auto& c : s.compose) compose.push_back({c.g, c.h, c.result});
  if (s.kind == "category") return category_shape(s.objects, arrows, compose);
  if (s.kind == "two_category") {
    std::vector<TwoArrowDecl> two;
    for (const auto& t : s.twoarrows) two.push_back({t.name, t.source, t.target});
    std::vector<ComposeDecl> vcompose;
    for (const auto& c : s.vcompose) vcompose.push_back({c.g, c.h, c.result});
    return two_category_shape(s.objects, arrows, compose, two, vcompose);
  }
  throw Error(ErrorKind::ShapeError, "unknown shape kind " + s.kind);
}

Correspondence build_correspondence(const CorrExpr& e, const Algebra& source, const Algebra& target, double tol) {
  switch (e.kind) {
    case CorrExpr::Kind::Std:
      if (!is_c(source) || !is_c(target)) throw Error(ErrorKind::InvalidDiagram, "std(n) needs C at both ends");
      if (e.n < 0) throw Error(ErrorKind::ShapeError, "std(n) needs n >= 0");
      return standard_correspondence(e.n);
    case CorrExpr::Kind::Identity:
      if (source != target) throw Error(ErrorKind::InvalidDiagram, "identity needs equal source and target");
      return identity_correspondence(source);
    case CorrExpr::Kind::FromHom: {
      std::vector<std::vector<int>> mult;
      if (e.mult) {
        mult = int_matrix(*e.mult, "multiplicity matrix");
      } else {
        if (source != target) throw Error(ErrorKind::InvalidDiagram, "from_hom between different algebras needs mult");
        mult.assign(target.num_blocks(), std::vector<int>(source.num_blocks(), 0));
        for (int j = 0; j < target.num_blocks(); ++j) mult[j][j] = 1;
      }
      StarHom h = standard_hom(source, target, mult);
      if (!e.ad.empty()) {
        Element u;
        for (const auto& b : e.ad) u.push_back(matrix_literal(b));
        check_shape(target, u);
        Element uu = multiply(u, adjoint(u));
        double def = 0;
        for (int j = 0; j < target.num_blocks(); ++j)
          def = std::max(def, opnorm(uu[j] - Mat::Identity(target.blocks[j], target.blocks[j])));
        if (def > tol) throw Error(ErrorKind::InvalidDiagram, "ad needs a unitary");
        h = conjugate(h, u);
      }
      return from_star_hom(h);
    }
    case CorrExpr::Kind::FromExpectation: {
      // the correspondence runs from the big algebra `source` to the subalgebra `target`
      std::vector<std::vector<int>> mult;
      if (e.mult) {
        mult = int_matrix(*e.mult, "inclusion matrix");
      } else {
        if (!is_c(target)) throw Error(ErrorKind::InvalidDiagram, "from_expectation needs an inclusion unless B = C");
        for (int n : source.blocks) mult.push_back({n});
      }
      StarHom incl = standard_hom(target, source, mult);
      Mat ex;
      if (e.map) {
        ex = matrix_literal(*e.map);
      } else {
        if (!is_c(target)) throw Error(ErrorKind::InvalidDiagram, "weights describe expectations onto C only");
        if (static_cast<int>(e.weights.size()) != source.num_blocks())
          throw Error(ErrorKind::ShapeError, "from_expectation needs one weight per block");
        ex = Mat::Zero(1, source.dim());
        for (int j = 0; j < source.num_blocks(); ++j)
          for (int r = 0; r < source.blocks[j]; ++r) ex(0, source.index(j, r, r)) = e.weights[j];
      }
      return correspondence_from_expectation(source, incl, ex, tol);
    }
    case CorrExpr::Kind::Module: {
      if (static_cast<int>(e.module_mult.size()) != target.num_blocks())
        throw Error(ErrorKind::ShapeError, "module mult needs one entry per target block");
      HilbertModule m = make_module(target, e.module_mult);
      std::vector<std::optional<std::vector<Mat>>> given(source.dim());
      for (const auto& a : e.acts) {
        if (a.block < 0 || a.block >= source.num_blocks() || a.r < 0 || a.s < 0 || a.r >= source.blocks[a.block] ||
            a.s >= source.blocks[a.block])
          throw Error(ErrorKind::InvalidBlock, "act index out of range");
        if (static_cast<int>(a.images.size()) != target.num_blocks())
          throw Error(ErrorKind::ShapeError, "act needs one matrix per target block");
        std::vector<Mat> per;
        for (int j = 0; j < target.num_blocks(); ++j) {
          per.push_back(matrix_literal(a.images[j]));
          if (per.back().rows() != m.mult[j] || per.back().cols() != m.mult[j])
            throw Error(ErrorKind::ShapeError, "act blocks must be m_j x m_j");
        }
        given[source.index(a.block, a.r, a.s)] = per;
      }
      std::vector<std::vector<Mat>> left;
      for (int i = 0; i < source.dim(); ++i) {
        if (given[i]) {
          left.push_back(*given[i]);
          continue;
        }
        Algebra::Unit u = source.unit(i);
        const auto& partner = given[source.index(u.block, u.s, u.r)];
        std::vector<Mat> per;
        for (int j = 0; j < target.num_blocks(); ++j)
          per.push_back(partner ? Mat((*partner)[j].adjoint()) : Mat::Zero(m.mult[j], m.mult[j]));
        left.push_back(per);
      }
      return make_correspondence(source, m, std::move(left));
    }
  }
  throw Error(ErrorKind::InvalidDiagram, "unknown correspondence expression");
}

void fill_composite_vees(Transformation& t, std::vector<bool>& have) {
  const Shape& s = t.source->shape;
  bool progress = true;
  while (progress) {
    progress = false;
    for (auto [g, h] : composable_pairs(s)) {
      int gh = s.compose(g, h);
      if (have[gh] || !have[g] || !have[h]) continue;
      const int x = s.arrows[h].source, z = s.arrows[g].target;
      int rows = tensor(t.source->corr(gh), t.gammas[z]).corr.dim();
      int cols = tensor(t.gammas[x], t.target->corr(gh)).corr.dim();
      if (rows != cols) throw Error(ErrorKind::InvalidDiagram, "no invertible V for arrow " + s.arrows[gh].name);
      t.vees[gh] = Mat::Identity(rows, cols);
      TransformationRoutes r = transformation_routes(t, g, h);
      t.vees[gh] = r.route_b * pinv(r.route_a);
      have[gh] = true;
      progress = true;
    }
  }
}

const ElabDiagram& Elaborated::diagram(const std::string& name) const {
  for (const auto& d : diagrams)
    if (d.name == name) return d;
  throw Error(ErrorKind::NameError, "unknown diagram " + name);
}

const ElabDiagram& Elaborated::first() const {
  if (diagrams.empty()) throw Error(ErrorKind::InvalidDiagram, "the document declares no diagram");
  return diagrams.front();
}

Elaborated elaborate(const DslDocument& doc, const ElabOptions& opts) {
  Elaborated out;
  out.shape = build_shape(doc.shape, opts.depth);
  if (!doc.main.empty() || doc.diagrams.empty()) out.diagrams.push_back(elaborate_diagram(out.shape, doc.main, opts));
  for (const auto& d : doc.diagrams) out.diagrams.push_back(elaborate_diagram(out.shape, d, opts));

  for (const auto& b : doc.transformations) {
    const ElabDiagram& src = out.diagram(b.from);
    const ElabDiagram& dst = out.diagram(b.to);
    const Shape& s = out.shape;
    Transformation t{src.functor, dst.functor, gammas_of(b.gammas, src, dst.functor->algebras, b.name, opts.tol), {}};
    t.vees.assign(s.num_arrows(), Mat());
    std::vector<bool> have(s.num_arrows(), false);
    for (int g = 0; g < s.num_arrows(); ++g)
      if (s.arrows[g].identity) {
        t.vees[g] = canonical_vee(t.gammas[s.arrows[g].source]);
        have[g] = true;
      }
    for (const auto& v : b.vees) {
      int g = lookup(src.arrow_names, v.arrow, "arrow", v.span);
      if (have[g]) throw Error(ErrorKind::NameError, b.name + ": V for arrow " + v.arrow + " given twice" + at(v.span));
      t.vees[g] = matrix_literal(v.matrices.at(0));
      have[g] = true;
    }
    fill_composite_vees(t, have);
    for (int g = 0; g < s.num_arrows(); ++g)
      if (!have[g]) throw Error(ErrorKind::InvalidDiagram, b.name + ": no V for arrow " + s.arrows[g].name);
    out.transformations.emplace_back(b.name, std::make_shared<const Transformation>(std::move(t)));
  }

  for (const auto& b : doc.cones) {
    const ElabDiagram& src = out.diagram(b.over);
    const CorrFunctor& f = *src.functor;
    const Shape& s = f.shape;
    Algebra d = new_algebra(b.target);
    RepresentationData r{src.functor, d,
                         gammas_of(b.gammas, src, std::vector<Algebra>(s.num_objects(), d), b.name, opts.tol), {}};
    r.esses.assign(s.num_arrows(), {});
    std::vector<bool> have(s.num_arrows(), false);
    for (int g = 0; g < s.num_arrows(); ++g) {
      const Arrow& a = s.arrows[g];
      if (!a.identity) continue;
      for (int i = 0; i < f.algebras[a.source].dim(); ++i) r.esses[g].push_back(left_full(r.gammas[a.source], i));
      have[g] = true;
    }
    for (const auto& lit : b.esses) {
      int g = lookup(src.arrow_names, lit.arrow, "arrow", lit.span);
      if (have[g]) throw Error(ErrorKind::NameError, b.name + ": S for arrow " + lit.arrow + " given twice" + at(lit.span));
      const Arrow& a = s.arrows[g];
      if (static_cast<int>(lit.matrices.size()) != f.corr(g).dim())
        throw Error(ErrorKind::InvalidAssignment, b.name + ": S " + lit.arrow + " needs one matrix per basis vector of E_" +
                                                      a.name + at(lit.span));
      for (const auto& m : lit.matrices) {
        Mat op = matrix_literal(m);
        if (op.rows() != r.gammas[a.source].dim() || op.cols() != r.gammas[a.target].dim())
          throw Error(ErrorKind::InvalidAssignment, b.name + ": S " + lit.arrow + " has the wrong size" + at(lit.span));
        r.esses[g].push_back(op);
      }
      have[g] = true;
    }
    for (int g = 0; g < s.num_arrows(); ++g)
      if (f.corr(g).dim() == 0) have[g] = true;
    fill_composite_esses(f, r.esses, have);
    out.cones.emplace_back(b.name, std::move(r));
  }
  return out;
}

}  // namespace corrcolim

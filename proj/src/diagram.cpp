#include "corrcolim/diagram.hpp"

#include "corrcolim/errors.hpp"

#include <algorithm>

namespace corrcolim {

CorrIso CorrFunctor::mult(int g, int h) const {
  if (shape.arrows[g].identity) return right_unit(corrs[h]);
  if (shape.arrows[h].identity) return left_unit(corrs[g]);
  auto it = mults.find({g, h});
  if (it == mults.end())
    throw Error(ErrorKind::InvalidDiagram, "missing multiplication for " + pair_name(shape, g, h));
  return it->second;
}

std::string triple_name(const Shape& s, const Triple& t) {
  return "(" + s.arrows[t.g01].name + "," + s.arrows[t.g12].name + "," + s.arrows[t.g23].name + ")";
}

std::string pair_name(const Shape& s, int g, int h) {
  return "(" + s.arrows[g].name + "," + s.arrows[h].name + ")";
}

CorrFunctor make_functor(const Shape& shape, const std::vector<Algebra>& algebras,
                         const std::vector<Correspondence>& corrs, const std::map<std::pair<int, int>, CorrIso>& mults,
                         const std::vector<CorrIso>& twos) {
  if (static_cast<int>(algebras.size()) != shape.num_objects())
    throw Error(ErrorKind::InvalidDiagram, "need one algebra per object");
  if (static_cast<int>(corrs.size()) != shape.num_arrows())
    throw Error(ErrorKind::InvalidDiagram, "need one correspondence per arrow");
  if (twos.size() != shape.twoarrows.size()) throw Error(ErrorKind::InvalidDiagram, "need one map per 2-arrow");
  return CorrFunctor{shape, algebras, corrs, mults, twos};
}

CoherenceRoutes coherence_routes(const CorrFunctor& f, const Triple& t) {
  const Shape& s = f.shape;
  const int a = t.g01, b = t.g12, c = t.g23;
  const int g02 = s.compose(b, a), g13 = s.compose(c, b);
  const auto &e01 = f.corr(a), &e12 = f.corr(b), &e23 = f.corr(c);

  Tensor t_ab = tensor(e01, e12);
  Tensor t_ab_c = tensor(t_ab.corr, e23);
  Tensor t_02_c = tensor(f.corr(g02), e23);
  Mat r1 = f.mult(c, g02) * tensor_maps(t_ab_c, t_02_c, f.mult(b, a), Mat::Identity(e23.dim(), e23.dim()));

  Tensor t_bc = tensor(e12, e23);
  Tensor t_a_bc = tensor(e01, t_bc.corr);
  Tensor t_a_13 = tensor(e01, f.corr(g13));
  Mat r2 = f.mult(g13, a) * tensor_maps(t_a_bc, t_a_13, Mat::Identity(e01.dim(), e01.dim()), f.mult(c, b)) *
           associator(e01, e12, e23);
  return {r1, r2};
}

namespace {

double identity_corr_defect(const Correspondence& c, const Algebra& a) {
  if (c.source != a || c.target() != a || c.module.mult != a.blocks) return INFINITY;
  Correspondence id = identity_correspondence(a);
  double d = 0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.num_blocks(); ++j) d = std::max(d, opnorm(c.left[i][j] - id.left[i][j]));
  return d;
}

}  // namespace

Report validate_functor(const CorrFunctor& f, double tol) {
  Report rep(tol);
  const Shape& s = f.shape;
  Report sr = validate_shape(s);
  for (const auto& c : sr.checks) rep.checks.push_back({"shape." + c.name, c.defect, c.pass, c.witness});
  if (!sr.pass()) return rep;

  bool ends = static_cast<int>(f.algebras.size()) == s.num_objects() && static_cast<int>(f.corrs.size()) == s.num_arrows();
  std::string w;
  for (int g = 0; ends && g < s.num_arrows(); ++g) {
    const Arrow& a = s.arrows[g];
    if (f.corrs[g].source != f.algebras[a.source] || f.corrs[g].target() != f.algebras[a.target]) {
      ends = false;
      w = a.name;
    }
  }
  rep.flag("endpoints", ends, w);
  if (!ends) return rep;

  double idd = 0;
  w.clear();
  for (int x = 0; x < s.num_objects(); ++x) {
    double d = identity_corr_defect(f.corrs[s.identity_of[x]], f.algebras[x]);
    if (d > idd) idd = d, w = s.arrows[s.identity_of[x]].name;
  }
  rep.add("identity_arrows", idd, w);

  double cd = 0;
  bool cpass = true;
  w.clear();
  for (int g = 0; g < s.num_arrows(); ++g) {
    Report r = validate_correspondence(f.corrs[g], tol);
    if (!r.pass() && cpass) {
      cpass = false;
      w = s.arrows[g].name + ": " + r.first_failure()->name;
    }
    cd = std::max(cd, r.max_defect());
  }
  rep.flag("correspondences", cpass, w, cd);

  double md = 0;
  bool mpass = true;
  w.clear();
  auto pairs = composable_pairs(s);
  for (auto [g, h] : pairs) {
    auto it = f.mults.find({g, h});
    if (it == f.mults.end()) {
      if (mpass) w = "missing " + pair_name(s, g, h);
      mpass = false;
      continue;
    }
    Tensor t = tensor(f.corrs[h], f.corrs[g]);
    Report r = validate_iso(it->second, t.corr, f.corrs[s.compose(g, h)], tol);
    if (!r.pass() && mpass) {
      mpass = false;
      w = pair_name(s, g, h) + ": " + r.first_failure()->name;
    }
    md = std::max(md, std::isfinite(r.max_defect()) ? r.max_defect() : 1.0);
  }
  rep.flag("multiplications", mpass, w, md);
  if (!mpass) return rep;

  double coh = 0;
  w.clear();
  auto triples = composable_triples(s);
  for (const auto& t : triples) {
    auto routes = coherence_routes(f, t);
    double d = opnorm(routes.route1 - routes.route2);
    if (d > coh || (w.empty() && d > tol)) {
      coh = d;
      w = triple_name(s, t);
    }
  }
  rep.add("coherence", coh, coh > tol ? w : "");
  rep.note("coherence_triples=" + std::to_string(triples.size()));
  if (s.generator_mode) rep.note("truncation_depth=" + std::to_string(s.depth));

  if (!s.twoarrows.empty()) {
    double vd = 0, cdv = 0;
    std::string vw, cw;
    for (size_t a = 0; a < s.twoarrows.size(); ++a) {
      const auto& ta = s.twoarrows[a];
      Report r = validate_iso(f.twos[a], f.corrs[ta.from], f.corrs[ta.to], tol);
      if (r.max_defect() > vd) vd = r.max_defect(), vw = ta.name;
    }
    rep.add("twoarrow_isos", vd, vw);
    for (size_t b = 0; b < s.twoarrows.size(); ++b)
      for (size_t a = 0; a < s.twoarrows.size(); ++a) {
        int c = s.vcomp[b][a];
        if (c < 0) continue;
        double d = opnorm(f.twos[c] - f.twos[b] * f.twos[a]);
        if (d > cdv) cdv = d, cw = s.twoarrows[b].name + " . " + s.twoarrows[a].name;
      }
    rep.add("vertical_compatibility", cdv, cw);
    for (size_t a = 0; a < s.twoarrows.size(); ++a) {
      const auto& ta = s.twoarrows[a];
      if (ta.from != ta.to) continue;
      // 2-arrows from an arrow to itself that compose to themselves must be identities
      int c = s.vcomp[a][a];
      if (c == static_cast<int>(a)) {
        double d = opnorm(f.twos[a] - Mat::Identity(f.twos[a].rows(), f.twos[a].cols()));
        rep.add("identity_twoarrow:" + ta.name, d);
      }
    }
    rep.note("horizontal 2-arrow compatibility is not checked");
  }
  return rep;
}

namespace {

struct Flat {
  Correspondence corr;
  Mat flat;  // raw simple tensors of the word -> canonical coordinates
};

Flat flatten_word(const std::vector<int>& word, const std::vector<const Correspondence*>& gens_by_arrow) {
  Flat f{*gens_by_arrow[word[0]], Mat::Identity(gens_by_arrow[word[0]]->dim(), gens_by_arrow[word[0]]->dim())};
  for (size_t i = 1; i < word.size(); ++i) {
    const Correspondence& g = *gens_by_arrow[word[i]];
    Tensor t = tensor(f.corr, g);
    f.flat = t.embed * kron(f.flat, Mat::Identity(g.dim(), g.dim()));
    f.corr = t.corr;
  }
  return f;
}

}  // namespace

CorrFunctor extend_from_generators(const Shape& shape, const GeneratorData& gen) {
  if (static_cast<int>(gen.algebras.size()) != shape.num_objects())
    throw Error(ErrorKind::CompositionError, "need one algebra per object");
  if (gen.generators.size() != shape.generators.size())
    throw Error(ErrorKind::CompositionError, "need " + std::to_string(shape.generators.size()) + " generating correspondences");
  std::vector<const Correspondence*> by_arrow(shape.num_arrows(), nullptr);
  for (size_t i = 0; i < shape.generators.size(); ++i) {
    int g = shape.generators[i];
    const Arrow& a = shape.arrows[g];
    const Correspondence& c = gen.generators[i];
    if (c.source != gen.algebras[a.source] || c.target() != gen.algebras[a.target])
      throw Error(ErrorKind::CompositionError, "generator " + a.name + " does not match its endpoints");
    by_arrow[g] = &c;
  }
  std::vector<Correspondence> corrs(shape.num_arrows());
  std::vector<Mat> flats(shape.num_arrows());
  for (int g = 0; g < shape.num_arrows(); ++g) {
    const Arrow& a = shape.arrows[g];
    if (a.identity) {
      corrs[g] = identity_correspondence(gen.algebras[a.source]);
      continue;
    }
    for (int l : a.word)
      if (!by_arrow[l]) throw Error(ErrorKind::CompositionError, "arrow " + a.name + " is not a word in generators");
    Flat f = flatten_word(a.word, by_arrow);
    corrs[g] = f.corr;
    flats[g] = f.flat;
  }
  std::map<std::pair<int, int>, CorrIso> mults;
  for (auto [g, h] : composable_pairs(shape)) {
    int gh = shape.compose(g, h);
    Tensor t = tensor(corrs[h], corrs[g]);
    Mat src = t.embed * kron(flats[h], flats[g]);
    mults[{g, h}] = flats[gh] * pinv(src);
  }
  std::vector<CorrIso> twos;
  for (const auto& ta : shape.twoarrows) twos.push_back(Mat::Identity(corrs[ta.to].dim(), corrs[ta.from].dim()));
  return make_functor(shape, gen.algebras, corrs, mults, twos);
}

CorrFunctor constant_functor(const Shape& shape, const Algebra& d) {
  Correspondence id = identity_correspondence(d);
  std::vector<Correspondence> corrs(shape.num_arrows(), id);
  std::map<std::pair<int, int>, CorrIso> mults;
  CorrIso m = right_unit(id);
  for (auto p : composable_pairs(shape)) mults[p] = m;
  std::vector<CorrIso> twos(shape.twoarrows.size(), Mat::Identity(id.dim(), id.dim()));
  return make_functor(shape, std::vector<Algebra>(shape.num_objects(), d), corrs, mults, twos);
}

namespace {

bool ideal_basis_of(const Correspondence& c, std::vector<Mat>& w) {
  if (c.hom) {
    w = c.ideal_basis;
    return true;
  }
  return underlying_hom(c, &w).has_value();
}

}  // namespace

Element module_element(const Correspondence& c, const Vec& v) {
  std::vector<Mat> w;
  if (!ideal_basis_of(c, w)) throw Error(ErrorKind::NotEvaluable, "correspondence does not come from a *-homomorphism");
  const Algebra& b = c.target();
  Element x = zero_element(b);
  for (int j = 0; j < b.num_blocks(); ++j) {
    int m = c.module.mult[j], n = b.blocks[j];
    Mat xj(m, n);
    for (int r = 0; r < m; ++r)
      for (int col = 0; col < n; ++col) xj(r, col) = v(c.module.index(j, r, col));
    x[j] = w[j] * xj;
  }
  return x;
}

Vec module_coords(const Correspondence& c, const Element& x) {
  std::vector<Mat> w;
  if (!ideal_basis_of(c, w)) throw Error(ErrorKind::NotEvaluable, "correspondence does not come from a *-homomorphism");
  const Algebra& b = c.target();
  Vec v(c.dim());
  for (int j = 0; j < b.num_blocks(); ++j) {
    Mat xj = w[j].adjoint() * x[j];
    for (int r = 0; r < c.module.mult[j]; ++r)
      for (int col = 0; col < b.blocks[j]; ++col) v(c.module.index(j, r, col)) = xj(r, col);
  }
  return v;
}

std::optional<CorrIso> hom_composition_mult(const Correspondence& eh, const Correspondence& eg,
                                            const Correspondence& egh, double tol) {
  std::optional<StarHom> ah = underlying_hom(eh), ag = underlying_hom(eg), agh = underlying_hom(egh);
  if (!ah || !ag || !agh) return std::nullopt;
  if (ah->target != ag->source || agh->source != ah->source || agh->target != ag->target) return std::nullopt;
  if (opnorm(agh->map - ag->map * ah->map) > tol) return std::nullopt;
  Tensor t = tensor(eh, eg);
  const int dh = eh.dim(), dg = eg.dim();
  Mat m(egh.dim(), dh * dg);
  for (int k = 0; k < dh; ++k) {
    Element xk = apply_hom(*ag, module_element(eh, Vec::Unit(dh, k)));
    for (int l = 0; l < dg; ++l) m.col(k * dg + l) = module_coords(egh, multiply(xk, module_element(eg, Vec::Unit(dg, l))));
  }
  return m * t.lift;
}

}  // namespace corrcolim

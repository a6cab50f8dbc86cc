#include "corrcolim/serialize.hpp"

#include "corrcolim/errors.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace corrcolim {

double report_float(double x) {
  x = snap(x);
  if (x == 0.0 || !std::isfinite(x)) return x == 0.0 ? 0.0 : x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

Json to_json(cplx z) { return Json::array({report_float(z.real()), report_float(z.imag())}); }

Json to_json(const Mat& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

Json to_json(const Algebra& a) { return Json{{"blocks", a.blocks}, {"label", a.label}}; }

Json to_json(const Report& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks)
    checks.push_back(
        Json{{"name", c.name}, {"defect", report_float(c.defect)}, {"pass", c.pass}, {"witness", c.witness}});
  Json out{{"pass", r.pass()},
           {"max_defect", report_float(r.max_defect())},
           {"tol", r.tol},
           {"checks", checks},
           {"notes", r.notes}};
  if (const Check* f = r.first_failure()) out["first_failure"] = Json{{"name", f->name}, {"witness", f->witness}};
  return out;
}

Json to_json(const ClosedForm& c) {
  Json meta = Json::object();
  for (const auto& [k, v] : c.meta) meta[k] = v;
  return Json{{"kind", c.kind},       {"description", c.description}, {"evaluable", c.evaluable},
              {"morita", c.morita},   {"blocks", c.blocks},           {"meta", meta}};
}

namespace {

const char* kind_name(Generator::Kind k) {
  switch (k) {
    case Generator::Kind::Alg: return "alg";
    case Generator::Kind::Mod: return "mod";
    default: return "free";
  }
}

Json poly_json(const Presentation& p, const Poly& q) {
  Json out = Json::array();
  for (const auto& m : q) {
    Json word = Json::array();
    for (const auto& f : m.factors) word.push_back(p.generators[f.gen].name + (f.star ? "*" : ""));
    out.push_back(Json{{"coeff", to_json(m.coeff)}, {"word", word}});
  }
  return out;
}

Poly poly_from_json(const Presentation& p, const Json& j) {
  Poly out;
  for (const auto& m : j) {
    Monomial mono;
    mono.coeff = complex_from_json(m.at("coeff"));
    for (const auto& w : m.at("word")) {
      std::string s = w.get<std::string>();
      bool star = !s.empty() && s.back() == '*';
      if (star) s.pop_back();
      int g = p.find_generator(s);
      if (g < 0) throw Error(ErrorKind::NameError, "unknown generator " + s);
      mono.factors.push_back(Factor{g, star});
    }
    out.push_back(mono);
  }
  return out;
}

}  // namespace

Json to_json(const Presentation& p) {
  Json gens = Json::array();
  for (const auto& g : p.generators)
    gens.push_back(Json{{"name", g.name}, {"kind", kind_name(g.kind)}, {"owner", g.owner}, {"index", g.index}});
  Json rels = Json::array();
  for (const auto& r : p.relations)
    rels.push_back(Json{{"lhs", poly_json(p, r.lhs)}, {"rhs", poly_json(p, r.rhs)}, {"clause", r.clause}});
  Json out{{"generators", gens}, {"relations", rels}, {"comments", p.comments}, {"reduction", p.reduction}};
  out["closed_form"] = p.closed_form ? to_json(*p.closed_form) : Json(nullptr);
  std::map<std::string, int> families;
  for (const auto& r : p.relations) ++families[r.clause];
  out["relation_families"] = families;
  return out;
}

Json to_json(const Correspondence& c) {
  Json left = Json::array();
  for (const auto& per : c.left) {
    Json blocks = Json::array();
    for (const auto& b : per) blocks.push_back(to_json(b));
    left.push_back(blocks);
  }
  return Json{{"source", to_json(c.source)}, {"target", to_json(c.target())}, {"mult", c.module.mult},
              {"dim", c.dim()},              {"left", left}};
}

Json to_json(const CorrFunctor& f) {
  const Shape& s = f.shape;
  Json arrows = Json::array();
  for (const auto& a : s.arrows)
    arrows.push_back(Json{{"name", a.name},
                          {"source", s.objects[a.source]},
                          {"target", s.objects[a.target]},
                          {"identity", a.identity}});
  Json algs = Json::array();
  for (const auto& a : f.algebras) algs.push_back(to_json(a));
  Json corrs = Json::object();
  for (int g = 0; g < s.num_arrows(); ++g) corrs[s.arrows[g].name] = to_json(f.corr(g));
  Json mults = Json::array();
  for (const auto& [k, m] : f.mults)
    mults.push_back(Json{{"g", s.arrows[k.first].name}, {"h", s.arrows[k.second].name}, {"matrix", to_json(m)}});
  return Json{{"shape", Json{{"kind", to_string(s.kind)}, {"objects", s.objects}, {"arrows", arrows}}},
              {"algebras", algs},
              {"corrs", corrs},
              {"mults", mults}};
}

Json to_json(const Transformation& t) {
  const Shape& s = t.source->shape;
  Json gammas = Json::object(), vees = Json::object();
  for (int x = 0; x < s.num_objects(); ++x) gammas[s.objects[x]] = to_json(t.gammas[x]);
  for (int g = 0; g < s.num_arrows(); ++g) vees[s.arrows[g].name] = to_json(t.vees[g]);
  return Json{{"gammas", gammas}, {"vees", vees}};
}

Json to_json(const RepAssignment& r, const Presentation& p) {
  Json images = Json::object();
  for (size_t i = 0; i < r.images.size(); ++i) images[p.generators[i].name] = to_json(r.images[i]);
  Json out{{"base", to_json(r.base)}, {"mult", r.mult}, {"images", images}};
  if (r.domain) out["domain"] = to_json(*r.domain);
  return out;
}

Json to_json(const Wedderburn& w) {
  return Json{{"blocks", w.algebra.blocks},
              {"iso_defect", report_float(w.iso_defect)},
              {"attempts", w.attempts},
              {"certificate", to_json(w.iso)}};
}

Json to_json(const ChainEval& c) {
  Json out{{"evaluable", c.evaluable}, {"bratteli", c.bratteli}, {"reason", c.reason}};
  out["blocks"] = c.evaluable ? Json(c.algebra.blocks) : Json(nullptr);
  return out;
}

cplx complex_from_json(const Json& j) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  if (!j.is_array() || j.size() != 2) throw Error(ErrorKind::ParseError, "complex numbers are [re, im] pairs");
  return cplx(j[0].get<double>(), j[1].get<double>());
}

Mat matrix_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorKind::ParseError, "matrices are arrays of rows");
  const int rows = static_cast<int>(j.size());
  const int cols = rows ? static_cast<int>(j[0].size()) : 0;
  Mat m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(j[r].size()) != cols) throw Error(ErrorKind::ShapeError, "ragged matrix");
    for (int c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r][c]);
  }
  return m;
}

Algebra algebra_from_json(const Json& j) {
  return new_algebra(j.at("blocks").get<std::vector<int>>(), j.value("label", std::string()));
}

Presentation presentation_from_json(const Json& j) {
  Presentation p;
  for (const auto& g : j.at("generators")) {
    std::string k = g.at("kind").get<std::string>();
    Generator::Kind kind = k == "alg" ? Generator::Kind::Alg : k == "mod" ? Generator::Kind::Mod : Generator::Kind::Free;
    p.generators.push_back(Generator{kind, g.value("owner", -1), g.value("index", 0), g.at("name").get<std::string>()});
  }
  for (const auto& r : j.at("relations"))
    p.relations.push_back(Relation{normalize(poly_from_json(p, r.at("lhs"))), normalize(poly_from_json(p, r.at("rhs"))),
                                   r.value("clause", std::string())});
  if (j.contains("comments")) p.comments = j["comments"].get<std::vector<std::string>>();
  p.reduction = j.value("reduction", std::string());
  if (j.contains("closed_form") && !j["closed_form"].is_null()) {
    const Json& c = j["closed_form"];
    ClosedForm cf;
    cf.kind = c.value("kind", std::string());
    cf.description = c.value("description", std::string());
    cf.evaluable = c.value("evaluable", false);
    cf.morita = c.value("morita", false);
    cf.blocks = c.value("blocks", std::vector<int>{});
    if (c.contains("meta"))
      for (const auto& [k, v] : c["meta"].items()) cf.meta[k] = v.get<std::string>();
    p.closed_form = cf;
  }
  return p;
}

RepAssignment assignment_from_json(const Json& j, const Presentation& p) {
  RepAssignment r;
  r.base = algebra_from_json(j.at("base"));
  r.mult = j.at("mult").get<std::vector<int>>();
  if (static_cast<int>(r.mult.size()) != r.base.num_blocks())
    throw Error(ErrorKind::ShapeError, "mult needs one entry per block of the base");
  const Json& im = j.at("images");
  for (const auto& g : p.generators) {
    if (!im.contains(g.name)) throw Error(ErrorKind::InvalidAssignment, "no image for generator " + g.name);
    r.images.push_back(matrix_from_json(im[g.name]));
  }
  for (const auto& [k, v] : im.items())
    if (p.find_generator(k) < 0) throw Error(ErrorKind::NameError, "image given for unknown generator " + k);
  if (j.contains("domain") && !j["domain"].is_null()) r.domain = matrix_from_json(j["domain"]);
  return r;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace corrcolim

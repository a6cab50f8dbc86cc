#include "corrcolim/commands.hpp"

#include "corrcolim/elaborate.hpp"
#include "corrcolim/errors.hpp"
#include "corrcolim/serialize.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <functional>
#include <sstream>

namespace corrcolim {

namespace {

struct Flags {
  double tol = kDefaultTol;
  int depth = 3;
  std::uint64_t seed = 0;
  std::string out;
  bool no_reduce = false;
  std::string first, second, cone;
  std::vector<std::string> files;
};

struct Outcome {
  Json json;
  bool pass = true;
};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json(const std::string& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::ParseError, path + ": " + e.what());
  }
}

Elaborated load(const Flags& f) {
  return elaborate(dsl::parse_diagram_dsl(read_file(f.files.at(0))), ElabOptions{f.depth, f.tol});
}

Json report_json(const Report& r) { return to_json(r); }

Outcome cmd_validate(const Flags& fl) {
  Elaborated e = load(fl);
  Report r(fl.tol);
  r.merge(validate_shape(e.shape), "shape:");
  for (const auto& d : e.diagrams) r.merge(validate_functor(*d.functor, fl.tol), d.name + ":");
  for (const auto& [name, t] : e.transformations) r.merge(validate_transformation(*t, fl.tol), name + ":");
  for (const auto& [name, c] : e.cones) r.merge(validate_representation(c, fl.tol), name + ":");
  return {report_json(r), r.pass()};
}

Outcome cmd_colimit(const Flags& fl) {
  Elaborated e = load(fl);
  EmitOptions opts;
  opts.reduce = !fl.no_reduce;
  return {to_json(emit_presentation(*e.first().functor, opts, fl.tol)), true};
}

Outcome cmd_recognize(const Flags& fl) {
  Elaborated e = load(fl);
  auto cf = recognize_closed_form(*e.first().functor, fl.tol);
  return {Json{{"shape", to_string(e.shape.kind)}, {"closed_form", cf ? to_json(*cf) : Json(nullptr)}}, true};
}

Outcome cmd_eval(const Flags& fl) {
  Elaborated e = load(fl);
  const CorrFunctor& f = *e.first().functor;
  switch (f.shape.kind) {
    case ShapeKind::Group: {
      FellEval fe = eval_fell_bundle(f, fl.tol, fl.seed);
      Json j = to_json(fe.dec);
      j["kind"] = "FellBundleSectionAlgebra";
      return {j, fe.dec.iso_defect <= fl.tol};
    }
    case ShapeKind::Discrete:
      return {Json{{"kind", "DirectSum"},
                   {"blocks", eval_direct_sum(f).blocks},
                   {"iso_defect", 0.0},
                   {"certificate", nullptr}},
              true};
    case ShapeKind::Chain: {
      ChainEval c = eval_stabilized_chain(f, fl.tol);
      Json j = to_json(c);
      j["kind"] = "StabilizedChain";
      j["iso_defect"] = 0.0;
      j["certificate"] = c.bratteli;
      return {j, c.evaluable};
    }
    default:
      throw Error(ErrorKind::NotEvaluable, std::string("no concrete evaluation for ") + to_string(f.shape.kind) +
                                               " diagrams; use colimit or recognize");
  }
}

Outcome cmd_repcheck(const Flags& fl) {
  if (fl.files.size() != 2) throw InputError("repcheck takes a presentation file and an assignment file");
  Presentation p = presentation_from_json(read_json(fl.files[0]));
  RepAssignment r = assignment_from_json(read_json(fl.files[1]), p);
  Report rep = check_representation(p, r, fl.tol);
  return {report_json(rep), rep.pass()};
}

std::shared_ptr<const Transformation> find_transformation(const Elaborated& e, const std::string& name, size_t fallback) {
  if (name.empty()) {
    if (fallback >= e.transformations.size())
      throw Error(ErrorKind::CompositionError, "compose needs two transformations in the document");
    return e.transformations[fallback].second;
  }
  for (const auto& [n, t] : e.transformations)
    if (n == name) return t;
  throw Error(ErrorKind::NameError, "unknown transformation " + name);
}

Outcome cmd_compose(const Flags& fl) {
  Elaborated e = load(fl);
  auto t01 = find_transformation(e, fl.first, 0);
  auto t12 = find_transformation(e, fl.second, 1);
  if (t01->target != t12->source)
    throw Error(ErrorKind::CompositionError, "the first transformation does not end where the second starts");
  Report r(fl.tol);
  r.merge(validate_transformation(*t01, fl.tol), "first:");
  r.merge(validate_transformation(*t12, fl.tol), "second:");
  Transformation c = compose_transformations(*t01, *t12);
  r.merge(validate_transformation(c, fl.tol), "composite:");
  Json j = report_json(r);
  j["composite"] = to_json(c);
  return {j, r.pass()};
}

Outcome cmd_validate_cone(const Flags& fl) {
  Elaborated e = load(fl);
  Report r(fl.tol);
  bool any = false;
  for (const auto& [name, rep] : e.cones) {
    if (!fl.cone.empty() && name != fl.cone) continue;
    any = true;
    r.merge(validate_representation(rep, fl.tol), name + ":");
    try {
      Transformation t = representation_to_cone(rep, fl.tol);
      r.merge(validate_transformation(t, fl.tol), name + ":cone:");
    } catch (const Error& err) {
      r.flag(name + ":cone", false, std::string(to_string(err.kind())) + ": " + err.detail());
    }
  }
  if (!any) throw Error(ErrorKind::NameError, fl.cone.empty() ? "the document declares no cone" : "unknown cone " + fl.cone);
  return {report_json(r), r.pass()};
}

Json error_json(const Error& e) {
  Json j{{"kind", to_string(e.kind())}, {"message", e.detail()}};
  if (auto* s = dynamic_cast<const dsl::SyntaxError*>(&e)) {
    j["line"] = s->span.line;
    j["col"] = s->span.col;
  }
  return Json{{"pass", false}, {"error", j}};
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Colimits of diagrams of finite-dimensional C*-correspondences", "corrcolim"};
  app.require_subcommand(1, 1);
  Flags fl;
  std::function<Outcome(const Flags&)> handler;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--tol", fl.tol, "numerical tolerance")->capture_default_str();
    sub->add_option("--depth", fl.depth, "coherence truncation depth for infinite shapes")->capture_default_str();
    sub->add_option("--seed", fl.seed, "seed for randomized steps")->capture_default_str();
    sub->add_option("--out", fl.out, "write the JSON report here instead of stdout");
  };
  auto dsl_command = [&](const char* name, const char* help, Outcome (*fn)(const Flags&)) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("file", fl.files, "diagram description")->required()->expected(1);
    common(sub);
    sub->callback([&handler, fn] { handler = fn; });
    return sub;
  };

  dsl_command("validate", "validate shape, diagrams, transformations and cones", cmd_validate);
  dsl_command("colimit", "emit the universal presentation of the colimit", cmd_colimit)
      ->add_flag("--no-reduce", fl.no_reduce, "keep all generators of the unreduced presentation");
  dsl_command("recognize", "name the colimit when a closed form is known", cmd_recognize);
  dsl_command("eval", "compute the colimit as a multimatrix algebra", cmd_eval);
  CLI::App* rep = app.add_subcommand("repcheck", "check a representation of a presentation");
  rep->add_option("files", fl.files, "presentation JSON and assignment JSON")->required()->expected(2);
  common(rep);
  rep->callback([&handler] { handler = cmd_repcheck; });
  CLI::App* comp = dsl_command("compose", "compose two transformations and validate the result", cmd_compose);
  comp->add_option("--first", fl.first, "first transformation (default: first declared)");
  comp->add_option("--second", fl.second, "second transformation (default: second declared)");
  dsl_command("validate-cone", "validate cones and their conversion to transformations", cmd_validate_cone)
      ->add_option("--cone", fl.cone, "only this cone");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  Outcome res;
  try {
    res = handler(fl);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    res = {error_json(e), false};
  }
  const std::string text = dump(res.json);
  if (fl.out.empty()) {
    out << text;
  } else {
    std::ofstream f(fl.out, std::ios::binary);
    if (!f) {
      err << "error: cannot write " << fl.out << "\n";
      return kExitUsage;
    }
    f << text;
  }
  return res.pass ? kExitPass : kExitFail;
}

}  // namespace corrcolim

#ifndef CORRCOLIM_ELABORATE_HPP
#define CORRCOLIM_ELABORATE_HPP

#include "corrcolim/dsl.hpp"
#include "corrcolim/transform.hpp"

#include <map>
#include <memory>

namespace corrcolim {

struct ElabOptions {
  int depth = 3;  // truncation for endo and free_monoid shapes
  double tol = kDefaultTol;
};

struct ElabDiagram {
  std::string name;
  std::shared_ptr<const CorrFunctor> functor;
  std::map<std::string, int> object_names;  // object and algebra names
  std::map<std::string, int> arrow_names;   // arrow and correspondence names
};

struct Elaborated {
  Shape shape;
  std::vector<ElabDiagram> diagrams;  // declaration order, "main" first when present
  std::vector<std::pair<std::string, std::shared_ptr<const Transformation>>> transformations;
  std::vector<std::pair<std::string, RepresentationData>> cones;

  const ElabDiagram& diagram(const std::string& name) const;
  const ElabDiagram& first() const;
};

Shape build_shape(const dsl::ShapeDecl& s, int depth = 3);
Correspondence build_correspondence(const dsl::CorrExpr& e, const Algebra& source, const Algebra& target,
                                    double tol = kDefaultTol);
Mat matrix_literal(const dsl::MatLit& m);

Elaborated elaborate(const dsl::DslDocument& doc, const ElabOptions& opts = {});

// V on composite arrows from V on their factors, through the transformation square.
void fill_composite_vees(Transformation& t, std::vector<bool>& have);

}  // namespace corrcolim

#endif

#ifndef CORRCOLIM_DIAGRAM_HPP
#define CORRCOLIM_DIAGRAM_HPP

#include "corrcolim/corr.hpp"
#include "corrcolim/shapes.hpp"

#include <map>
#include <utility>

namespace corrcolim {

// Functor from a shape into correspondences. For g: x -> y, E_g goes from A_x to A_y;
// mults[(g,h)] : E_h (x) E_g -> E_{g o h}.
struct CorrFunctor {
  Shape shape;
  std::vector<Algebra> algebras;
  std::vector<Correspondence> corrs;  // per arrow; identities hold identity correspondences
  std::map<std::pair<int, int>, CorrIso> mults;
  std::vector<CorrIso> twos;  // v_a : E_from -> E_to

  const Correspondence& corr(int g) const { return corrs[g]; }
  // mu_{g,h}, falling back to the unitor when g or h is an identity.
  CorrIso mult(int g, int h) const;
};

CorrFunctor make_functor(const Shape& shape, const std::vector<Algebra>& algebras,
                         const std::vector<Correspondence>& corrs, const std::map<std::pair<int, int>, CorrIso>& mults,
                         const std::vector<CorrIso>& twos = {});

Report validate_functor(const CorrFunctor& f, double tol = kDefaultTol);

// The two sides of the associativity square for one triple, as maps
// (E01 (x) E12) (x) E23 -> E03.
struct CoherenceRoutes {
  Mat route1, route2;
};
CoherenceRoutes coherence_routes(const CorrFunctor& f, const Triple& t);

struct GeneratorData {
  std::vector<Algebra> algebras;              // per object of the shape
  std::vector<Correspondence> generators;     // per generating arrow, in shape.generators order
};

// Full functor on a preset shape: E_w is the iterated tensor product along the word of w
// and every mu is the canonical associator composite.
CorrFunctor extend_from_generators(const Shape& shape, const GeneratorData& gen);

CorrFunctor constant_functor(const Shape& shape, const Algebra& d);

// xi (x) eta -> alpha_g(xi) eta when both factors and the composite come from *-homs
// with alpha_{gh} = alpha_g alpha_h. Returns nothing when that does not apply.
std::optional<CorrIso> hom_composition_mult(const Correspondence& eh, const Correspondence& eg,
                                            const Correspondence& egh, double tol = kDefaultTol);

// Element of the target algebra represented by a vector of a hom-built correspondence, and back.
Element module_element(const Correspondence& c, const Vec& v);
Vec module_coords(const Correspondence& c, const Element& x);

std::string triple_name(const Shape& s, const Triple& t);
std::string pair_name(const Shape& s, int g, int h);

}  // namespace corrcolim

#endif

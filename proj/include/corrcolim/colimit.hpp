#ifndef CORRCOLIM_COLIMIT_HPP
#define CORRCOLIM_COLIMIT_HPP

#include "corrcolim/transform.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace corrcolim {

struct Generator {
  enum class Kind { Alg, Mod, Free };
  Kind kind = Kind::Free;
  int owner = -1;  // object for Alg, arrow for Mod
  int index = 0;   // matrix unit of A_x or basis vector of E_g
  std::string name;
};

struct Factor {
  int gen = 0;
  bool star = false;
  auto operator<=>(const Factor&) const = default;
};

// An empty factor list is the unit.
struct Monomial {
  cplx coeff{1.0, 0.0};
  std::vector<Factor> factors;
};
using Poly = std::vector<Monomial>;

// Sort monomials by word, merge equal words, snap coefficients, drop zeros.
Poly normalize(Poly p);

struct Relation {
  Poly lhs, rhs;
  std::string clause;
};

struct ClosedForm {
  std::string kind;
  std::string description;
  bool evaluable = false;
  bool morita = false;
  std::vector<int> blocks;
  std::map<std::string, std::string> meta;
};

struct Presentation {
  std::vector<Generator> generators;
  std::vector<Relation> relations;
  std::optional<ClosedForm> closed_form;
  std::vector<std::string> comments;
  std::string reduction;  // "", "corner" or "unital"

  int find_generator(const std::string& name) const;
  std::vector<const Relation*> clause(const std::string& c) const;
};

struct EmitOptions {
  bool reduce = true;     // corner/unital reductions for coequalisers and endomorphisms over C
  bool all_arrows = false;  // ModGens for every arrow even in generator mode
};

Presentation emit_presentation(const CorrFunctor& f, const EmitOptions& opts = {}, double tol = kDefaultTol);

std::optional<ClosedForm> recognize_closed_form(const CorrFunctor& f, double tol = kDefaultTol);

// Induced arrow between colimits for a transformation into an evaluable diagram.
struct Functoriality {
  Report report;
  RepresentationData induced;  // cone of the source diagram over the evaluated target colimit
  std::vector<int> module_mult;  // D-multiplicities of the induced correspondence
};
Functoriality colim_functoriality_check(std::shared_ptr<const Transformation> phi, double tol = kDefaultTol,
                                        std::uint64_t seed = 0);
// The unitary (+)W_x (x) id induced by a modification between two such transformations.
Report colim_modification_check(const Modification& m, double tol = kDefaultTol, std::uint64_t seed = 0);

std::string render_text(const Presentation& p);
std::string monomial_text(const Presentation& p, const Monomial& m);

}  // namespace corrcolim

#endif

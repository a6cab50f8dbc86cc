#ifndef CORRCOLIM_SHAPES_HPP
#define CORRCOLIM_SHAPES_HPP

#include "corrcolim/report.hpp"

#include <optional>
#include <string>
#include <vector>

namespace corrcolim {

enum class ShapeKind { Category, Group, Discrete, Pushout, Coequalizer, EndoN, FreeMonoid, Chain, TwoCategory };

const char* to_string(ShapeKind k);

struct Arrow {
  std::string name;
  int source = 0, target = 0;
  bool identity = false;
  // Generating arrows this one factors through, in tensor order
  // (E_w = E_{w[0]} (x) E_{w[1]} (x) ...). Empty for identities.
  std::vector<int> word;
};

struct TwoArrow {
  std::string name;
  int from = 0, to = 0;  // parallel arrows
};

// A small category with composition table comp[g][h] = g o h (h first), -1 when
// undefined. Infinite presets are truncated at `depth` and flagged generator_mode.
struct Shape {
  ShapeKind kind = ShapeKind::Category;
  std::vector<std::string> objects;
  std::vector<Arrow> arrows;
  std::vector<std::vector<int>> comp;
  std::vector<int> identity_of;  // per object
  std::vector<int> generators;   // arrows carrying data in generator mode
  bool generator_mode = false;
  int depth = 0;
  int param = 0;  // n for discrete, k for free monoid, N for chains
  std::optional<int> stabilized_from;
  std::vector<TwoArrow> twoarrows;
  std::vector<std::vector<int>> vcomp;  // vcomp[b][a] = b . a, -1 when undefined
  std::vector<std::string> group_elements;

  int num_objects() const { return static_cast<int>(objects.size()); }
  int num_arrows() const { return static_cast<int>(arrows.size()); }
  int compose(int g, int h) const { return comp[g][h]; }
  int object_index(const std::string& name) const;
  int arrow_index(const std::string& name) const;
  bool is_generator(int g) const;
};

Shape discrete_shape(int n);
Shape pushout_shape();
Shape coequalizer_shape();
Shape endo_shape(int depth);
Shape free_monoid_shape(int k, int depth);
Shape chain_shape(int n, std::optional<int> stabilized_from = std::nullopt);
Shape group_shape(const std::vector<std::string>& elements, const std::vector<std::vector<std::string>>& table);

struct ArrowDecl {
  std::string name, source, target;
};
struct ComposeDecl {
  std::string g, h, result;  // g o h = result
};
Shape category_shape(const std::vector<std::string>& objects, const std::vector<ArrowDecl>& arrows,
                     const std::vector<ComposeDecl>& compose);

struct TwoArrowDecl {
  std::string name, from, to;
};
Shape two_category_shape(const std::vector<std::string>& objects, const std::vector<ArrowDecl>& arrows,
                         const std::vector<ComposeDecl>& compose, const std::vector<TwoArrowDecl>& twoarrows,
                         const std::vector<ComposeDecl>& vcompose);

Report validate_shape(const Shape& s);

// Pairs (g,h) of non-identity arrows with g o h defined.
std::vector<std::pair<int, int>> composable_pairs(const Shape& s);
// Triples (g01,g12,g23) of non-identity arrows with every composite defined.
struct Triple {
  int g01, g12, g23;
};
std::vector<Triple> composable_triples(const Shape& s);

}  // namespace corrcolim

#endif

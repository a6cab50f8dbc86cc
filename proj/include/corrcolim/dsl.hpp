#ifndef CORRCOLIM_DSL_HPP
#define CORRCOLIM_DSL_HPP

#include "corrcolim/errors.hpp"
#include "corrcolim/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace corrcolim::dsl {

// 1-based line and column of the first token of a node.
struct Span {
  int line = 0, col = 0;
  // Spans never take part in syntax comparisons.
  bool operator==(const Span&) const { return true; }
};

using MatLit = std::vector<std::vector<cplx>>;

struct NamedArrow {
  std::string name, source, target;

  bool operator==(const NamedArrow&) const = default;
};
struct ComposeLit {
  std::string g, h, result;

  bool operator==(const ComposeLit&) const = default;
};

struct ShapeDecl {
  std::string kind;  // discrete, pushout, coequalizer, endo, free_monoid, chain, group, category, two_category
  std::vector<int> args;
  std::optional<int> stabilized_from;
  std::vector<std::string> elements;              // group
  std::vector<std::vector<std::string>> table;    // group
  std::vector<std::string> objects;               // category
  std::vector<NamedArrow> arrows;                 // category
  std::vector<ComposeLit> compose;                // category
  std::vector<NamedArrow> twoarrows;              // two_category, source/target are 1-arrows
  std::vector<ComposeLit> vcompose;               // two_category
  Span span;

  bool operator==(const ShapeDecl&) const = default;
};

struct ActLit {
  int block = 0, r = 0, s = 0;
  std::vector<MatLit> images;  // one per target block

  bool operator==(const ActLit&) const = default;
};

struct CorrExpr {
  enum class Kind { Std, Identity, FromHom, FromExpectation, Module };
  Kind kind = Kind::Std;
  int n = 0;                        // std(n)
  std::optional<MatLit> mult;       // from_hom: multiplicity matrix; from_expectation: inclusion multiplicities
  std::vector<MatLit> ad;           // from_hom: unitary of the target, per block
  std::optional<MatLit> map;        // from_expectation: expectation on matrix units
  std::vector<cplx> weights;        // from_expectation onto C: E(a) = sum_j w_j Tr(a_j)
  std::vector<int> module_mult;     // module
  std::vector<ActLit> acts;         // module
  Span span;

  bool operator==(const CorrExpr&) const = default;
};

struct AlgebraDecl {
  std::string name;
  std::vector<int> blocks;
  Span span;

  bool operator==(const AlgebraDecl&) const = default;
};

struct CorrDecl {
  std::string name;
  std::optional<std::string> source, target;
  CorrExpr expr;
  Span span;

  bool operator==(const CorrDecl&) const = default;
};

struct MultDecl {
  enum class Kind { Canonical, Scale, Matrix };
  std::string g, h;
  Kind kind = Kind::Canonical;
  cplx scale{1.0, 0.0};
  MatLit matrix;
  Span span;

  bool operator==(const MultDecl&) const = default;
};

struct TwoMapDecl {
  std::string name;
  MatLit matrix;
  Span span;

  bool operator==(const TwoMapDecl&) const = default;
};

struct DiagramBlock {
  std::string name;
  std::vector<AlgebraDecl> algebras;
  std::vector<CorrDecl> corrs;
  std::vector<MultDecl> mults;
  std::vector<TwoMapDecl> twomaps;
  Span span;

  bool operator==(const DiagramBlock&) const = default;
  bool empty() const { return algebras.empty() && corrs.empty() && mults.empty() && twomaps.empty(); }
};

struct GammaLit {
  std::string object;
  CorrExpr expr;
  Span span;

  bool operator==(const GammaLit&) const = default;
};

struct MatrixListLit {
  std::string arrow;
  std::vector<MatLit> matrices;
  Span span;

  bool operator==(const MatrixListLit&) const = default;
};

// Transformation F => G with gamma per object and V per non-identity arrow.
struct TransformationBlock {
  std::string name, from, to;
  std::vector<GammaLit> gammas;
  std::vector<MatrixListLit> vees;  // exactly one matrix each
  Span span;

  bool operator==(const TransformationBlock&) const = default;
};

// Cone over a diagram into a multimatrix algebra, given as representation data.
struct ConeBlock {
  std::string name, over = "main";
  std::vector<int> target;
  std::vector<GammaLit> gammas;
  std::vector<MatrixListLit> esses;  // S_g per basis vector of E_g
  Span span;

  bool operator==(const ConeBlock&) const = default;
};

struct DslDocument {
  ShapeDecl shape;
  DiagramBlock main = [] { DiagramBlock b; b.name = "main"; return b; }();  // top-level statements
  std::vector<DiagramBlock> diagrams;
  std::vector<TransformationBlock> transformations;
  std::vector<ConeBlock> cones;

  bool operator==(const DslDocument&) const = default;
};

// Parse failure with the position of the offending token.
class SyntaxError : public Error {
 public:
  SyntaxError(const Span& at, const std::string& msg);
  Span span;
};

DslDocument parse_diagram_dsl(const std::string& text);
std::string print_dsl(const DslDocument& doc);

// Structural equality of the abstract syntax; spans are ignored.
bool same_syntax(const DslDocument& a, const DslDocument& b);

}  // namespace corrcolim::dsl

#endif

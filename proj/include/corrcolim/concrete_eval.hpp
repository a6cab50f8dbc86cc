#ifndef CORRCOLIM_CONCRETE_EVAL_HPP
#define CORRCOLIM_CONCRETE_EVAL_HPP

#include "corrcolim/transform.hpp"

#include <cstdint>

namespace corrcolim {

Algebra eval_direct_sum(const CorrFunctor& f);

// Associative *-algebra on C^dim: e_i e_j = lmul[i].col(j), x^* = star * conj(x).
struct ConvolutionAlgebra {
  int dim = 0;
  std::vector<Mat> lmul;
  Mat star;
  Vec unit;
  std::vector<int> fibre_offset;  // per arrow, for section algebras
  double star_residual = 0;

  Mat left(const Vec& x) const;
  Vec product(const Vec& x, const Vec& y) const { return left(x) * y; }
  Vec adjoint(const Vec& x) const { return star * x.conjugate(); }
};

// The algebra itself, written in its matrix-unit basis.
ConvolutionAlgebra abstract_algebra(const Algebra& a);
// Sections of the bundle g -> E_g, with eta . xi = mu_{g,h}(eta (x) xi) for eta in E_h, xi in E_g.
ConvolutionAlgebra convolution_algebra(const CorrFunctor& f, double tol = kDefaultTol);
Report validate_convolution(const ConvolutionAlgebra& c, double tol = kDefaultTol);

struct Wedderburn {
  Algebra algebra;
  Mat iso;  // algebra.dim x c.dim, a *-isomorphism on coordinates
  double iso_defect = 0;
  int attempts = 0;
};
Wedderburn wedderburn_decompose(const ConvolutionAlgebra& c, double tol = 1e-8, std::uint64_t seed = 0);

struct FellEval {
  ConvolutionAlgebra conv;
  Wedderburn dec;
};
FellEval eval_fell_bundle(const CorrFunctor& f, double tol = 1e-8, std::uint64_t seed = 0);

struct ChainEval {
  bool evaluable = false;
  Algebra algebra;
  std::vector<StarHom> to_limit;  // per object
  std::vector<std::vector<std::vector<int>>> bratteli;
  std::string reason;
};
ChainEval eval_stabilized_chain(const CorrFunctor& f, double tol = kDefaultTol);

// A colimit realized inside a multimatrix algebra D, with the images of all generators.
struct ConcreteColimit {
  std::string kind;
  Algebra d;
  std::vector<Element> units;                      // p_x
  std::vector<std::vector<Element>> alg_images;    // per object, per matrix unit
  std::vector<std::vector<Element>> mod_images;    // per arrow; empty for identities and non-generators
  double iso_defect = 0;
};
ConcreteColimit evaluate_colimit(const CorrFunctor& f, double tol = 1e-8, std::uint64_t seed = 0);

// gamma_x = p_x D with S_g(xi) acting by left multiplication.
RepresentationData tautological_representation(const ConcreteColimit& cc, std::shared_ptr<const CorrFunctor> f);

// Fill S for composite arrows from generators through mu.
void fill_composite_esses(const CorrFunctor& f, std::vector<std::vector<Mat>>& esses, std::vector<bool>& have);

}  // namespace corrcolim

#endif

#ifndef CORRCOLIM_REPCHECK_HPP
#define CORRCOLIM_REPCHECK_HPP

#include "corrcolim/colimit.hpp"
#include "corrcolim/concrete_eval.hpp"

namespace corrcolim {

// Generator images as operators on the canonical Hilbert module over `base` with multiplicities `mult`.
struct RepAssignment {
  Algebra base;
  std::vector<int> mult;
  std::vector<Mat> images;  // indexed like Presentation::generators
  std::optional<Mat> domain;  // columns spanning the subspace where relations are also measured

  int dim() const { return make_module(base, mult).dim(); }
};

// Checks "clause (k)" per clause, "domain:clause (k)" when a domain is given; notes nondegenerate=.
Report check_representation(const Presentation& p, const RepAssignment& r, double tol = kDefaultTol);
double relation_defect(const Relation& rel, const std::vector<Mat>& images, int dim, const Mat* domain = nullptr);

// The direct sum of the gamma_x as one module, with embeddings J_x.
struct SummedModule {
  HilbertModule module;
  std::vector<Mat> embed;  // per object
};
SummedModule sum_modules(const RepresentationData& r);

RepAssignment assignment_from_representation(const Presentation& p, const RepresentationData& r);
RepAssignment tautological_assignment(const Presentation& p, const ConcreteColimit& cc);

// Splits the module by the images of the unit projections p_x.
RepresentationData induced_cone_from_representation(const Presentation& p, const RepAssignment& r,
                                                    std::shared_ptr<const CorrFunctor> f, double tol = kDefaultTol);

// A unitary D-linear U with U a(s) = b(s) U for every generator s.
std::optional<Mat> find_intertwiner(const RepAssignment& a, const RepAssignment& b, double tol = kDefaultTol,
                                    std::uint64_t seed = 0);
double intertwining_defect(const RepAssignment& a, const RepAssignment& b, const Mat& u);

// (+)W_x between the summed modules of two representations, and back.
Mat intertwiner_from_modification(const Modification& m, const RepresentationData& r1, const RepresentationData& r2);
Modification modification_from_intertwiner(const Mat& u, std::shared_ptr<const Transformation> c1,
                                           std::shared_ptr<const Transformation> c2, const RepresentationData& r1,
                                           const RepresentationData& r2);

}  // namespace corrcolim

#endif

#ifndef CORRCOLIM_TRANSFORM_HPP
#define CORRCOLIM_TRANSFORM_HPP

#include "corrcolim/diagram.hpp"

#include <memory>

namespace corrcolim {

// gamma_x : A0_x -> A1_x, V_g : gamma_x (x) E1_g -> E0_g (x) gamma_y.
struct Transformation {
  std::shared_ptr<const CorrFunctor> source, target;
  std::vector<Correspondence> gammas;
  std::vector<CorrIso> vees;
};

struct Modification {
  std::shared_ptr<const Transformation> source, target;
  std::vector<CorrIso> dubs;  // W_x : gamma1_x -> gamma2_x
};

// lambda^{-1} o rho : gamma (x) A1 -> A0 (x) gamma
CorrIso canonical_vee(const Correspondence& gamma);

Transformation identity_transformation(std::shared_ptr<const CorrFunctor> f);
Report validate_transformation(const Transformation& t, double tol = kDefaultTol);

// Both sides of the square for the pair (g,h), as maps (gamma_x (x) E1_h) (x) E1_g -> E0_{gh} (x) gamma_z.
struct TransformationRoutes {
  Mat route_a, route_b;
};
TransformationRoutes transformation_routes(const Transformation& t, int g, int h);

Report validate_modification(const Modification& m, double tol = kDefaultTol);
Transformation compose_transformations(const Transformation& t01, const Transformation& t12);

// Solves the linear intertwiner system and returns a unitary solution when one exists.
std::optional<Modification> find_modification(std::shared_ptr<const Transformation> t1,
                                              std::shared_ptr<const Transformation> t2, double tol = kDefaultTol,
                                              std::uint64_t seed = 0);

// W1 (x) W2 between composites t1 o u1 and t2 o u2.
Modification horizontal_compose(const Modification& m1, const Modification& m2,
                                std::shared_ptr<const Transformation> src, std::shared_ptr<const Transformation> dst);

// Cone data: gamma_x : A_x -> D (left action phi_x), S_g(k) : gamma_y -> gamma_x for each basis vector k of E_g.
struct RepresentationData {
  std::shared_ptr<const CorrFunctor> functor;
  Algebra d;
  std::vector<Correspondence> gammas;
  std::vector<std::vector<Mat>> esses;  // per arrow, per basis vector
};

Report validate_representation(const RepresentationData& r, double tol = kDefaultTol);
bool is_constant_target(const Transformation& t, Algebra* d = nullptr);
RepresentationData cone_to_representation(const Transformation& cone);
Transformation representation_to_cone(const RepresentationData& r, double tol = kDefaultTol);

// S_{gh}(mu(eta (x) xi)) = S_h(eta) S_g(xi), used to fill in composite arrows from generators.
std::vector<Mat> composite_esses(const CorrFunctor& f, int g, int h, const std::vector<Mat>& sg,
                                 const std::vector<Mat>& sh);

}  // namespace corrcolim

#endif

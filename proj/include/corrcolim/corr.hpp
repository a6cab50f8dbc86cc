#ifndef CORRCOLIM_CORR_HPP
#define CORRCOLIM_CORR_HPP

#include "corrcolim/algebra.hpp"

#include <optional>
#include <string>
#include <vector>

namespace corrcolim {

// Canonical model: block j is an m_j x n_j matrix, <x,y>_j = x_j^* y_j.
// Vector coordinates are ordered block, row, column.
struct HilbertModule {
  Algebra base;
  std::vector<int> mult;

  int dim() const;
  int offset(int block) const;
  int index(int block, int r, int c) const { return offset(block) + r * base.blocks[block] + c; }
  bool operator==(const HilbertModule& o) const { return base == o.base && mult == o.mult; }
};

HilbertModule make_module(const Algebra& base, const std::vector<int>& mult);

// Right multiplication by a base element, as a dim x dim matrix on coordinates.
Mat right_full(const HilbertModule& m, const Element& b);
Mat right_full(const HilbertModule& m, int basis_idx);
// B-valued inner product, as coordinates in the base algebra.
Vec inner(const HilbertModule& m, const Vec& x, const Vec& y);

// Adjointable maps between canonical modules are sums of U_j (x) I_{n_j}.
Mat map_full(const HilbertModule& from, const HilbertModule& to, const std::vector<Mat>& blocks);
std::vector<Mat> map_blocks(const HilbertModule& from, const HilbertModule& to, const Mat& full);
double right_linearity_defect(const HilbertModule& from, const HilbertModule& to, const Mat& full);
// <Ux,Uy> = <x,y> on the canonical model, measured as max_j ||U_j^* U_j - I||.
double isometry_defect(const HilbertModule& from, const HilbertModule& to, const Mat& full);

struct RankOne {
  Vec xi, eta;  // the operator zeta -> xi <eta, zeta>
};

struct Correspondence {
  Algebra source;
  HilbertModule module;
  std::vector<std::vector<Mat>> left;            // [source basis][target block], m_j x m_j
  std::vector<std::vector<RankOne>> certificate;  // per source basis element
  std::optional<StarHom> hom;                     // set when built from a *-homomorphism
  std::vector<Mat> ideal_basis;                   // with hom: n_j x m_j isometries into target blocks

  const Algebra& target() const { return module.base; }
  int dim() const { return module.dim(); }
};

// Isomorphisms of correspondences are stored as plain matrices on canonical coordinates.
using CorrIso = Mat;

Correspondence make_correspondence(const Algebra& source, const HilbertModule& module,
                                   std::vector<std::vector<Mat>> left);
Mat left_full(const Correspondence& c, int basis_idx);
Mat left_full(const Correspondence& c, const Vec& acoords);
Mat rank_one_full(const HilbertModule& m, const RankOne& t);
std::vector<std::vector<int>> multiplicity_matrix(const Correspondence& c, double tol = kDefaultTol);

Correspondence identity_correspondence(const Algebra& a);
Correspondence zero_correspondence(const Algebra& source, const Algebra& target);
// C^n over C with the scalar left action.
Correspondence standard_correspondence(int n);

// Raw module: coordinates on an arbitrary basis, right action per matrix unit, and
// form[k][r*n_k+s](u,v) = <e_u, e_v> entry (r,s) of block k. form[k] may hold only
// the (0,0) entry when positivity is not checked.
struct RawModule {
  int dim = 0;
  Algebra base;
  std::vector<Mat> right;
  std::vector<std::vector<Mat>> form;
};

struct Canonical {
  HilbertModule module;
  Mat quotient;  // canonical dim x raw dim, preserves inner products
  Mat lift;      // right inverse of quotient
};

Canonical canonicalize_module(const RawModule& raw, double tol = kDefaultTol, bool check_positive = true);

Report validate_correspondence(const Correspondence& c, double tol = kDefaultTol);
Report validate_iso(const CorrIso& u, const Correspondence& from, const Correspondence& to,
                    double tol = kDefaultTol);

struct Tensor {
  Correspondence corr;
  Mat embed;  // simple tensors: e_a (x) f_b at column a*dim(F)+b
  Mat lift;
};

Tensor tensor(const Correspondence& e, const Correspondence& f);
// f (x) g between interior tensor products, given raw maps f: E->E', g: F->F'.
Mat tensor_maps(const Tensor& src, const Tensor& dst, const Mat& f, const Mat& g);

CorrIso associator(const Correspondence& e, const Correspondence& f, const Correspondence& g);
CorrIso left_unit(const Correspondence& e);   // A (x)_A E -> E
CorrIso right_unit(const Correspondence& e);  // E (x)_B B -> E

struct IsoSearch {
  std::optional<CorrIso> iso;
  std::vector<std::vector<int>> mult1, mult2;
  std::string witness;
  double defect = 0;
};
IsoSearch find_isomorphism(const Correspondence& c1, const Correspondence& c2, double tol = kDefaultTol);

Correspondence from_star_hom(const StarHom& h, bool strict = false);
// Any correspondence whose multiplicities fit inside the target blocks comes from a *-hom.
std::optional<StarHom> underlying_hom(const Correspondence& c, std::vector<Mat>* ideal_basis = nullptr);

Correspondence direct_sum(const std::vector<Correspondence>& parts);

struct Decomposition {
  std::vector<Correspondence> parts;
  CorrIso reassembly;  // from the direct sum of parts onto the input
  double defect = 0;
};
Decomposition decompose_by_projections(const Correspondence& e, const std::vector<Algebra>& summands);
Decomposition decompose_into_product(const Correspondence& e, const std::vector<Algebra>& summands);

Correspondence correspondence_from_expectation(const Algebra& a, const StarHom& inclusion,
                                               const Mat& expectation, double tol = kDefaultTol);

// Unitary in the commutant of the left action, chosen at random.
CorrIso random_automorphism(const Correspondence& c, Rng& rng);

// Coordinates of algebra elements acting by left/right multiplication on the algebra itself.
Mat left_mult_matrix(const Algebra& a, const Element& x);
Mat right_mult_matrix(const Algebra& a, const Element& x);

}  // namespace corrcolim

#endif

#ifndef CORRCOLIM_ALGEBRA_HPP
#define CORRCOLIM_ALGEBRA_HPP

#include "corrcolim/linalg.hpp"
#include "corrcolim/report.hpp"

#include <string>
#include <vector>

namespace corrcolim {

// Direct sum of full matrix blocks M_{n_0} + M_{n_1} + ...
// The matrix-unit basis is ordered by block, then row, then column.
struct Algebra {
  std::vector<int> blocks;
  std::string label;

  bool is_zero() const { return blocks.empty(); }
  int num_blocks() const { return static_cast<int>(blocks.size()); }
  int dim() const;
  int offset(int block) const;
  int index(int block, int r, int s) const { return offset(block) + r * blocks[block] + s; }

  struct Unit {
    int block, r, s;
  };
  Unit unit(int idx) const;

  bool operator==(const Algebra& o) const { return blocks == o.blocks; }
  bool operator!=(const Algebra& o) const { return !(*this == o); }
};

Algebra new_algebra(const std::vector<int>& blocks, const std::string& label = "");
Algebra direct_sum(const std::vector<Algebra>& parts, const std::string& label = "");
bool isomorphic(const Algebra& a, const Algebra& b);

// One n_j x n_j matrix per block.
using Element = std::vector<Mat>;

Element zero_element(const Algebra& a);
Element unit_element(const Algebra& a);
Element matrix_unit(const Algebra& a, int idx);
Element block_unit(const Algebra& a, int block);
Vec to_coords(const Algebra& a, const Element& x);
Element from_coords(const Algebra& a, const Vec& v);

Element multiply(const Element& x, const Element& y);
Element adjoint(const Element& x);
Element add(const Element& x, const Element& y, cplx beta = 1.0);
Element scale(const Element& x, cplx c);
void check_shape(const Algebra& a, const Element& x);

double operator_norm(const Algebra& a, const Element& x);

// Complex-linear map given on matrix units; map is target.dim x source.dim.
struct StarHom {
  Algebra source;
  Algebra target;
  Mat map;
};

Element apply_hom(const StarHom& h, const Element& x);
Vec apply_coords(const StarHom& h, const Vec& x);
Report validate_star_hom(const StarHom& h, double tol = kDefaultTol);
bool is_unital(const StarHom& h, double tol = kDefaultTol);

StarHom identity_hom(const Algebra& a);
StarHom compose(const StarHom& g, const StarHom& f);  // g after f

// Block i of the source repeated mult[j][i] times down the diagonal of target block j.
StarHom standard_hom(const Algebra& source, const Algebra& target,
                     const std::vector<std::vector<int>>& mult);
// x -> u h(x) u^*, u a unitary element of the target.
StarHom conjugate(const StarHom& h, const Element& u);
// mult[j][i] = multiplicity of source block i inside target block j.
std::vector<std::vector<int>> multiplicity_matrix(const StarHom& h, double tol = kDefaultTol);

// Structure constants used by several modules: the product e_a e_b as coordinates.
Vec product_coords(const Algebra& a, int i, int j);

}  // namespace corrcolim

#endif

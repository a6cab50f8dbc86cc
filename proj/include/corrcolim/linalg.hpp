#ifndef CORRCOLIM_LINALG_HPP
#define CORRCOLIM_LINALG_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace corrcolim {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Rng = std::mt19937_64;

// Relative threshold used for rank decisions (null spaces, pivots).
inline constexpr double kRankTol = 1e-9;

double opnorm(const Mat& m);
Mat pinv(const Mat& m, double tol = kRankTol);
Mat kron(const Mat& a, const Mat& b);

// Orthonormal basis of ker(m), columns.
Mat null_space(const Mat& m, double tol = kRankTol);
int rank_of(const Mat& m, double tol = kRankTol);

// Gram-Schmidt for a hermitian psd form with largest-diagonal pivoting.
// Ties go to the smaller index, so the output is reproducible.
// coeffs is d x r with coeffs^* G coeffs = I.
struct PivotedCholesky {
  std::vector<int> pivots;
  Mat coeffs;
  int rank = 0;
  double min_eig_hint = 0;  // most negative residual diagonal seen
};
PivotedCholesky pivoted_cholesky(const Mat& g, double tol = kRankTol);

// Orthonormal basis (columns) of the column space of m, reproducible.
Mat range_basis(const Mat& m, double tol = kRankTol);

// Unitary part of the polar decomposition.
Mat polar_unitary(const Mat& m);

Mat random_matrix(int rows, int cols, Rng& rng);
Mat random_unitary(int n, Rng& rng);
Mat random_hermitian(int n, Rng& rng);

// Round near-integers and tiny values, for exact-looking coefficients.
cplx snap(cplx z, double eps = 1e-12);
double snap(double x, double eps = 1e-12);

}  // namespace corrcolim

#endif

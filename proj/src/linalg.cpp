#include "corrcolim/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace corrcolim {

double opnorm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

Mat pinv(const Mat& m, double tol) {
  if (m.size() == 0) return Mat::Zero(m.cols(), m.rows());
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  double cut = tol * std::max(1.0, s(0));
  Mat sinv = Mat::Zero(s.size(), s.size());
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > cut) sinv(i, i) = 1.0 / s(i);
  return svd.matrixV() * sinv * svd.matrixU().adjoint();
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Mat null_space(const Mat& m, double tol) {
  const int n = static_cast<int>(m.cols());
  if (n == 0) return Mat(0, 0);
  if (m.rows() == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  double cut = tol * std::max(1.0, s.size() ? s(0) : 0.0);
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++r;
  return svd.matrixV().rightCols(n - r);
}

int rank_of(const Mat& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& s = svd.singularValues();
  double cut = tol * std::max(1.0, s(0));
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++r;
  return r;
}

PivotedCholesky pivoted_cholesky(const Mat& g, double tol) {
  const int d = static_cast<int>(g.rows());
  PivotedCholesky out;
  out.coeffs = Mat(d, 0);
  if (d == 0) return out;
  Eigen::VectorXd resid(d);
  double scale = 0;
  for (int i = 0; i < d; ++i) {
    resid(i) = g(i, i).real();
    scale = std::max(scale, std::abs(resid(i)));
  }
  scale = std::max(scale, 1.0);
  std::vector<Vec> ws;
  std::vector<bool> used(d, false);
  while (static_cast<int>(ws.size()) < d) {
    double best = -1;
    for (int i = 0; i < d; ++i)
      if (!used[i]) best = std::max(best, resid(i));
    if (best <= tol * scale) break;
    int p = -1;
    for (int i = 0; i < d; ++i)
      if (!used[i] && resid(i) >= best - 1e-12 * scale) {
        p = i;
        break;
      }
    Vec v = Vec::Zero(d);
    v(p) = 1.0;
    // two passes of G-orthogonalisation
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& w : ws) {
        cplx c = w.dot(g * v);
        v -= c * w;
      }
    double n2 = (v.dot(g * v)).real();
    used[p] = true;
    if (n2 <= tol * scale) {
      resid(p) = 0;
      continue;
    }
    v /= std::sqrt(n2);
    Vec gv = g * v;
    for (int i = 0; i < d; ++i) {
      if (used[i]) continue;
      resid(i) -= std::norm(gv(i));
      out.min_eig_hint = std::min(out.min_eig_hint, resid(i));
    }
    ws.push_back(v);
    out.pivots.push_back(p);
  }
  out.rank = static_cast<int>(ws.size());
  out.coeffs = Mat(d, out.rank);
  for (int k = 0; k < out.rank; ++k) out.coeffs.col(k) = ws[k];
  return out;
}

Mat range_basis(const Mat& m, double tol) {
  if (m.cols() == 0) return Mat(m.rows(), 0);
  Mat g = m.adjoint() * m;
  auto pc = pivoted_cholesky(g, tol);
  return m * pc.coeffs;
}

Mat polar_unitary(const Mat& m) {
  if (m.size() == 0) return m;
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

Mat random_matrix(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = cplx(nd(rng), nd(rng));
  return m;
}

Mat random_unitary(int n, Rng& rng) {
  if (n == 0) return Mat(0, 0);
  Mat z = random_matrix(n, n, rng);
  Eigen::HouseholderQR<Mat> qr(z);
  Mat q = qr.householderQ() * Mat::Identity(n, n);
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    cplx d = r(i, i);
    double a = std::abs(d);
    if (a > 0) q.col(i) *= d / a;
  }
  return q;
}

Mat random_hermitian(int n, Rng& rng) {
  Mat z = random_matrix(n, n, rng);
  return 0.5 * (z + z.adjoint());
}

double snap(double x, double eps) {
  double r = std::round(x);
  if (std::abs(x - r) < eps) x = r;
  if (x == 0.0) x = 0.0;  // drop negative zero
  return x;
}

cplx snap(cplx z, double eps) { return {snap(z.real(), eps), snap(z.imag(), eps)}; }

}  // namespace corrcolim

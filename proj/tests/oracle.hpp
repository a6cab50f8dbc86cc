#ifndef CORRCOLIM_TESTS_ORACLE_HPP
#define CORRCOLIM_TESTS_ORACLE_HPP

// Brute-force block sizes of a finite-dimensional C*-algebra given by structure constants.
// Shares nothing with the library beyond Eigen.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using cd = std::complex<double>;
using M = Eigen::MatrixXcd;
using V = Eigen::VectorXcd;

struct Structure {
  int dim = 0;
  // prod[i][j] = coordinates of e_i e_j
  std::vector<std::vector<V>> prod;
};

inline M left_regular(const Structure& s, const V& x) {
  M l = M::Zero(s.dim, s.dim);
  for (int i = 0; i < s.dim; ++i)
    for (int j = 0; j < s.dim; ++j) l.col(j) += x(i) * s.prod[i][j];
  return l;
}

// Sorted block sizes n_i: the eigenspaces of left multiplication by a generic central
// element are the ranges p_i A of the minimal central projections, of dimension n_i^2.
inline std::vector<int> block_sizes(const Structure& s, unsigned seed = 7) {
  const int n = s.dim;
  M eq = M::Zero(n * n, n);  // z e_i - e_i z = 0 for every i
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) eq.block(i * n, k, n, 1) = s.prod[k][i] - s.prod[i][k];
  Eigen::FullPivLU<M> lu(eq);
  lu.setThreshold(1e-10);
  M center = lu.kernel();
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  V z = V::Zero(n);
  for (int c = 0; c < center.cols(); ++c) z += cd(g(rng), g(rng)) * center.col(c);
  Eigen::ComplexEigenSolver<M> es(left_regular(s, z), false);
  std::vector<cd> ev(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::vector<bool> used(n, false);
  std::vector<int> blocks;
  const double scale = std::max(1.0, z.norm());
  for (int i = 0; i < n; ++i) {
    if (used[i]) continue;
    int count = 0;
    for (int j = i; j < n; ++j)
      if (!used[j] && std::abs(ev[j] - ev[i]) < 1e-6 * scale) {
        used[j] = true;
        ++count;
      }
    int b = static_cast<int>(std::lround(std::sqrt(static_cast<double>(count))));
    blocks.push_back(b * b == count ? b : -count);
  }
  std::sort(blocks.begin(), blocks.end());
  return blocks;
}

// delta_g delta_h = omega(g,h) delta_{gh} on a group with multiplication table t.
inline Structure twisted_group_algebra(const std::vector<std::vector<int>>& t, const std::function<cd(int, int)>& omega) {
  const int n = static_cast<int>(t.size());
  Structure s{n, std::vector<std::vector<V>>(n, std::vector<V>(n, V::Zero(n)))};
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) s.prod[g][h](t[g][h]) = omega(g, h);
  return s;
}

// M_k x| G with g acting by Ad(u_g): basis e_rs delta_g at index g*k*k + r*k + s.
inline Structure crossed_product(int k, const std::vector<std::vector<int>>& t, const std::vector<M>& u) {
  const int n = static_cast<int>(t.size());
  const int d = n * k * k;
  Structure st{d, std::vector<std::vector<V>>(d, std::vector<V>(d, V::Zero(d)))};
  for (int g = 0; g < n; ++g)
    for (int a = 0; a < k * k; ++a)
      for (int h = 0; h < n; ++h)
        for (int b = 0; b < k * k; ++b) {
          M ea = M::Zero(k, k), eb = M::Zero(k, k);
          ea(a / k, a % k) = 1;
          eb(b / k, b % k) = 1;
          M prod = ea * u[g] * eb * u[g].adjoint();
          V& out = st.prod[g * k * k + a][h * k * k + b];
          for (int r = 0; r < k; ++r)
            for (int c = 0; c < k; ++c) out(t[g][h] * k * k + r * k + c) = prod(r, c);
        }
  return st;
}

using Table = std::vector<std::vector<int>>;  // t[g][h] = g o h, element 0 the identity

inline Table cyclic_table(int n) {
  Table t(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t[i][j] = (i + j) % n;
  return t;
}

// e, a, b, ab as the bit patterns 0..3
inline Table klein_table() {
  Table t(4, std::vector<int>(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) t[i][j] = i ^ j;
  return t;
}

// Permutations of {0,1,2} in lexicographic order, composed as functions.
inline Table symmetric3_table() {
  std::vector<std::vector<int>> perms;
  std::vector<int> p{0, 1, 2};
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  Table t(6, std::vector<int>(6));
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      std::vector<int> c{perms[i][perms[j][0]], perms[i][perms[j][1]], perms[i][perms[j][2]]};
      t[i][j] = static_cast<int>(std::find(perms.begin(), perms.end(), c) - perms.begin());
    }
  return t;
}

}  // namespace oracle

#endif

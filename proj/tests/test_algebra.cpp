#include "support.hpp"

#include <gtest/gtest.h>

using namespace corrcolim;

namespace {

Element random_element(const Algebra& a, Rng& rng) {
  Element x;
  for (int n : a.blocks) x.push_back(random_matrix(n, n, rng));
  return x;
}

double dist(const Element& x, const Element& y) {
  double d = 0;
  for (size_t j = 0; j < x.size(); ++j) d = std::max(d, opnorm(x[j] - y[j]));
  return d;
}

}  // namespace

TEST(Linalg, PinvNullSpaceRange) {
  Rng rng(1);
  Mat a = random_matrix(5, 3, rng);
  EXPECT_LT(opnorm(pinv(a) * a - Mat::Identity(3, 3)), 1e-10);
  Mat low = random_matrix(4, 2, rng) * random_matrix(2, 5, rng);
  EXPECT_EQ(rank_of(low), 2);
  Mat k = null_space(low);
  EXPECT_EQ(k.cols(), 3);
  EXPECT_LT(opnorm(low * k), 1e-10);
  EXPECT_LT(opnorm(k.adjoint() * k - Mat::Identity(3, 3)), 1e-10);
  Mat r = range_basis(low);
  EXPECT_EQ(r.cols(), 2);
  EXPECT_LT(opnorm(r * r.adjoint() * low - low), 1e-10);
}

TEST(Linalg, PolarAndRandomUnitary) {
  Rng rng(2);
  Mat u = random_unitary(4, rng);
  EXPECT_LT(opnorm(u.adjoint() * u - Mat::Identity(4, 4)), 1e-12);
  Mat p = polar_unitary(random_matrix(3, 3, rng));
  EXPECT_LT(opnorm(p.adjoint() * p - Mat::Identity(3, 3)), 1e-12);
  Mat h = random_hermitian(3, rng);
  EXPECT_LT(opnorm(h - h.adjoint()), 1e-14);
}

TEST(Linalg, SnapRoundsNearIntegers) {
  EXPECT_EQ(snap(1.0 + 1e-14), 1.0);
  EXPECT_EQ(snap(3e-15), 0.0);
  EXPECT_EQ(snap(0.5), 0.5);
  EXPECT_EQ(snap(cplx(2.0 - 1e-13, 1e-15)), cplx(2.0, 0.0));
}

TEST(Algebra, IndexingRoundTrip) {
  Algebra a = new_algebra({2, 3, 1});
  EXPECT_EQ(a.dim(), 4 + 9 + 1);
  for (int i = 0; i < a.dim(); ++i) {
    auto u = a.unit(i);
    EXPECT_EQ(a.index(u.block, u.r, u.s), i);
  }
  EXPECT_EQ(a.offset(2), 13);
}

TEST(Algebra, RejectsNonPositiveBlocks) {
  EXPECT_EQ(testing_support::error_kind([] { new_algebra({2, 0}); }), ErrorKind::InvalidBlock);
  EXPECT_EQ(testing_support::error_kind([] { new_algebra({-1}); }), ErrorKind::InvalidBlock);
}

TEST(Algebra, DirectSumAndIsomorphism) {
  Algebra s = direct_sum({new_algebra({2}), new_algebra({3, 1})});
  EXPECT_EQ(s.blocks, (std::vector<int>{2, 3, 1}));
  EXPECT_TRUE(isomorphic(new_algebra({1, 2}), new_algebra({2, 1})));
  EXPECT_FALSE(isomorphic(new_algebra({1, 1}), new_algebra({2})));
}

TEST(Algebra, ProductIsAssociativeAndStarAntimultiplicative) {
  Rng rng(3);
  Algebra a = new_algebra({2, 1, 3});
  for (int trial = 0; trial < 20; ++trial) {
    Element x = random_element(a, rng), y = random_element(a, rng), z = random_element(a, rng);
    EXPECT_LT(dist(multiply(multiply(x, y), z), multiply(x, multiply(y, z))), 1e-10);
    EXPECT_LT(dist(adjoint(multiply(x, y)), multiply(adjoint(y), adjoint(x))), 1e-12);
    EXPECT_LT(dist(from_coords(a, to_coords(a, x)), x), 1e-15);
  }
}

TEST(Algebra, OperatorNormIsMaxOverBlocks) {
  Algebra a = new_algebra({1, 2});
  Element x{Mat::Constant(1, 1, 3.0), Mat::Identity(2, 2) * 2.0};
  EXPECT_NEAR(operator_norm(a, x), 3.0, 1e-12);
}

TEST(StarHom, StandardHomRecoversMultiplicities) {
  Rng rng(4);
  std::uniform_int_distribution<int> d(0, 2);
  for (int trial = 0; trial < 20; ++trial) {
    Algebra src = new_algebra({1, 2});
    std::vector<std::vector<int>> m{{d(rng), d(rng)}, {d(rng), d(rng)}};
    std::vector<int> tb;
    for (const auto& row : m) tb.push_back(std::max(1, row[0] + 2 * row[1] + d(rng)));
    Algebra tgt = new_algebra(tb);
    StarHom h = standard_hom(src, tgt, m);
    EXPECT_TRUE(validate_star_hom(h).pass());
    EXPECT_EQ(multiplicity_matrix(h), m);
    Element u;
    for (int n : tb) u.push_back(random_unitary(n, rng));
    StarHom c = conjugate(h, u);
    EXPECT_TRUE(validate_star_hom(c).pass());
    EXPECT_EQ(multiplicity_matrix(c), m);
  }
}

TEST(StarHom, UnitalityAndComposition) {
  Algebra c = new_algebra({1}), m2 = new_algebra({2}), m4 = new_algebra({4});
  StarHom f = standard_hom(c, m2, {{2}});
  StarHom g = standard_hom(m2, m4, {{2}});
  EXPECT_TRUE(is_unital(f));
  EXPECT_FALSE(is_unital(standard_hom(c, m2, {{1}})));
  StarHom gf = compose(g, f);
  EXPECT_EQ(multiplicity_matrix(gf), (std::vector<std::vector<int>>{{4}}));
  EXPECT_THROW(standard_hom(m2, c, {{1}}), Error);
}

TEST(StarHom, NonMultiplicativeMapFails) {
  Algebra m2 = new_algebra({2});
  StarHom h = identity_hom(m2);
  h.map *= 2.0;
  Report r = validate_star_hom(h);
  EXPECT_FALSE(r.pass());
}

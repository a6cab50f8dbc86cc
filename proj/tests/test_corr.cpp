#include "support.hpp"

#include <gtest/gtest.h>

using namespace corrcolim;
using testing_support::error_kind;
using testing_support::random_correspondence;

TEST(HilbertModule, InnerProductIsBlockwise) {
  Algebra b = new_algebra({2, 1});
  HilbertModule m = make_module(b, {1, 2});
  EXPECT_EQ(m.dim(), 1 * 2 + 2 * 1);
  Rng rng(5);
  Vec x = random_matrix(m.dim(), 1, rng), y = random_matrix(m.dim(), 1, rng);
  Vec ip = inner(m, x, y);
  // block 0: x_0^* y_0 with x_0 a 1x2 row
  cplx e00 = std::conj(x(0)) * y(0);
  EXPECT_LT(std::abs(ip(b.index(0, 0, 0)) - e00), 1e-14);
  cplx e1 = std::conj(x(2)) * y(2) + std::conj(x(3)) * y(3);
  EXPECT_LT(std::abs(ip(b.index(1, 0, 0)) - e1), 1e-14);
}

TEST(HilbertModule, MapsAreRightLinear) {
  Rng rng(6);
  Algebra b = new_algebra({2, 3});
  HilbertModule from = make_module(b, {1, 2}), to = make_module(b, {2, 1});
  Mat u = map_full(from, to, {random_matrix(2, 1, rng), random_matrix(1, 2, rng)});
  EXPECT_LT(right_linearity_defect(from, to, u), 1e-12);
  auto blocks = map_blocks(from, to, u);
  EXPECT_LT(opnorm(map_full(from, to, blocks) - u), 1e-12);
}

TEST(Correspondence, StandardAndIdentityValidate) {
  EXPECT_TRUE(validate_correspondence(standard_correspondence(3)).pass());
  EXPECT_TRUE(validate_correspondence(identity_correspondence(new_algebra({2, 1}))).pass());
  EXPECT_EQ(standard_correspondence(3).dim(), 3);
}

TEST(Correspondence, RandomCorrespondencesValidate) {
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    Correspondence c = random_correspondence(new_algebra({1, 2}), new_algebra({3, 2}), rng);
    Report r = validate_correspondence(c);
    EXPECT_TRUE(r.pass()) << (r.first_failure() ? r.first_failure()->name : "");
  }
}

TEST(Correspondence, FromStarHomMatchesMultiplicities) {
  Algebra c = new_algebra({1}), m2 = new_algebra({2});
  Correspondence unital = from_star_hom(standard_hom(c, m2, {{2}}));
  EXPECT_EQ(unital.module.mult, std::vector<int>{2});
  Correspondence corner = from_star_hom(standard_hom(c, m2, {{1}}));
  EXPECT_EQ(corner.module.mult, std::vector<int>{1});
  EXPECT_TRUE(validate_correspondence(corner).pass());
  auto h = underlying_hom(unital);
  ASSERT_TRUE(h.has_value());
  EXPECT_EQ(multiplicity_matrix(*h), (std::vector<std::vector<int>>{{2}}));
}

TEST(Tensor, AssociatorAndUnitorsAreIsomorphisms) {
  Rng rng(8);
  Algebra a = new_algebra({1, 2}), b = new_algebra({2}), c = new_algebra({1, 1});
  for (int trial = 0; trial < 5; ++trial) {
    Correspondence e = random_correspondence(a, b, rng), f = random_correspondence(b, c, rng),
                   g = random_correspondence(c, a, rng);
    Tensor ef = tensor(e, f), fg = tensor(f, g);
    Correspondence ef_g = tensor(ef.corr, g).corr, e_fg = tensor(e, fg.corr).corr;
    Report r = validate_iso(associator(e, f, g), ef_g, e_fg);
    EXPECT_TRUE(r.pass()) << r.max_defect();
    EXPECT_TRUE(validate_iso(left_unit(e), tensor(identity_correspondence(a), e).corr, e).pass());
    EXPECT_TRUE(validate_iso(right_unit(e), tensor(e, identity_correspondence(b)).corr, e).pass());
  }
}

TEST(Tensor, DimensionsOverC) {
  Tensor t = tensor(standard_correspondence(2), standard_correspondence(3));
  EXPECT_EQ(t.corr.dim(), 6);
}

TEST(Tensor, PentagonOfAssociators) {
  Rng rng(9);
  Algebra a = new_algebra({1, 2});
  Correspondence e = random_correspondence(a, a, rng, 1), f = random_correspondence(a, a, rng, 1),
                 g = random_correspondence(a, a, rng, 1), h = random_correspondence(a, a, rng, 1);
  auto T = [](const Correspondence& x, const Correspondence& y) { return tensor(x, y).corr; };
  auto id = [](const Correspondence& x) { return Mat::Identity(x.dim(), x.dim()); };
  // ((ef)g)h -> (ef)(gh) -> e(f(gh))
  Mat route1 = associator(e, f, T(g, h)) * associator(T(e, f), g, h);
  // ((ef)g)h -> (e(fg))h -> e((fg)h) -> e(f(gh))
  Mat a1 = tensor_maps(tensor(T(T(e, f), g), h), tensor(T(e, T(f, g)), h), associator(e, f, g), id(h));
  Mat a3 = tensor_maps(tensor(e, T(T(f, g), h)), tensor(e, T(f, T(g, h))), id(e), associator(f, g, h));
  Mat route2 = a3 * associator(e, T(f, g), h) * a1;
  EXPECT_LT(opnorm(route1 - route2), 1e-10);
}

TEST(Isomorphism, FindsTwistedCopies) {
  Rng rng(10);
  for (int trial = 0; trial < 10; ++trial) {
    Correspondence c = random_correspondence(new_algebra({2, 1}), new_algebra({1, 3}), rng);
    CorrIso u = random_automorphism(c, rng);
    EXPECT_TRUE(validate_iso(u, c, c).pass());
    IsoSearch s = find_isomorphism(c, c);
    ASSERT_TRUE(s.iso.has_value());
    EXPECT_TRUE(validate_iso(*s.iso, c, c).pass());
  }
}

TEST(Isomorphism, ReportsMismatchedMultiplicities) {
  Algebra c = new_algebra({1}), m2 = new_algebra({2});
  IsoSearch s = find_isomorphism(from_star_hom(standard_hom(c, m2, {{2}})), from_star_hom(standard_hom(c, m2, {{1}})));
  EXPECT_FALSE(s.iso.has_value());
  EXPECT_FALSE(s.witness.empty());
}

TEST(Decomposition, ProjectionsReassembleUnitarily) {
  Rng rng(11);
  std::vector<Algebra> parts{new_algebra({2}), new_algebra({3, 1})};
  Algebra src = direct_sum(parts);
  for (int trial = 0; trial < 10; ++trial) {
    Correspondence e = random_correspondence(src, new_algebra({4}), rng);
    Decomposition d = decompose_by_projections(e, parts);
    ASSERT_EQ(d.parts.size(), 2u);
    EXPECT_LT(d.defect, 1e-10);
    EXPECT_TRUE(validate_iso(d.reassembly, direct_sum(d.parts), e).pass());
  }
}

TEST(Decomposition, ProductSplitsTargetBlocks) {
  Rng rng(12);
  std::vector<Algebra> parts{new_algebra({2}), new_algebra({1})};
  Correspondence e = random_correspondence(new_algebra({1}), direct_sum(parts), rng);
  Decomposition d = decompose_into_product(e, parts);
  EXPECT_EQ(d.parts[0].dim() + d.parts[1].dim(), e.dim());
  EXPECT_EQ(d.defect, 0.0);
}

TEST(Expectation, AveragingOnCPlusC) {
  Algebra a = new_algebra({1, 1}), c = new_algebra({1});
  Mat ex(1, 2);
  ex << 0.5, 0.5;
  Correspondence e = correspondence_from_expectation(a, standard_hom(c, a, {{1}, {1}}), ex);
  EXPECT_TRUE(validate_correspondence(e).pass());
  EXPECT_EQ(e.dim(), 2);
}

TEST(Expectation, NormalizedTraceOnM2) {
  Algebra m2 = new_algebra({2}), c = new_algebra({1});
  Mat ex = Mat::Zero(1, 4);
  ex(0, m2.index(0, 0, 0)) = 0.5;
  ex(0, m2.index(0, 1, 1)) = 0.5;
  Correspondence e = correspondence_from_expectation(m2, standard_hom(c, m2, {{2}}), ex);
  EXPECT_EQ(e.dim(), 4);
  EXPECT_EQ(multiplicity_matrix(e), (std::vector<std::vector<int>>{{2}}));
}

TEST(Expectation, RejectsNonIdempotentAndNonPositiveMaps) {
  Algebra a = new_algebra({1, 1}), c = new_algebra({1});
  StarHom incl = standard_hom(c, a, {{1}, {1}});
  Mat twice(1, 2);
  twice << 1.0, 1.0;
  EXPECT_EQ(error_kind([&] { correspondence_from_expectation(a, incl, twice); }), ErrorKind::NotAnExpectation);
  Mat neg(1, 2);
  neg << 1.5, -0.5;
  EXPECT_EQ(error_kind([&] { correspondence_from_expectation(a, incl, neg); }), ErrorKind::NotAnExpectation);
}

TEST(Canonicalize, NegativeFormIsRejected) {
  RawModule raw;
  raw.dim = 1;
  raw.base = new_algebra({1});
  raw.right = {Mat::Identity(1, 1)};
  raw.form = {{Mat::Constant(1, 1, -1.0)}};
  EXPECT_EQ(error_kind([&] { canonicalize_module(raw); }), ErrorKind::NotPositive);
}

TEST(Canonicalize, NullVectorsAreQuotiented) {
  RawModule raw;
  raw.dim = 2;
  raw.base = new_algebra({1});
  raw.right = {Mat::Identity(2, 2)};
  Mat g(2, 2);
  g << 1, 1, 1, 1;
  raw.form = {{g}};
  Canonical c = canonicalize_module(raw);
  EXPECT_EQ(c.module.dim(), 1);
  EXPECT_LT(opnorm(c.quotient * c.lift - Mat::Identity(1, 1)), 1e-12);
}

TEST(Correspondence, DegenerateActionIsReported) {
  Algebra c = new_algebra({1});
  HilbertModule m = make_module(c, {2});
  Mat p = Mat::Zero(2, 2);
  p(0, 0) = 1;
  Correspondence e = make_correspondence(c, m, {{p}});
  EXPECT_FALSE(validate_correspondence(e).pass());
}

#include "support.hpp"

#include <gtest/gtest.h>

using namespace corrcolim;
using namespace testing_support;

namespace {

Presentation unreduced(const CorrFunctor& f) {
  EmitOptions o;
  o.reduce = false;
  return emit_presentation(f, o);
}

// Conjugate every S by a D-linear unitary acting on the single gamma.
RepresentationData conjugated(const RepresentationData& r, const Mat& w) {
  RepresentationData out = r;
  for (int g = 0; g < r.functor->shape.num_arrows(); ++g) {
    if (r.functor->shape.arrows[g].identity) continue;
    for (auto& s : out.esses[g]) s = w * s * w.adjoint();
  }
  return out;
}

Mat random_module_unitary(const HilbertModule& m, Rng& rng) {
  std::vector<Mat> blocks;
  for (int n : m.mult) blocks.push_back(random_unitary(n, rng));
  return map_full(m, m, blocks);
}

}  // namespace

TEST(RepCheck, TruncatedShiftMeetsIsometryButNotCovariance) {
  Presentation p = presentation_from_json(Json::parse(slurp(fixture("cuntz_presentation.json"))));
  RepAssignment r = assignment_from_json(Json::parse(slurp(fixture("truncated_shift.json"))), p);
  Report rep = check_representation(p, r);
  ASSERT_NE(rep.find("domain:clause (3)"), nullptr);
  EXPECT_EQ(rep.find("domain:clause (3)")->defect, 0.0);
  // oracle: the norm of 1 - sum S_i S_i^* straight from the images
  const Mat& s0 = r.images[p.find_generator("S_1[0]")];
  const Mat& s1 = r.images[p.find_generator("S_1[1]")];
  double gap = opnorm(Mat::Identity(3, 3) - s0 * s0.adjoint() - s1 * s1.adjoint());
  EXPECT_NEAR(gap, 1.0, 1e-12);
  EXPECT_NEAR(rep.find("clause (4)")->defect, gap, 1e-12);
  EXPECT_GE(rep.find("clause (4)")->defect, 0.9);
}

TEST(RepCheck, RelationDefectOfSingleRelation) {
  Presentation p = emit_presentation(coequalizer_functor(1, 1));
  ASSERT_EQ(p.generators.size(), 1u);
  for (double theta : {0.0, 0.7, 2.5}) {
    RepAssignment r{new_algebra({1}), {1}, {Mat::Constant(1, 1, std::polar(1.0, theta))}, std::nullopt};
    EXPECT_TRUE(check_representation(p, r).pass());
  }
  RepAssignment bad{new_algebra({1}), {1}, {Mat::Constant(1, 1, 2.0)}, std::nullopt};
  for (const auto& rel : p.relations) EXPECT_NEAR(relation_defect(rel, bad.images, 1), 3.0, 1e-12);
  EXPECT_FALSE(check_representation(p, bad).pass());
}

TEST(RepCheck, ScalarUnitaryMatrixRepresentation) {
  // the entries of a 2x2 unitary satisfy the relations on C
  Rng rng(61);
  Presentation p = emit_presentation(coequalizer_functor(2, 2));
  Mat w = random_unitary(2, rng);
  RepAssignment r{new_algebra({1}), {1}, std::vector<Mat>(4), std::nullopt};
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j) r.images[p.find_generator(unitary_name(i, j))] = Mat::Constant(1, 1, w(i - 1, j - 1));
  EXPECT_TRUE(check_representation(p, r).pass());
  r.images[p.find_generator(unitary_name(1, 1))] *= 2.0;
  EXPECT_FALSE(check_representation(p, r).pass());
}

TEST(RepCheck, TautologicalAssignmentsSatisfyAllRelations) {
  Algebra m2 = new_algebra({2});
  Element d{Mat::Identity(2, 2)};
  d[0](1, 1) = -1;
  std::vector<std::shared_ptr<const CorrFunctor>> fs{
      std::make_shared<const CorrFunctor>(trivial_z2(new_algebra({1}))),
      std::make_shared<const CorrFunctor>(trivial_z2(new_algebra({1, 2}))),
      std::make_shared<const CorrFunctor>(
          group_functor(kZ2, kZ2Table, m2, {identity_hom(m2), conjugate(identity_hom(m2), d)}, [](int, int) { return cplx(1); })),
      load_fixture("s3.dsl").first().functor, load_fixture("klein_cocycle.dsl").first().functor};
  for (const auto& f : fs) {
    Presentation p = unreduced(*f);
    ConcreteColimit cc = evaluate_colimit(*f);
    Report rep = check_representation(p, tautological_assignment(p, cc));
    EXPECT_TRUE(rep.pass()) << (rep.first_failure() ? rep.first_failure()->name + " " + rep.first_failure()->witness : "");
  }
}

TEST(RepCheck, IntertwinerBetweenConjugateAssignments) {
  Rng rng(62);
  auto f = load_fixture("s3.dsl").first().functor;
  Presentation p = unreduced(*f);
  ConcreteColimit cc = evaluate_colimit(*f);
  RepAssignment a = tautological_assignment(p, cc);
  Mat u = random_module_unitary(make_module(a.base, a.mult), rng);
  RepAssignment b = a;
  for (auto& m : b.images) m = u * m * u.adjoint();
  auto found = find_intertwiner(a, b);
  ASSERT_TRUE(found.has_value());
  EXPECT_LT(intertwining_defect(a, b, *found), 1e-9);
  EXPECT_LT(opnorm(found->adjoint() * *found - Mat::Identity(found->cols(), found->cols())), 1e-9);
}

TEST(RepCheck, InequivalentAssignmentsHaveNoIntertwiner) {
  Presentation p = emit_presentation(coequalizer_functor(1, 1));
  RepAssignment a{new_algebra({1}), {1}, {Mat::Constant(1, 1, 1.0)}, std::nullopt};
  RepAssignment b{new_algebra({1}), {1}, {Mat::Constant(1, 1, -1.0)}, std::nullopt};
  EXPECT_FALSE(find_intertwiner(a, b).has_value());
  EXPECT_TRUE(find_intertwiner(a, a).has_value());
}

TEST(UniversalProperty, ConeRepresentationInducedConeRoundTrip) {
  Rng rng(63);
  auto f = std::make_shared<const CorrFunctor>(trivial_z2(new_algebra({1})));
  Presentation p = unreduced(*f);
  for (int trial = 0; trial < 10; ++trial) {
    Algebra d = trial % 2 ? new_algebra({2}) : new_algebra({1});
    RepresentationData r = random_z2_cone(f, d, rng);
    auto cone = std::make_shared<const Transformation>(representation_to_cone(r));
    RepAssignment ra = assignment_from_representation(p, r);
    ASSERT_TRUE(check_representation(p, ra).pass());
    RepresentationData back = induced_cone_from_representation(p, ra, f);
    ASSERT_TRUE(validate_representation(back).pass());
    auto cone2 = std::make_shared<const Transformation>(representation_to_cone(back));
    auto m = find_modification(cone, cone2);
    ASSERT_TRUE(m.has_value());
    EXPECT_LE(validate_modification(*m).max_defect(), 1e-9);
  }
}

TEST(UniversalProperty, ModificationsAndIntertwinersCorrespond) {
  Rng rng(64);
  auto f = std::make_shared<const CorrFunctor>(trivial_z2(new_algebra({1})));
  Presentation p = unreduced(*f);
  for (int trial = 0; trial < 10; ++trial) {
    Algebra d = trial % 2 ? new_algebra({2}) : new_algebra({1});
    RepresentationData r1 = random_z2_cone(f, d, rng);
    Mat w = random_module_unitary(r1.gammas[0].module, rng);
    RepresentationData r2 = conjugated(r1, w);
    auto c1 = std::make_shared<const Transformation>(representation_to_cone(r1));
    auto c2 = std::make_shared<const Transformation>(representation_to_cone(r2));

    auto m = find_modification(c1, c2);
    ASSERT_TRUE(m.has_value());
    Mat u = intertwiner_from_modification(*m, r1, r2);
    RepAssignment a1 = assignment_from_representation(p, r1), a2 = assignment_from_representation(p, r2);
    EXPECT_LT(intertwining_defect(a1, a2, u), 1e-9);

    auto found = find_intertwiner(a1, a2);
    ASSERT_TRUE(found.has_value());
    Modification back = modification_from_intertwiner(*found, c1, c2, r1, r2);
    EXPECT_LE(validate_modification(back).max_defect(), 1e-9);
    EXPECT_LT(opnorm(intertwiner_from_modification(back, r1, r2) - *found), 1e-9);
  }
}

TEST(SummedModule, EmbeddingsAreOrthogonalIsometries) {
  Elaborated e = load_fixture("discrete.dsl");
  auto f = e.first().functor;
  ConcreteColimit cc = evaluate_colimit(*f);
  RepresentationData r = tautological_representation(cc, f);
  SummedModule s = sum_modules(r);
  for (size_t x = 0; x < s.embed.size(); ++x)
    for (size_t y = 0; y < s.embed.size(); ++y) {
      Mat g = s.embed[x].adjoint() * s.embed[y];
      Mat expect = Mat::Zero(g.rows(), g.cols());
      if (x == y) expect.setIdentity();
      EXPECT_LT(opnorm(g - expect), 1e-12);
    }
}

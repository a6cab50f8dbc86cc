#include "support.hpp"

#include <gtest/gtest.h>

using namespace corrcolim;
using testing_support::error_kind;

namespace {

int count_identities(const Shape& s) {
  int n = 0;
  for (const auto& a : s.arrows) n += a.identity;
  return n;
}

}  // namespace

TEST(Shapes, PresetSizes) {
  EXPECT_EQ(discrete_shape(3).num_arrows(), 3);
  EXPECT_EQ(pushout_shape().num_arrows(), 5);
  EXPECT_EQ(coequalizer_shape().num_arrows(), 4);
  EXPECT_EQ(endo_shape(3).num_arrows(), 4);
  EXPECT_EQ(free_monoid_shape(2, 2).num_arrows(), 7);
  // 3 generators, 2 + 1 composites, 4 identities
  EXPECT_EQ(chain_shape(3).num_arrows(), 10);
  EXPECT_EQ(count_identities(chain_shape(3)), 4);
}

TEST(Shapes, AllPresetsValidate) {
  std::vector<Shape> shapes{discrete_shape(2),         pushout_shape(),   coequalizer_shape(),
                            endo_shape(4),             free_monoid_shape(3, 2), chain_shape(4, 2),
                            group_shape(testing_support::kZ2, testing_support::kZ2Table)};
  for (const auto& s : shapes) {
    Report r = validate_shape(s);
    EXPECT_TRUE(r.pass()) << to_string(s.kind);
  }
}

TEST(Shapes, EndoCompositionAddsLengthsUpToDepth) {
  Shape s = endo_shape(3);
  EXPECT_EQ(s.compose(1, 2), 3);
  EXPECT_EQ(s.compose(2, 1), 3);
  EXPECT_EQ(s.compose(0, 2), 2);
  EXPECT_EQ(s.compose(2, 2), -1);
  EXPECT_EQ(s.generators, std::vector<int>{1});
}

TEST(Shapes, FreeMonoidWordsConcatenate) {
  Shape s = free_monoid_shape(2, 2);
  int a = s.arrow_index("1"), b = s.arrow_index("2"), ab = s.arrow_index("12");
  ASSERT_GE(ab, 0);
  // arrows named by their tensor word: E_12 = E_1 (x) E_2
  EXPECT_EQ(s.arrows[ab].word, (std::vector<int>{a, b}));
  EXPECT_TRUE(s.compose(a, b) == ab || s.compose(b, a) == ab);
}

TEST(Shapes, ChainCompositesAndEndpoints) {
  Shape s = chain_shape(3);
  int c01 = s.arrow_index("c0_1"), c12 = s.arrow_index("c1_2"), c02 = s.arrow_index("c0_2");
  EXPECT_EQ(s.compose(c12, c01), c02);
  EXPECT_EQ(s.compose(c01, c12), -1);
  EXPECT_EQ(s.arrows[s.arrow_index("c0_3")].source, 0);
  EXPECT_EQ(s.arrows[s.arrow_index("c0_3")].target, 3);
  EXPECT_EQ(s.generators.size(), 3u);
}

TEST(Shapes, CountsOfComposableTriples) {
  EXPECT_EQ(composable_triples(endo_shape(3)).size(), 1u);
  EXPECT_EQ(composable_pairs(endo_shape(3)).size(), 3u);
  EXPECT_EQ(composable_triples(chain_shape(3)).size(), 1u);
  // every triple in a group of order 2 uses the non-identity arrow
  EXPECT_EQ(composable_triples(group_shape(testing_support::kZ2, testing_support::kZ2Table)).size(), 1u);
  EXPECT_TRUE(composable_triples(pushout_shape()).empty());
}

TEST(Shapes, GroupTableErrors) {
  EXPECT_EQ(error_kind([] { group_shape({"a", "b"}, {{"a", "a"}, {"a", "a"}}); }), ErrorKind::ShapeError);
  EXPECT_EQ(error_kind([] { group_shape({"e", "e"}, {{"e", "e"}, {"e", "e"}}); }), ErrorKind::NameError);
  EXPECT_EQ(error_kind([] { group_shape({"e", "a"}, {{"e", "a"}, {"a", "z"}}); }), ErrorKind::NameError);
  EXPECT_EQ(error_kind([] { group_shape({"e", "a"}, {{"e", "a"}}); }), ErrorKind::ShapeError);
}

TEST(Shapes, ParameterErrors) {
  EXPECT_EQ(error_kind([] { endo_shape(0); }), ErrorKind::ShapeError);
  EXPECT_EQ(error_kind([] { free_monoid_shape(0, 2); }), ErrorKind::ShapeError);
  EXPECT_EQ(error_kind([] { chain_shape(2, 5); }), ErrorKind::ShapeError);
}

TEST(Shapes, CategoryDeclarations) {
  Shape s = category_shape({"x", "y", "z"}, {{"f", "x", "y"}, {"g", "y", "z"}, {"h", "x", "z"}}, {{"g", "f", "h"}});
  EXPECT_TRUE(validate_shape(s).pass());
  EXPECT_EQ(s.compose(s.arrow_index("g"), s.arrow_index("f")), s.arrow_index("h"));
  EXPECT_EQ(error_kind([] { category_shape({"x"}, {{"f", "x", "w"}}, {}); }), ErrorKind::NameError);
  EXPECT_EQ(error_kind([] { category_shape({"x", "x"}, {}, {}); }), ErrorKind::NameError);
}

TEST(Shapes, BadCompositionIsReported) {
  // g o f declared to land on an arrow with the wrong endpoints
  Shape s = category_shape({"x", "y", "z"}, {{"f", "x", "y"}, {"g", "y", "z"}, {"k", "y", "z"}}, {{"g", "f", "k"}});
  Report r = validate_shape(s);
  EXPECT_FALSE(r.pass());
  ASSERT_NE(r.find("endpoints"), nullptr);
  EXPECT_FALSE(r.find("endpoints")->pass);
}

TEST(Shapes, NonAssociativeTableIsReported) {
  // a three-element "group" table with an identity that is not associative
  Shape s = group_shape({"e", "a", "b"}, {{"e", "a", "b"}, {"a", "a", "e"}, {"b", "e", "a"}});
  Report r = validate_shape(s);
  EXPECT_FALSE(r.pass());
  EXPECT_FALSE(r.find("associativity")->pass);
}

TEST(Shapes, TwoCategoryDeclarations) {
  Shape s = two_category_shape({"x", "y"}, {{"f", "x", "y"}, {"g", "x", "y"}}, {}, {{"t", "f", "g"}, {"u", "g", "f"}},
                               {});
  EXPECT_EQ(s.kind, ShapeKind::TwoCategory);
  EXPECT_EQ(s.twoarrows.size(), 2u);
  EXPECT_EQ(error_kind([] { two_category_shape({"x"}, {}, {}, {{"t", "f", "f"}}, {}); }), ErrorKind::NameError);
}

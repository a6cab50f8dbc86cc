#include "oracle.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace corrcolim;
using namespace testing_support;

namespace {

struct Group {
  std::vector<std::string> el;
  std::vector<std::vector<int>> t;  // t[g][h] = g o h
  std::vector<std::vector<std::string>> names() const {
    std::vector<std::vector<std::string>> out(t.size());
    for (size_t g = 0; g < t.size(); ++g)
      for (int h : t[g]) out[g].push_back(el[h]);
    return out;
  }
};

Group named(const oracle::Table& t, std::vector<std::string> el) { return Group{std::move(el), t}; }

Group cyclic(int n) {
  std::vector<std::string> el;
  for (int i = 0; i < n; ++i) el.push_back(i == 0 ? "e" : "r" + std::to_string(i));
  return named(oracle::cyclic_table(n), el);
}

Group klein() { return named(oracle::klein_table(), {"e", "a", "b", "ab"}); }

Group symmetric3() { return named(oracle::symmetric3_table(), {"012", "021", "102", "120", "201", "210"}); }

using Omega = std::function<cplx(int, int)>;

// The section algebra multiplies eta in E_h by xi in E_g into E_{g o h} with weight omega(g,h);
// the oracle spells that out on group elements directly.
std::vector<int> oracle_twisted(const Group& g, const Omega& omega) {
  const int n = static_cast<int>(g.el.size());
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[b][a] = g.t[a][b];
  return oracle::block_sizes(oracle::twisted_group_algebra(t, [&](int b, int a) { return omega(a, b); }));
}

std::vector<int> library_twisted(const Group& g, const Omega& omega) {
  Algebra c = new_algebra({1});
  std::vector<StarHom> ids(g.el.size(), identity_hom(c));
  CorrFunctor f = group_functor(g.el, g.names(), c, ids, omega);
  EXPECT_TRUE(validate_functor(f).pass());
  FellEval fe = eval_fell_bundle(f);
  EXPECT_LE(fe.dec.iso_defect, 1e-8);
  EXPECT_TRUE(validate_convolution(fe.conv).pass());
  auto b = fe.dec.algebra.blocks;
  std::sort(b.begin(), b.end());
  return b;
}

std::vector<int> library_inner(const Group& g, int k, const std::vector<Mat>& u) {
  Algebra a = new_algebra({k});
  std::vector<StarHom> alphas;
  for (const auto& m : u) alphas.push_back(conjugate(identity_hom(a), Element{m}));
  CorrFunctor f = group_functor(g.el, g.names(), a, alphas, [](int, int) { return cplx(1); });
  EXPECT_TRUE(validate_functor(f).pass());
  FellEval fe = eval_fell_bundle(f);
  EXPECT_LE(fe.dec.iso_defect, 1e-8);
  auto b = fe.dec.algebra.blocks;
  std::sort(b.begin(), b.end());
  return b;
}

const Omega kTrivial = [](int, int) { return cplx(1); };

}  // namespace

TEST(Oracle, KnownGroupAlgebras) {
  EXPECT_EQ(oracle_twisted(cyclic(2), kTrivial), (std::vector<int>{1, 1}));
  EXPECT_EQ(oracle_twisted(symmetric3(), kTrivial), (std::vector<int>{1, 1, 2}));
}

TEST(FellBundle, GroupAlgebrasMatchOracle) {
  for (const Group& g : {cyclic(2), cyclic(3), cyclic(4), klein(), symmetric3()})
    EXPECT_EQ(library_twisted(g, kTrivial), oracle_twisted(g, kTrivial)) << g.el.size();
}

TEST(FellBundle, KleinCocycleGivesM2) {
  // -1 when the left factor contains b and the right factor contains a
  Omega c = [](int g, int h) { return (g & 2) && (h & 1) ? cplx(-1) : cplx(1); };
  auto lib = library_twisted(klein(), c);
  EXPECT_EQ(lib, oracle_twisted(klein(), c));
  EXPECT_EQ(lib, std::vector<int>{2});
}

TEST(FellBundle, CoboundariesDoNotChangeBlocks) {
  Rng rng(51);
  std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi);
  Group s3 = symmetric3();
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<cplx> c(6);
    for (auto& z : c) z = std::polar(1.0, ang(rng));
    c[0] = 1;
    Omega w = [&](int g, int h) { return c[g] * c[h] / c[s3.t[g][h]]; };
    EXPECT_EQ(library_twisted(s3, w), (std::vector<int>{1, 1, 2}));
  }
}

TEST(FellBundle, InnerCrossedProductsMatchOracle) {
  Group z2 = cyclic(2);
  Mat d = Mat::Identity(2, 2);
  d(1, 1) = -1;
  std::vector<Mat> u{Mat::Identity(2, 2), d};
  auto lib = library_inner(z2, 2, u);
  EXPECT_EQ(lib, oracle::block_sizes(oracle::crossed_product(2, z2.t, u)));
  EXPECT_EQ(lib, (std::vector<int>{2, 2}));

  Group z3 = cyclic(3);
  const cplx zeta = std::polar(1.0, 2 * std::numbers::pi / 3);
  std::vector<Mat> v;
  for (int i = 0; i < 3; ++i) {
    Mat m = Mat::Identity(2, 2);
    m(1, 1) = std::pow(zeta, i);
    v.push_back(m);
  }
  EXPECT_EQ(library_inner(z3, 2, v), oracle::block_sizes(oracle::crossed_product(2, z3.t, v)));
}

TEST(FellBundle, UnsaturatedFibreIsRejected) {
  Shape s = group_shape(kZ2, kZ2Table);
  Algebra a = new_algebra({1, 1});
  Correspondence half = make_correspondence(a, make_module(a, {1, 0}), {{Mat::Identity(1, 1), Mat::Zero(0, 0)},
                                                                        {Mat::Zero(1, 1), Mat::Zero(0, 0)}});
  std::vector<Correspondence> cs{identity_correspondence(a), half};
  CorrFunctor f = make_functor(s, {a}, cs, {});
  EXPECT_EQ(error_kind([&] { eval_fell_bundle(f); }), ErrorKind::NotSaturated);
}

TEST(FellBundle, ConvolutionOfAbstractAlgebraValidates) {
  Algebra a = new_algebra({2, 1});
  ConvolutionAlgebra c = abstract_algebra(a);
  EXPECT_TRUE(validate_convolution(c).pass());
  Wedderburn w = wedderburn_decompose(c);
  auto b = w.algebra.blocks;
  std::sort(b.begin(), b.end());
  EXPECT_EQ(b, (std::vector<int>{1, 2}));
  EXPECT_LE(w.iso_defect, 1e-8);
}

TEST(DirectSum, BlocksConcatenate) {
  Shape s = discrete_shape(2);
  std::vector<Algebra> algs{new_algebra({2}), new_algebra({3, 1})};
  std::vector<Correspondence> cs;
  for (int g = 0; g < s.num_arrows(); ++g) cs.push_back(identity_correspondence(algs[s.arrows[g].source]));
  CorrFunctor f = make_functor(s, algs, cs, {});
  EXPECT_EQ(eval_direct_sum(f).blocks, (std::vector<int>{2, 3, 1}));
  EXPECT_EQ(error_kind([] { eval_direct_sum(coequalizer_functor(1, 1)); }), ErrorKind::NotEvaluable);
}

TEST(Chain, StabilizedChainEvaluates) {
  Elaborated e = load_fixture("chain_stab.dsl");
  ChainEval c = eval_stabilized_chain(*e.first().functor);
  EXPECT_TRUE(c.evaluable);
  EXPECT_EQ(c.algebra.blocks, std::vector<int>{2});
  EXPECT_EQ(c.bratteli, (std::vector<std::vector<std::vector<int>>>{{{2}}, {{1}}}));
  for (const auto& h : c.to_limit) EXPECT_TRUE(validate_star_hom(h).pass());
}

TEST(Chain, DoublingChainIsNotEvaluable) {
  Elaborated e = load_fixture("chain_doubling.dsl");
  ChainEval c = eval_stabilized_chain(*e.first().functor);
  EXPECT_FALSE(c.evaluable);
  EXPECT_EQ(c.bratteli, (std::vector<std::vector<std::vector<int>>>{{{2}}, {{2}}}));
  EXPECT_EQ(error_kind([&] { evaluate_colimit(*e.first().functor); }), ErrorKind::NotEvaluable);
}

TEST(Chain, NonIsomorphicTailIsRejected) {
  // marked stable from the first link although C -> M_2 is not an isomorphism
  Algebra c = new_algebra({1}), m2 = new_algebra({2});
  CorrFunctor f = extend_from_generators(chain_shape(2, 0), GeneratorData{{c, m2, m2}, {from_star_hom(standard_hom(c, m2, {{2}})), identity_correspondence(m2)}});
  EXPECT_EQ(error_kind([&] { eval_stabilized_chain(f); }), ErrorKind::NotEvaluable);
}

TEST(ConcreteColimit, TautologicalConesValidate) {
  Algebra m2 = new_algebra({2});
  Element d{Mat::Identity(2, 2)};
  d[0](1, 1) = -1;
  std::vector<std::shared_ptr<const CorrFunctor>> fs{
      std::make_shared<const CorrFunctor>(trivial_z2(new_algebra({1}))),
      std::make_shared<const CorrFunctor>(group_functor(kZ2, kZ2Table, m2, {identity_hom(m2), conjugate(identity_hom(m2), d)}, kTrivial)),
      load_fixture("chain_stab.dsl").first().functor,
      load_fixture("discrete.dsl").first().functor};
  for (const auto& f : fs) {
    ConcreteColimit cc = evaluate_colimit(*f);
    EXPECT_LE(cc.iso_defect, 1e-8);
    RepresentationData r = tautological_representation(cc, f);
    Report rep = validate_representation(r);
    EXPECT_TRUE(rep.pass()) << cc.kind << " " << (rep.first_failure() ? rep.first_failure()->name : "");
  }
}

TEST(ConcreteColimit, SeedsGiveTheSameBlocks) {
  CorrFunctor f = *load_fixture("s3.dsl").first().functor;
  std::vector<int> first;
  for (std::uint64_t seed : {0u, 1u, 7u}) {
    auto b = eval_fell_bundle(f, 1e-8, seed).dec.algebra.blocks;
    std::sort(b.begin(), b.end());
    if (first.empty()) first = b;
    EXPECT_EQ(b, first);
  }
  EXPECT_EQ(first, (std::vector<int>{1, 1, 2}));
}

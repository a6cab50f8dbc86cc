#include "support.hpp"

#include <gtest/gtest.h>

using namespace corrcolim;
using namespace testing_support;

namespace {

dsl::Span syntax_error_at(const std::string& text) {
  try {
    dsl::parse_diagram_dsl(text);
  } catch (const dsl::SyntaxError& e) {
    return e.span;
  }
  ADD_FAILURE() << "no syntax error for:\n" << text;
  return {};
}

bool spans_match(const dsl::Span& a, int line, int col) { return a.line == line && a.col == col; }

dsl::MatLit random_matlit(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> kind(0, 3);
  dsl::MatLit m(rows, std::vector<cplx>(cols));
  for (auto& row : m)
    for (auto& z : row) switch (kind(rng)) {
        case 0: z = 0; break;
        case 1: z = cplx(std::round(g(rng) * 4), 0); break;
        case 2: z = cplx(g(rng), 0); break;
        default: z = cplx(g(rng), g(rng) * 1e-7); break;
      }
  return m;
}

}  // namespace

TEST(Dsl, FixturesSurviveParsePrintParse) {
  auto files = fixture_files(".dsl");
  ASSERT_GE(files.size(), 15u);
  for (const auto& path : files) {
    dsl::DslDocument a = dsl::parse_diagram_dsl(slurp(path));
    std::string printed = dsl::print_dsl(a);
    dsl::DslDocument b = dsl::parse_diagram_dsl(printed);
    EXPECT_TRUE(dsl::same_syntax(a, b)) << path;
    EXPECT_EQ(dsl::print_dsl(b), printed) << path;
  }
}

TEST(Dsl, RandomDocumentsSurviveParsePrintParse) {
  Rng rng(71);
  std::uniform_int_distribution<int> small(1, 3);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 30; ++trial) {
    dsl::DslDocument d;
    d.shape.kind = "endo";
    int n = small(rng);
    d.main.algebras.push_back({"A", {small(rng), small(rng)}, {}});
    dsl::CorrDecl c;
    c.name = "E";
    c.source = "A";
    c.target = "A";
    c.expr.kind = dsl::CorrExpr::Kind::Std;
    c.expr.n = n;
    d.main.corrs.push_back(c);
    dsl::MultDecl m;
    m.g = "1";
    m.h = "2";
    m.kind = dsl::MultDecl::Kind::Scale;
    m.scale = cplx(g(rng), g(rng));
    d.main.mults.push_back(m);
    dsl::MultDecl mm;
    mm.g = "1";
    mm.h = "1";
    mm.kind = dsl::MultDecl::Kind::Matrix;
    mm.matrix = random_matlit(n, n, rng);
    d.main.mults.push_back(mm);
    dsl::DslDocument back = dsl::parse_diagram_dsl(dsl::print_dsl(d));
    EXPECT_TRUE(dsl::same_syntax(d, back)) << dsl::print_dsl(d);
    EXPECT_EQ(back.main.mults[0].scale, m.scale);
  }
}

TEST(Dsl, ComplexLiterals) {
  auto d = dsl::parse_diagram_dsl("shape endo;\ncorr E = std(1);\nmult 1 1 = scale(0.5-2i);\nmult 1 2 = scale(-1i);\nmult 2 1 = scale(3);\n");
  ASSERT_EQ(d.main.mults.size(), 3u);
  EXPECT_EQ(d.main.mults[0].scale, cplx(0.5, -2));
  EXPECT_EQ(d.main.mults[1].scale, cplx(0, -1));
  EXPECT_EQ(d.main.mults[2].scale, cplx(3, 0));
}

TEST(Dsl, CommentsAndWhitespaceAreIgnored) {
  auto a = dsl::parse_diagram_dsl("shape coequalizer; corr E1 = std(2); corr E2 = std(3);");
  auto b = dsl::parse_diagram_dsl("# leading\nshape   coequalizer ;\n// two legs\ncorr E1 = std( 2 ) ; # trailing\n\ncorr E2=std(3);\n");
  EXPECT_TRUE(dsl::same_syntax(a, b));
}

TEST(Dsl, UnclosedBraceReportsOpeningLine) {
  std::string text = "shape group {\n  e a;\n  table:\n    e a;\n    a e;\n}\ncone c to blocks[1] {\n  gamma x = std(1);\n";
  dsl::Span at = syntax_error_at(text);
  EXPECT_EQ(at.line, 7);
}

TEST(Dsl, ErrorPositions) {
  EXPECT_TRUE(spans_match(syntax_error_at("corr E = std(2);"), 1, 1));
  dsl::Span s = syntax_error_at("shape endo;\ncorr E = std(2;\n");
  EXPECT_EQ(s.line, 2);
  EXPECT_EQ(s.col, 15);
  EXPECT_EQ(syntax_error_at("shape endo;\nalgebra A = blocks[1, ];\n").line, 2);
  EXPECT_EQ(error_kind([] { dsl::parse_diagram_dsl("shape endo;\ncorr E = std(2);\ncorr E = std(3);\n"); }),
            ErrorKind::NameError);
}

TEST(Dsl, DiagramAndTransformationBlocks) {
  auto d = dsl::parse_diagram_dsl(slurp(fixture("transformations.dsl")));
  ASSERT_EQ(d.transformations.size(), 2u);
  EXPECT_EQ(d.transformations[0].name, "swap");
  EXPECT_EQ(d.transformations[1].vees[1].matrices[0][0][1], cplx(0, -1));
  auto e = dsl::parse_diagram_dsl(slurp(fixture("expectation.dsl")));
  ASSERT_EQ(e.diagrams.size(), 2u);
  EXPECT_EQ(e.diagrams[1].corrs[0].expr.kind, dsl::CorrExpr::Kind::Module);
  EXPECT_EQ(e.diagrams[1].corrs[0].expr.acts.size(), 2u);
}

TEST(Dsl, ShapeForms) {
  auto chain = dsl::parse_diagram_dsl("shape chain(2, stabilized_from=1);");
  EXPECT_EQ(chain.shape.kind, "chain");
  EXPECT_EQ(chain.shape.args, std::vector<int>{2});
  EXPECT_EQ(chain.shape.stabilized_from, 1);
  auto fm = dsl::parse_diagram_dsl("shape free_monoid(2);");
  EXPECT_EQ(fm.shape.args, std::vector<int>{2});
  auto two = dsl::parse_diagram_dsl(slurp(fixture("two_category.dsl")));
  EXPECT_EQ(two.shape.twoarrows.size(), 1u);
}

TEST(Elaborate, FixturesBuildValidFunctors) {
  for (const auto& path : fixture_files(".dsl")) {
    if (path.find("broken") != std::string::npos) continue;
    Elaborated e = elaborate(dsl::parse_diagram_dsl(slurp(path)), ElabOptions{3, kDefaultTol});
    for (const auto& d : e.diagrams) {
      Report r = validate_functor(*d.functor);
      EXPECT_TRUE(r.pass()) << path << " " << d.name << " " << (r.first_failure() ? r.first_failure()->name : "");
    }
  }
}

TEST(Elaborate, BrokenMultiplicationIsKept) {
  Elaborated e = load_fixture("broken_pentagon.dsl");
  Report r = validate_functor(*e.first().functor);
  EXPECT_FALSE(r.pass());
  EXPECT_EQ(r.find("coherence")->witness, "(1,1,1)");
}

TEST(Elaborate, ExpectationDiagrams) {
  Elaborated e = load_fixture("expectation.dsl");
  ASSERT_EQ(e.diagrams.size(), 3u);
  // the expectation onto C of C + C and the explicit module agree up to isomorphism
  const auto& f = e.diagram("main").functor->corr(0);
  const auto& g = e.diagram("explicit").functor->corr(0);
  EXPECT_TRUE(find_isomorphism(f, g).iso.has_value());
  EXPECT_EQ(e.diagram("trace").functor->corr(0).dim(), 4);
}

TEST(Elaborate, UnknownNamesAreReported) {
  EXPECT_EQ(error_kind([] { elaborate(dsl::parse_diagram_dsl("shape coequalizer;\ncorr E1: B -> C = std(2);\n"), {}); }),
            ErrorKind::NameError);
  EXPECT_EQ(error_kind([] { elaborate(dsl::parse_diagram_dsl("shape endo;\ncorr E = std(2);\nmult 1 9 = scale(1);\n"), {}); }),
            ErrorKind::NameError);
}

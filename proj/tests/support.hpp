#ifndef CORRCOLIM_TESTS_SUPPORT_HPP
#define CORRCOLIM_TESTS_SUPPORT_HPP

#include "corrcolim/colimit.hpp"
#include "corrcolim/commands.hpp"
#include "corrcolim/concrete_eval.hpp"
#include "corrcolim/dsl.hpp"
#include "corrcolim/elaborate.hpp"
#include "corrcolim/errors.hpp"
#include "corrcolim/repcheck.hpp"
#include "corrcolim/serialize.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace testing_support {

using namespace corrcolim;

inline std::string fixture(const std::string& name) { return std::string(CORRCOLIM_FIXTURES) + "/" + name; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<std::string> fixture_files(const std::string& ext) {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(CORRCOLIM_FIXTURES))
    if (e.path().extension() == ext) out.push_back(e.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

inline Elaborated load_fixture(const std::string& name, int depth = 3) {
  return elaborate(dsl::parse_diagram_dsl(slurp(fixture(name))), ElabOptions{depth, kDefaultTol});
}

// The kind of corrcolim::Error thrown by f, if any.
template <class F>
std::optional<ErrorKind> error_kind(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

struct CliResult {
  int code = 0;
  std::string out, err;
};

inline CliResult cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

// Order-independent text for a polynomial: "(re,im)name name*" per monomial, sorted.
using WordTerm = std::pair<cplx, std::vector<std::string>>;

inline std::string term_key(const WordTerm& t) {
  std::ostringstream os;
  os << "(" << t.first.real() << "," << t.first.imag() << ")";
  for (const auto& w : t.second) os << " " << w;
  return os.str();
}

inline std::string poly_key(std::vector<WordTerm> terms) {
  std::vector<std::string> keys;
  for (const auto& t : terms) keys.push_back(term_key(t));
  std::sort(keys.begin(), keys.end());
  std::string out;
  for (const auto& k : keys) out += k + " + ";
  return out;
}

inline std::vector<WordTerm> poly_terms(const Presentation& p, const Poly& q) {
  std::vector<WordTerm> out;
  for (const auto& m : q) {
    std::vector<std::string> w;
    for (const auto& f : m.factors) w.push_back(p.generators[f.gen].name + (f.star ? "*" : ""));
    out.emplace_back(m.coeff, w);
  }
  return out;
}

inline std::string relation_key(const std::vector<WordTerm>& lhs, const std::vector<WordTerm>& rhs) {
  return poly_key(lhs) + "= " + poly_key(rhs);
}

inline std::multiset<std::string> relation_keys(const Presentation& p, const std::string& clause = "") {
  std::multiset<std::string> out;
  for (const auto& r : p.relations)
    if (clause.empty() || r.clause == clause) out.insert(relation_key(poly_terms(p, r.lhs), poly_terms(p, r.rhs)));
  return out;
}

inline std::string unitary_name(int i, int j) { return "u[" + std::to_string(i) + "," + std::to_string(j) + "]"; }

// sum_k u_{i1 k} u_{i2 k}^* = delta and sum_k u_{k j1}^* u_{k j2} = delta, written out by hand.
inline std::multiset<std::string> expected_coequalizer_relations(int m, int n) {
  std::multiset<std::string> out;
  const std::vector<WordTerm> one{{cplx(1), {}}}, zero{};
  for (int i1 = 1; i1 <= m; ++i1)
    for (int i2 = 1; i2 <= m; ++i2) {
      std::vector<WordTerm> lhs;
      for (int k = 1; k <= n; ++k) lhs.push_back({cplx(1), {unitary_name(i1, k), unitary_name(i2, k) + "*"}});
      out.insert(relation_key(lhs, i1 == i2 ? one : zero));
    }
  for (int j1 = 1; j1 <= n; ++j1)
    for (int j2 = 1; j2 <= n; ++j2) {
      std::vector<WordTerm> lhs;
      for (int k = 1; k <= m; ++k) lhs.push_back({cplx(1), {unitary_name(k, j1) + "*", unitary_name(k, j2)}});
      out.insert(relation_key(lhs, j1 == j2 ? one : zero));
    }
  return out;
}

// S_i^* S_j = delta_ij and sum_i S_i S_i^* = 1 for n isometries named S_1[i].
inline std::multiset<std::string> expected_cuntz_relations(int n) {
  std::multiset<std::string> out;
  const std::vector<WordTerm> one{{cplx(1), {}}}, zero{};
  auto s = [](int i) { return "S_1[" + std::to_string(i) + "]"; };
  std::vector<WordTerm> sum;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out.insert(relation_key({{cplx(1), {s(i) + "*", s(j)}}}, i == j ? one : zero));
    sum.push_back({cplx(1), {s(i), s(i) + "*"}});
  }
  out.insert(relation_key(sum, one));
  return out;
}

// Matrix-unit relations of M_k on generators prefix[0:r,s].
inline std::multiset<std::string> expected_matrix_unit_relations(const std::string& prefix, int k) {
  std::multiset<std::string> out;
  auto e = [&](int r, int s) { return prefix + "[0:" + std::to_string(r) + "," + std::to_string(s) + "]"; };
  for (int r = 0; r < k; ++r)
    for (int s = 0; s < k; ++s) {
      out.insert(relation_key({{cplx(1), {e(r, s) + "*"}}}, {{cplx(1), {e(s, r)}}}));
      for (int t = 0; t < k; ++t)
        for (int u = 0; u < k; ++u) {
          std::vector<WordTerm> rhs;
          if (s == t) rhs.push_back({cplx(1), {e(r, u)}});
          out.insert(relation_key({{cplx(1), {e(r, s), e(t, u)}}}, rhs));
        }
    }
  return out;
}

inline const std::vector<std::string> kZ2{"e", "a"};
inline const std::vector<std::vector<std::string>> kZ2Table{{"e", "a"}, {"a", "e"}};

// Bundle over a group with fibres from *-automorphisms alpha_g and mults twisted by omega.
inline CorrFunctor group_functor(const std::vector<std::string>& el, const std::vector<std::vector<std::string>>& table,
                                 const Algebra& a, const std::vector<StarHom>& alphas,
                                 const std::function<cplx(int, int)>& omega) {
  Shape s = group_shape(el, table);
  std::vector<Correspondence> cs;
  for (int g = 0; g < s.num_arrows(); ++g)
    cs.push_back(s.arrows[g].identity ? identity_correspondence(a) : from_star_hom(alphas[g]));
  std::map<std::pair<int, int>, CorrIso> mu;
  for (auto [g, h] : composable_pairs(s)) mu[{g, h}] = *hom_composition_mult(cs[h], cs[g], cs[s.compose(g, h)]) * omega(g, h);
  return make_functor(s, std::vector<Algebra>{a}, cs, mu);
}

inline CorrFunctor trivial_z2(const Algebra& a) {
  return group_functor(kZ2, kZ2Table, a, {identity_hom(a), identity_hom(a)}, [](int, int) { return cplx(1); });
}

inline CorrFunctor coequalizer_functor(int m, int n) {
  Shape s = coequalizer_shape();
  Algebra c = new_algebra({1});
  std::vector<Correspondence> cs(s.num_arrows());
  for (int g = 0; g < s.num_arrows(); ++g)
    cs[g] = s.arrows[g].identity ? identity_correspondence(c) : standard_correspondence(s.arrows[g].name == "f1" ? m : n);
  return make_functor(s, {c, c}, cs, {});
}

inline CorrFunctor endo_functor(const Correspondence& e, int depth = 3) {
  return extend_from_generators(endo_shape(depth), GeneratorData{{e.source}, {e}});
}

// A nondegenerate correspondence: each source block i appears k_i times in the target
// module, twisted by a random unitary in every target block.
inline Correspondence random_correspondence(const Algebra& src, const Algebra& tgt, Rng& rng, int max_copies = 2) {
  std::uniform_int_distribution<int> copies(0, max_copies);
  std::vector<std::vector<int>> k(tgt.num_blocks(), std::vector<int>(src.num_blocks()));
  std::vector<int> mult(tgt.num_blocks(), 0);
  bool any = false;
  while (!any) {
    for (int j = 0; j < tgt.num_blocks(); ++j) {
      mult[j] = 0;
      for (int i = 0; i < src.num_blocks(); ++i) {
        k[j][i] = copies(rng);
        mult[j] += k[j][i] * src.blocks[i];
      }
    }
    // every source block must act somewhere
    any = true;
    for (int i = 0; i < src.num_blocks(); ++i) {
      int tot = 0;
      for (int j = 0; j < tgt.num_blocks(); ++j) tot += k[j][i];
      any = any && tot > 0;
    }
  }
  std::vector<Mat> w;
  for (int j = 0; j < tgt.num_blocks(); ++j) w.push_back(random_unitary(mult[j], rng));
  std::vector<std::vector<Mat>> left;
  for (int a = 0; a < src.dim(); ++a) {
    Algebra::Unit u = src.unit(a);
    std::vector<Mat> per;
    for (int j = 0; j < tgt.num_blocks(); ++j) {
      Mat m = Mat::Zero(mult[j], mult[j]);
      int pos = 0;
      for (int i = 0; i < src.num_blocks(); ++i)
        for (int c = 0; c < k[j][i]; ++c) {
          if (i == u.block) m(pos + u.r, pos + u.s) = 1;
          pos += src.blocks[i];
        }
      per.push_back(w[j] * m * w[j].adjoint());
    }
    left.push_back(per);
  }
  return make_correspondence(src, make_module(tgt, mult), std::move(left));
}

// A cone over the trivial Z/2 bundle over C into d: gamma = d-module, S_a a D-linear symmetry.
inline RepresentationData random_z2_cone(std::shared_ptr<const CorrFunctor> f, const Algebra& d, Rng& rng) {
  std::uniform_int_distribution<int> mdist(1, 2);
  std::vector<int> mult;
  for (int j = 0; j < d.num_blocks(); ++j) mult.push_back(mdist(rng));
  HilbertModule m = make_module(d, mult);
  std::vector<std::vector<Mat>> left{{}};
  for (int j = 0; j < d.num_blocks(); ++j) left[0].push_back(Mat::Identity(mult[j], mult[j]));
  Correspondence gamma = make_correspondence(new_algebra({1}), m, left);
  std::vector<Mat> blocks;
  std::bernoulli_distribution coin;
  for (int j = 0; j < d.num_blocks(); ++j) {
    Mat u = random_unitary(mult[j], rng);
    Mat sign = Mat::Identity(mult[j], mult[j]);
    for (int i = 0; i < mult[j]; ++i)
      if (coin(rng)) sign(i, i) = -1;
    blocks.push_back(u * sign * u.adjoint());
  }
  RepresentationData r{f, d, {gamma}, {}};
  const Shape& s = f->shape;
  r.esses.assign(s.num_arrows(), {});
  for (int g = 0; g < s.num_arrows(); ++g)
    r.esses[g].push_back(s.arrows[g].identity ? left_full(gamma, 0) : map_full(m, m, blocks));
  return r;
}

// gamma_x = C^k at both objects, random unitaries on the non-identity arrows.
inline Transformation random_coeq_transformation(std::shared_ptr<const CorrFunctor> f0, std::shared_ptr<const CorrFunctor> f1, Rng& rng) {
  std::uniform_int_distribution<int> kd(1, 2);
  Correspondence gamma = standard_correspondence(kd(rng));
  Transformation t{f0, f1, {gamma, gamma}, {}};
  for (int g = 0; g < f0->shape.num_arrows(); ++g) {
    if (f0->shape.arrows[g].identity) {
      t.vees.push_back(canonical_vee(gamma));
      continue;
    }
    int n = gamma.dim() * f1->corr(g).dim();
    t.vees.push_back(random_unitary(n, rng));
  }
  return t;
}

}  // namespace testing_support

#endif

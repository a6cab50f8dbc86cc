#include "corrcolim/shapes.hpp"

#include "corrcolim/errors.hpp"

#include <algorithm>
#include <map>

namespace corrcolim {

const char* to_string(ShapeKind k) {
  switch (k) {
    case ShapeKind::Category: return "category";
    case ShapeKind::Group: return "group";
    case ShapeKind::Discrete: return "discrete";
    case ShapeKind::Pushout: return "pushout";
    case ShapeKind::Coequalizer: return "coequalizer";
    case ShapeKind::EndoN: return "endo";
    case ShapeKind::FreeMonoid: return "free_monoid";
    case ShapeKind::Chain: return "chain";
    case ShapeKind::TwoCategory: return "two_category";
  }
  return "?";
}

int Shape::object_index(const std::string& name) const {
  for (int i = 0; i < num_objects(); ++i)
    if (objects[i] == name) return i;
  return -1;
}

int Shape::arrow_index(const std::string& name) const {
  for (int i = 0; i < num_arrows(); ++i)
    if (arrows[i].name == name) return i;
  return -1;
}

bool Shape::is_generator(int g) const {
  return std::find(generators.begin(), generators.end(), g) != generators.end();
}

namespace {

void add_identities(Shape& s) {
  s.identity_of.assign(s.num_objects(), -1);
  for (int x = 0; x < s.num_objects(); ++x) {
    Arrow a;
    a.name = "id_" + s.objects[x];
    a.source = a.target = x;
    a.identity = true;
    s.identity_of[x] = static_cast<int>(s.arrows.size());
    s.arrows.push_back(a);
  }
}

// Fill comp from words: identities are neutral, otherwise concatenate words and
// look the result up. Used by the presets whose arrows are words in generators.
void compose_by_words(Shape& s) {
  int n = s.num_arrows();
  s.comp.assign(n, std::vector<int>(n, -1));
  std::map<std::pair<int, std::vector<int>>, int> by_word;
  for (int g = 0; g < n; ++g)
    if (!s.arrows[g].identity) by_word[{s.arrows[g].source, s.arrows[g].word}] = g;
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) {
      const Arrow& ag = s.arrows[g];
      const Arrow& ah = s.arrows[h];
      if (ah.target != ag.source) continue;
      if (ag.identity) {
        s.comp[g][h] = h;
        continue;
      }
      if (ah.identity) {
        s.comp[g][h] = g;
        continue;
      }
      std::vector<int> w = ah.word;
      w.insert(w.end(), ag.word.begin(), ag.word.end());
      auto it = by_word.find({ah.source, w});
      if (it != by_word.end()) s.comp[g][h] = it->second;
    }
}

void finish_generators(Shape& s) {
  s.generators.clear();
  for (int g = 0; g < s.num_arrows(); ++g)
    if (!s.arrows[g].identity && s.arrows[g].word.size() == 1) s.generators.push_back(g);
}

}  // namespace

Shape discrete_shape(int n) {
  if (n < 0) throw Error(ErrorKind::ShapeError, "discrete shape needs n >= 0");
  Shape s;
  s.kind = ShapeKind::Discrete;
  s.param = n;
  for (int i = 1; i <= n; ++i) s.objects.push_back("x" + std::to_string(i));
  add_identities(s);
  compose_by_words(s);
  return s;
}

Shape pushout_shape() {
  Shape s;
  s.kind = ShapeKind::Pushout;
  s.objects = {"a", "b1", "b2"};
  s.arrows.push_back({"f1", 0, 1, false, {0}});
  s.arrows.push_back({"f2", 0, 2, false, {1}});
  add_identities(s);
  compose_by_words(s);
  finish_generators(s);
  return s;
}

Shape coequalizer_shape() {
  Shape s;
  s.kind = ShapeKind::Coequalizer;
  s.objects = {"x1", "x2"};
  s.arrows.push_back({"f1", 0, 1, false, {0}});
  s.arrows.push_back({"f2", 0, 1, false, {1}});
  add_identities(s);
  compose_by_words(s);
  finish_generators(s);
  return s;
}

Shape endo_shape(int depth) {
  if (depth < 1) throw Error(ErrorKind::ShapeError, "truncation depth must be at least 1");
  Shape s;
  s.kind = ShapeKind::EndoN;
  s.depth = depth;
  s.generator_mode = true;
  s.objects = {"x"};
  // arrow n is E^{(x) n}; arrow 0 is the identity
  s.arrows.push_back({"0", 0, 0, true, {}});
  s.identity_of = {0};
  for (int n = 1; n <= depth; ++n) s.arrows.push_back({std::to_string(n), 0, 0, false, std::vector<int>(n, 1)});
  compose_by_words(s);
  finish_generators(s);
  return s;
}

Shape free_monoid_shape(int k, int depth) {
  if (k < 1) throw Error(ErrorKind::ShapeError, "free monoid needs at least one generator");
  if (depth < 1) throw Error(ErrorKind::ShapeError, "truncation depth must be at least 1");
  Shape s;
  s.kind = ShapeKind::FreeMonoid;
  s.depth = depth;
  s.param = k;
  s.generator_mode = true;
  s.objects = {"x"};
  s.arrows.push_back({"e", 0, 0, true, {}});
  s.identity_of = {0};
  auto letter = [k](int i) { return k < 10 ? std::to_string(i + 1) : "." + std::to_string(i + 1); };
  // generators first so that arrow i+1 is letter i
  std::vector<std::vector<int>> level{{}};
  std::vector<std::vector<int>> letters_of;
  for (int len = 1; len <= depth; ++len) {
    std::vector<std::vector<int>> next;
    for (const auto& w : level)
      for (int i = 0; i < k; ++i) {
        auto v = w;
        v.push_back(i);
        next.push_back(v);
      }
    for (const auto& w : next) letters_of.push_back(w);
    level = next;
  }
  for (const auto& w : letters_of) {
    std::string name;
    for (int i : w) name += letter(i);
    std::vector<int> word;
    for (int i : w) word.push_back(1 + i);  // arrow index of the letter
    s.arrows.push_back({name, 0, 0, false, word});
  }
  compose_by_words(s);
  finish_generators(s);
  return s;
}

Shape chain_shape(int n, std::optional<int> stabilized_from) {
  if (n < 1) throw Error(ErrorKind::ShapeError, "chain needs at least two objects");
  if (stabilized_from && (*stabilized_from < 0 || *stabilized_from > n))
    throw Error(ErrorKind::ShapeError, "stabilized_from must lie in 0.." + std::to_string(n));
  Shape s;
  s.kind = ShapeKind::Chain;
  s.param = n;
  s.stabilized_from = stabilized_from;
  s.generator_mode = true;
  for (int i = 0; i <= n; ++i) s.objects.push_back("x" + std::to_string(i));
  // generators c_i: x_i -> x_{i+1} are arrows 0..n-1
  for (int i = 0; i < n; ++i)
    s.arrows.push_back({"c" + std::to_string(i) + "_" + std::to_string(i + 1), i, i + 1, false, {i}});
  for (int len = 2; len <= n; ++len)
    for (int i = 0; i + len <= n; ++i) {
      std::vector<int> w;
      for (int t = i; t < i + len; ++t) w.push_back(t);
      s.arrows.push_back({"c" + std::to_string(i) + "_" + std::to_string(i + len), i, i + len, false, w});
    }
  add_identities(s);
  compose_by_words(s);
  finish_generators(s);
  return s;
}

Shape group_shape(const std::vector<std::string>& elements, const std::vector<std::vector<std::string>>& table) {
  const int n = static_cast<int>(elements.size());
  if (n == 0) throw Error(ErrorKind::ShapeError, "group needs at least one element");
  if (static_cast<int>(table.size()) != n) throw Error(ErrorKind::ShapeError, "group table needs one row per element");
  std::map<std::string, int> idx;
  for (int i = 0; i < n; ++i)
    if (!idx.emplace(elements[i], i).second) throw Error(ErrorKind::NameError, "duplicate group element " + elements[i]);
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(table[i].size()) != n) throw Error(ErrorKind::ShapeError, "group table row has wrong length");
    for (int j = 0; j < n; ++j) {
      auto it = idx.find(table[i][j]);
      if (it == idx.end()) throw Error(ErrorKind::NameError, "unknown group element " + table[i][j]);
      t[i][j] = it->second;
    }
  }
  int e = -1;
  for (int i = 0; i < n && e < 0; ++i) {
    bool ok = true;
    for (int j = 0; j < n; ++j) ok = ok && t[i][j] == j && t[j][i] == j;
    if (ok) e = i;
  }
  if (e < 0) throw Error(ErrorKind::ShapeError, "group table has no identity element");
  Shape s;
  s.kind = ShapeKind::Group;
  s.objects = {"x"};
  s.group_elements = elements;
  s.identity_of = {e};
  for (int i = 0; i < n; ++i) {
    Arrow a{elements[i], 0, 0, i == e, {}};
    if (i != e) a.word = {i};
    s.arrows.push_back(a);
  }
  s.comp = t;
  finish_generators(s);
  return s;
}

namespace {

Shape build_category(const std::vector<std::string>& objects, const std::vector<ArrowDecl>& arrows,
                     const std::vector<ComposeDecl>& compose) {
  Shape s;
  s.kind = ShapeKind::Category;
  std::map<std::string, int> obj;
  for (const auto& o : objects) {
    if (!obj.emplace(o, static_cast<int>(s.objects.size())).second) throw Error(ErrorKind::NameError, "duplicate object " + o);
    s.objects.push_back(o);
  }
  std::map<std::string, int> arr;
  for (const auto& a : arrows) {
    auto si = obj.find(a.source), ti = obj.find(a.target);
    if (si == obj.end()) throw Error(ErrorKind::NameError, "unknown object " + a.source);
    if (ti == obj.end()) throw Error(ErrorKind::NameError, "unknown object " + a.target);
    int id = static_cast<int>(s.arrows.size());
    if (!arr.emplace(a.name, id).second) throw Error(ErrorKind::NameError, "duplicate arrow " + a.name);
    s.arrows.push_back({a.name, si->second, ti->second, false, {id}});
  }
  add_identities(s);
  for (int x = 0; x < s.num_objects(); ++x) arr.emplace(s.arrows[s.identity_of[x]].name, s.identity_of[x]);
  int n = s.num_arrows();
  s.comp.assign(n, std::vector<int>(n, -1));
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) {
      if (s.arrows[h].target != s.arrows[g].source) continue;
      if (s.arrows[g].identity) s.comp[g][h] = h;
      else if (s.arrows[h].identity) s.comp[g][h] = g;
    }
  for (const auto& c : compose) {
    auto gi = arr.find(c.g), hi = arr.find(c.h), ri = arr.find(c.result);
    if (gi == arr.end()) throw Error(ErrorKind::NameError, "unknown arrow " + c.g);
    if (hi == arr.end()) throw Error(ErrorKind::NameError, "unknown arrow " + c.h);
    if (ri == arr.end()) throw Error(ErrorKind::NameError, "unknown arrow " + c.result);
    s.comp[gi->second][hi->second] = ri->second;
  }
  finish_generators(s);
  return s;
}

}  // namespace

Shape category_shape(const std::vector<std::string>& objects, const std::vector<ArrowDecl>& arrows,
                     const std::vector<ComposeDecl>& compose) {
  return build_category(objects, arrows, compose);
}

Shape two_category_shape(const std::vector<std::string>& objects, const std::vector<ArrowDecl>& arrows,
                         const std::vector<ComposeDecl>& compose, const std::vector<TwoArrowDecl>& twoarrows,
                         const std::vector<ComposeDecl>& vcompose) {
  Shape s = build_category(objects, arrows, compose);
  s.kind = ShapeKind::TwoCategory;
  std::map<std::string, int> two;
  for (const auto& t : twoarrows) {
    int f = s.arrow_index(t.from), g = s.arrow_index(t.to);
    if (f < 0) throw Error(ErrorKind::NameError, "unknown arrow " + t.from);
    if (g < 0) throw Error(ErrorKind::NameError, "unknown arrow " + t.to);
    if (!two.emplace(t.name, static_cast<int>(s.twoarrows.size())).second)
      throw Error(ErrorKind::NameError, "duplicate 2-arrow " + t.name);
    s.twoarrows.push_back({t.name, f, g});
  }
  int n = static_cast<int>(s.twoarrows.size());
  s.vcomp.assign(n, std::vector<int>(n, -1));
  for (const auto& c : vcompose) {
    auto b = two.find(c.g), a = two.find(c.h), r = two.find(c.result);
    if (b == two.end() || a == two.end() || r == two.end())
      throw Error(ErrorKind::NameError, "unknown 2-arrow in vcompose " + c.g + " " + c.h);
    s.vcomp[b->second][a->second] = r->second;
  }
  return s;
}

std::vector<std::pair<int, int>> composable_pairs(const Shape& s) {
  std::vector<std::pair<int, int>> out;
  for (int g = 0; g < s.num_arrows(); ++g) {
    if (s.arrows[g].identity) continue;
    for (int h = 0; h < s.num_arrows(); ++h) {
      if (s.arrows[h].identity) continue;
      if (s.comp[g][h] >= 0) out.emplace_back(g, h);
    }
  }
  return out;
}

std::vector<Triple> composable_triples(const Shape& s) {
  std::vector<Triple> out;
  const int n = s.num_arrows();
  for (int a = 0; a < n; ++a) {
    if (s.arrows[a].identity) continue;
    for (int b = 0; b < n; ++b) {
      if (s.arrows[b].identity || s.comp[b][a] < 0) continue;
      for (int c = 0; c < n; ++c) {
        if (s.arrows[c].identity || s.comp[c][b] < 0) continue;
        int ab = s.comp[b][a], bc = s.comp[c][b];
        if (s.comp[c][ab] < 0 || s.comp[bc][a] < 0) continue;
        out.push_back({a, b, c});
      }
    }
  }
  return out;
}

Report validate_shape(const Shape& s) {
  Report rep;
  const int n = s.num_arrows();
  bool ok = static_cast<int>(s.comp.size()) == n;
  for (const auto& row : s.comp) ok = ok && static_cast<int>(row.size()) == n;
  rep.flag("table_size", ok, ok ? "" : "composition table is not square in the arrows");
  if (!ok) return rep;

  std::string w;
  bool endpoints = true;
  for (int g = 0; g < n && endpoints; ++g)
    for (int h = 0; h < n && endpoints; ++h) {
      int c = s.comp[g][h];
      bool match = s.arrows[h].target == s.arrows[g].source;
      if (c >= 0 && (!match || s.arrows[c].source != s.arrows[h].source || s.arrows[c].target != s.arrows[g].target)) {
        endpoints = false;
        w = s.arrows[g].name + " o " + s.arrows[h].name;
      }
      // explicit categories and groups need total tables; presets may truncate
      bool total = s.kind == ShapeKind::Category || s.kind == ShapeKind::TwoCategory || s.kind == ShapeKind::Group;
      if (total && match && c < 0) {
        endpoints = false;
        w = s.arrows[g].name + " o " + s.arrows[h].name + " undefined";
      }
    }
  rep.flag("endpoints", endpoints, w);

  bool ident = true;
  w.clear();
  for (int x = 0; x < s.num_objects(); ++x) {
    int e = s.identity_of[x];
    for (int g = 0; g < n; ++g) {
      if (s.arrows[g].source == x && s.comp[g][e] != g) ident = false, w = s.arrows[g].name;
      if (s.arrows[g].target == x && s.comp[e][g] != g) ident = false, w = s.arrows[g].name;
    }
  }
  rep.flag("identities", ident, w);

  bool assoc = true;
  w.clear();
  for (int f = 0; f < n && assoc; ++f)
    for (int g = 0; g < n && assoc; ++g) {
      int gf = s.comp[g][f];
      if (gf < 0) continue;
      for (int h = 0; h < n; ++h) {
        int hg = s.comp[h][g];
        if (hg < 0) continue;
        int l = s.comp[h][gf], r = s.comp[hg][f];
        if (l < 0 || r < 0) continue;
        if (l != r) {
          assoc = false;
          w = "(" + s.arrows[h].name + "," + s.arrows[g].name + "," + s.arrows[f].name + ")";
          break;
        }
      }
    }
  rep.flag("associativity", assoc, w);

  if (s.kind == ShapeKind::Group) {
    bool inv = true;
    w.clear();
    for (int g = 0; g < n; ++g) {
      bool found = false;
      for (int h = 0; h < n; ++h)
        if (s.comp[g][h] == s.identity_of[0] && s.comp[h][g] == s.identity_of[0]) found = true;
      if (!found) inv = false, w = s.arrows[g].name;
    }
    rep.flag("inverses", inv, w);
  }
  if (s.kind == ShapeKind::Coequalizer) {
    int count = 0;
    for (const auto& a : s.arrows) count += a.identity ? 0 : 1;
    rep.flag("parallel_pair", count == 2 && s.arrows[0].source == s.arrows[1].source &&
                                  s.arrows[0].target == s.arrows[1].target);
  }
  if (!s.twoarrows.empty()) {
    bool par = true;
    w.clear();
    for (const auto& t : s.twoarrows)
      if (s.arrows[t.from].source != s.arrows[t.to].source || s.arrows[t.from].target != s.arrows[t.to].target)
        par = false, w = t.name;
    rep.flag("twoarrows_parallel", par, w);
    bool vc = true;
    w.clear();
    const int m = static_cast<int>(s.twoarrows.size());
    for (int b = 0; b < m; ++b)
      for (int a = 0; a < m; ++a) {
        int c = s.vcomp[b][a];
        if (c < 0) continue;
        if (s.twoarrows[a].to != s.twoarrows[b].from || s.twoarrows[c].from != s.twoarrows[a].from ||
            s.twoarrows[c].to != s.twoarrows[b].to)
          vc = false, w = s.twoarrows[b].name + " . " + s.twoarrows[a].name;
        for (int d = 0; d < m; ++d) {
          int dc = s.vcomp[d][b];
          if (dc < 0) continue;
          int l = s.vcomp[d][c], r = s.vcomp[dc][a];
          if (l >= 0 && r >= 0 && l != r) vc = false, w = "vertical associativity at " + s.twoarrows[d].name;
        }
      }
    rep.flag("vertical_composition", vc, w);
  }
  rep.note(std::string("kind=") + to_string(s.kind));
  rep.note("objects=" + std::to_string(s.num_objects()));
  int nonid = 0;
  for (const auto& a : s.arrows) nonid += a.identity ? 0 : 1;
  rep.note("non_identity_arrows=" + std::to_string(nonid));
  return rep;
}

}  // namespace corrcolim

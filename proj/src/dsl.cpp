#include "corrcolim/dsl.hpp"

#include <cctype>
#include <charconv>
#include <set>
#include <sstream>

namespace corrcolim::dsl {

SyntaxError::SyntaxError(const Span& at, const std::string& msg)
    : Error(ErrorKind::ParseError, "line " + std::to_string(at.line) + ", col " + std::to_string(at.col) + ": " + msg),
      span(at) {}

namespace {

enum class Tok { Ident, Int, Real, Imag, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double value = 0;
  Span span;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::Ident: return "'" + t.text + "'";
    case Tok::Punct: return "'" + t.text + "'";
    default: return "number " + t.text;
  }
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#' || (c == '/' && i + 1 < text.size() && text[i + 1] == '/')) {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.span = {line, col};
    if (ident_start(c)) {
      size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      t.kind = Tok::Ident;
      t.text = text.substr(i, j - i);
      advance(j - i);
    } else if (digit(c) || (c == '.' && i + 1 < text.size() && digit(text[i + 1]))) {
      size_t j = i;
      bool real = false;
      while (j < text.size() && digit(text[j])) ++j;
      if (j < text.size() && text[j] == '.') {
        real = true;
        ++j;
        while (j < text.size() && digit(text[j])) ++j;
      }
      if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
        size_t k = j + 1;
        if (k < text.size() && (text[k] == '+' || text[k] == '-')) ++k;
        if (k < text.size() && digit(text[k])) {
          real = true;
          j = k;
          while (j < text.size() && digit(text[j])) ++j;
        }
      }
      t.text = text.substr(i, j - i);
      auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.value);
      if (res.ec != std::errc()) throw SyntaxError(t.span, "malformed number " + t.text);
      t.kind = real ? Tok::Real : Tok::Int;
      if (j < text.size() && text[j] == 'i' && (j + 1 >= text.size() || !ident_char(text[j + 1]))) {
        t.kind = Tok::Imag;
        ++j;
        t.text += "i";
      } else if (j < text.size() && ident_char(text[j])) {
        throw SyntaxError(t.span, "malformed number " + text.substr(i, j - i + 1));
      }
      advance(j - i);
    } else {
      static const char* two[] = {"->", "=>"};
      t.kind = Tok::Punct;
      for (const char* p : two)
        if (text.compare(i, 2, p) == 0) t.text = p;
      if (t.text.empty()) {
        if (std::string("{}[]();:,=+-").find(c) == std::string::npos)
          throw SyntaxError(t.span, std::string("unexpected character '") + c + "'");
        t.text = std::string(1, c);
      }
      advance(t.text.size());
    }
    out.push_back(t);
  }
  Token end;
  end.span = {line, col};
  out.push_back(end);
  return out;
}

std::string where(const Span& s) { return " at line " + std::to_string(s.line) + ", col " + std::to_string(s.col); }

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  DslDocument document() {
    DslDocument doc;
    if (!is_word("shape")) throw SyntaxError(peek().span, "a document starts with a shape declaration, found " + describe(peek()));
    doc.shape = shape();
    std::set<std::string> diagrams{"main"}, transformations, cones;
    while (peek().kind != Tok::End) {
      const Token& t = peek();
      if (is_word("diagram")) {
        DiagramBlock d = diagram();
        if (!diagrams.insert(d.name).second) throw Error(ErrorKind::NameError, "duplicate diagram " + d.name + where(d.span));
        doc.diagrams.push_back(std::move(d));
      } else if (is_word("transformation")) {
        TransformationBlock b = transformation();
        if (!transformations.insert(b.name).second)
          throw Error(ErrorKind::NameError, "duplicate transformation " + b.name + where(b.span));
        doc.transformations.push_back(std::move(b));
      } else if (is_word("cone")) {
        ConeBlock b = cone();
        if (!cones.insert(b.name).second) throw Error(ErrorKind::NameError, "duplicate cone " + b.name + where(b.span));
        doc.cones.push_back(std::move(b));
      } else if (is_word("shape")) {
        throw Error(ErrorKind::NameError, "second shape declaration" + where(t.span));
      } else if (!diagram_statement(doc.main)) {
        throw SyntaxError(t.span, "expected a declaration, found " + describe(t));
      }
    }
    return doc;
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;

  const Token& peek(size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  Token next() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool is_punct(const char* p, size_t k = 0) const { return peek(k).kind == Tok::Punct && peek(k).text == p; }
  bool is_word(const char* w) const { return peek().kind == Tok::Ident && peek().text == w; }

  [[noreturn]] void fail(const std::string& expected) const {
    throw SyntaxError(peek().span, "expected " + expected + ", found " + describe(peek()));
  }
  void expect(const char* p) {
    if (!is_punct(p)) fail(std::string("'") + p + "'");
    next();
  }
  void expect_word(const char* w) {
    if (!is_word(w)) fail(std::string("'") + w + "'");
    next();
  }
  bool accept(const char* p) {
    if (!is_punct(p)) return false;
    next();
    return true;
  }
  // Consumes '}' or reports the unclosed brace at its opening position.
  bool close(const Span& open) {
    if (peek().kind == Tok::End) throw SyntaxError(open, "unclosed '{' (reached end of input)");
    return accept("}");
  }

  std::string name() {
    if (peek().kind != Tok::Ident && peek().kind != Tok::Int) fail("a name");
    return next().text;
  }
  int integer() {
    bool neg = accept("-");
    if (peek().kind != Tok::Int) fail("an integer");
    Token t = next();
    int v = 0;
    auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (res.ec != std::errc()) throw SyntaxError(t.span, "integer out of range " + t.text);
    return neg ? -v : v;
  }
  std::vector<int> int_list() {
    expect("[");
    std::vector<int> v;
    if (!is_punct("]")) {
      v.push_back(integer());
      while (accept(",")) v.push_back(integer());
    }
    expect("]");
    return v;
  }

  cplx complex() {
    double sign = 1;
    if (accept("-")) sign = -1;
    else accept("+");
    if (peek().kind == Tok::Imag) return cplx(0, sign * next().value);
    if (peek().kind != Tok::Int && peek().kind != Tok::Real) fail("a number");
    double re = sign * next().value;
    if ((is_punct("+") || is_punct("-")) && peek(1).kind == Tok::Imag) {
      double s = next().text == "-" ? -1 : 1;
      return cplx(re, s * next().value);
    }
    return cplx(re, 0);
  }
  MatLit matrix() {
    expect("[");
    MatLit m;
    if (!is_punct("]")) {
      do {
        expect("[");
        std::vector<cplx> row;
        if (!is_punct("]")) {
          row.push_back(complex());
          while (accept(",")) row.push_back(complex());
        }
        expect("]");
        m.push_back(std::move(row));
      } while (accept(","));
    }
    expect("]");
    return m;
  }
  std::vector<MatLit> matrix_list() {
    std::vector<MatLit> v{matrix()};
    while (accept(",")) v.push_back(matrix());
    return v;
  }
  std::vector<std::string> names_until_semicolon() {
    std::vector<std::string> v;
    while (!is_punct(";")) v.push_back(name());
    expect(";");
    return v;
  }

  ShapeDecl shape() {
    ShapeDecl s;
    s.span = peek().span;
    expect_word("shape");
    if (peek().kind != Tok::Ident) fail("a shape kind");
    s.kind = next().text;
    if (s.kind == "pushout" || s.kind == "coequalizer" || s.kind == "endo") {
      expect(";");
    } else if (s.kind == "discrete" || s.kind == "free_monoid") {
      expect("(");
      s.args.push_back(integer());
      expect(")");
      expect(";");
    } else if (s.kind == "chain") {
      expect("(");
      s.args.push_back(integer());
      if (accept(",")) {
        expect_word("stabilized_from");
        expect("=");
        s.stabilized_from = integer();
      }
      expect(")");
      expect(";");
    } else if (s.kind == "group") {
      Span open = peek().span;
      expect("{");
      if (is_word("elements")) next();
      s.elements = names_until_semicolon();
      expect_word("table");
      expect(":");
      while (!close(open)) s.table.push_back(names_until_semicolon());
      accept(";");
    } else if (s.kind == "category" || s.kind == "two_category") {
      const bool two = s.kind == "two_category";
      Span open = peek().span;
      expect("{");
      while (!close(open)) {
        if (is_word("objects")) {
          next();
          for (auto& o : names_until_semicolon()) s.objects.push_back(o);
        } else if (is_word("arrows")) {
          next();
          do {
            NamedArrow a;
            a.name = name();
            expect(":");
            a.source = name();
            expect("->");
            a.target = name();
            s.arrows.push_back(a);
          } while (accept(","));
          expect(";");
        } else if (is_word("compose") || (two && is_word("vcompose"))) {
          bool v = next().text == "vcompose";
          ComposeLit c;
          c.g = name();
          c.h = name();
          expect("=");
          c.result = name();
          expect(";");
          (v ? s.vcompose : s.compose).push_back(c);
        } else if (two && is_word("twoarrows")) {
          next();
          do {
            NamedArrow a;
            a.name = name();
            expect(":");
            a.source = name();
            expect("=>");
            a.target = name();
            s.twoarrows.push_back(a);
          } while (accept(","));
          expect(";");
        } else {
          fail(two ? "objects, arrows, compose, twoarrows or vcompose" : "objects, arrows or compose");
        }
      }
      accept(";");
    } else {
      throw SyntaxError(s.span, "unknown shape kind '" + s.kind + "'");
    }
    return s;
  }

  CorrExpr corr_expr() {
    CorrExpr e;
    e.span = peek().span;
    if (peek().kind != Tok::Ident) fail("a correspondence expression");
    std::string k = next().text;
    if (k == "std") {
      e.kind = CorrExpr::Kind::Std;
      expect("(");
      e.n = integer();
      expect(")");
    } else if (k == "identity") {
      e.kind = CorrExpr::Kind::Identity;
    } else if (k == "from_hom") {
      e.kind = CorrExpr::Kind::FromHom;
      Span open = peek().span;
      if (accept("{")) {
        while (!close(open)) {
          if (is_word("mult")) {
            next();
            e.mult = matrix();
          } else if (is_word("ad")) {
            next();
            e.ad = matrix_list();
          } else {
            fail("mult or ad");
          }
          expect(";");
        }
      }
    } else if (k == "from_expectation") {
      e.kind = CorrExpr::Kind::FromExpectation;
      Span open = peek().span;
      expect("{");
      while (!close(open)) {
        if (is_word("inclusion")) {
          next();
          e.mult = matrix();
        } else if (is_word("map")) {
          next();
          e.map = matrix();
        } else if (is_word("weights")) {
          next();
          expect("[");
          e.weights.push_back(complex());
          while (accept(",")) e.weights.push_back(complex());
          expect("]");
        } else {
          fail("inclusion, map or weights");
        }
        expect(";");
      }
    } else if (k == "module") {
      e.kind = CorrExpr::Kind::Module;
      Span open = peek().span;
      expect("{");
      expect_word("mult");
      e.module_mult = int_list();
      expect(";");
      while (!close(open)) {
        expect_word("act");
        ActLit a;
        expect("(");
        a.block = integer();
        expect(",");
        a.r = integer();
        expect(",");
        a.s = integer();
        expect(")");
        expect("=");
        a.images = matrix_list();
        expect(";");
        e.acts.push_back(std::move(a));
      }
    } else {
      throw SyntaxError(e.span, "unknown correspondence expression '" + k + "'");
    }
    return e;
  }

  bool diagram_statement(DiagramBlock& d) {
    if (peek().kind != Tok::Ident) return false;
    Span at = peek().span;
    const std::string w = peek().text;
    if (w == "algebra") {
      next();
      AlgebraDecl a;
      a.span = at;
      a.name = name();
      expect("=");
      expect_word("blocks");
      a.blocks = int_list();
      expect(";");
      for (const auto& o : d.algebras)
        if (o.name == a.name) throw Error(ErrorKind::NameError, "duplicate algebra " + a.name + where(at));
      d.algebras.push_back(std::move(a));
    } else if (w == "corr") {
      next();
      CorrDecl c;
      c.span = at;
      c.name = name();
      if (accept(":")) {
        c.source = name();
        expect("->");
        c.target = name();
      }
      expect("=");
      c.expr = corr_expr();
      expect(";");
      for (const auto& o : d.corrs)
        if (o.name == c.name) throw Error(ErrorKind::NameError, "duplicate correspondence " + c.name + where(at));
      d.corrs.push_back(std::move(c));
    } else if (w == "mult") {
      next();
      MultDecl m;
      m.span = at;
      m.g = name();
      m.h = name();
      expect("=");
      if (is_word("canonical")) {
        next();
        m.kind = MultDecl::Kind::Canonical;
      } else if (is_word("scale")) {
        next();
        m.kind = MultDecl::Kind::Scale;
        expect("(");
        m.scale = complex();
        expect(")");
      } else {
        m.kind = MultDecl::Kind::Matrix;
        m.matrix = matrix();
      }
      expect(";");
      for (const auto& o : d.mults)
        if (o.g == m.g && o.h == m.h)
          throw Error(ErrorKind::NameError, "duplicate mult " + m.g + " " + m.h + where(at));
      d.mults.push_back(std::move(m));
    } else if (w == "twomap") {
      next();
      TwoMapDecl t;
      t.span = at;
      t.name = name();
      expect("=");
      t.matrix = matrix();
      expect(";");
      for (const auto& o : d.twomaps)
        if (o.name == t.name) throw Error(ErrorKind::NameError, "duplicate twomap " + t.name + where(at));
      d.twomaps.push_back(std::move(t));
    } else {
      return false;
    }
    return true;
  }

  DiagramBlock diagram() {
    DiagramBlock d;
    d.span = peek().span;
    expect_word("diagram");
    d.name = name();
    Span open = peek().span;
    expect("{");
    while (!close(open))
      if (!diagram_statement(d)) fail("algebra, corr, mult or twomap");
    return d;
  }

  GammaLit gamma(const std::vector<GammaLit>& seen) {
    GammaLit g;
    g.span = peek().span;
    next();
    g.object = name();
    expect("=");
    g.expr = corr_expr();
    expect(";");
    for (const auto& o : seen)
      if (o.object == g.object) throw Error(ErrorKind::NameError, "duplicate gamma " + g.object + where(g.span));
    return g;
  }

  MatrixListLit matrices(const std::vector<MatrixListLit>& seen, bool single) {
    MatrixListLit m;
    m.span = peek().span;
    Token kw = next();
    m.arrow = name();
    expect("=");
    m.matrices = single ? std::vector<MatLit>{matrix()} : matrix_list();
    expect(";");
    for (const auto& o : seen)
      if (o.arrow == m.arrow) throw Error(ErrorKind::NameError, "duplicate " + kw.text + " " + m.arrow + where(m.span));
    return m;
  }

  TransformationBlock transformation() {
    TransformationBlock b;
    b.span = peek().span;
    expect_word("transformation");
    b.name = name();
    expect(":");
    b.from = name();
    expect("=>");
    b.to = name();
    Span open = peek().span;
    expect("{");
    while (!close(open)) {
      if (is_word("gamma")) b.gammas.push_back(gamma(b.gammas));
      else if (is_word("vee")) b.vees.push_back(matrices(b.vees, true));
      else fail("gamma or vee");
    }
    return b;
  }

  ConeBlock cone() {
    ConeBlock b;
    b.span = peek().span;
    expect_word("cone");
    b.name = name();
    if (is_word("over")) {
      next();
      b.over = name();
    }
    expect_word("to");
    expect_word("blocks");
    b.target = int_list();
    Span open = peek().span;
    expect("{");
    while (!close(open)) {
      if (is_word("gamma")) b.gammas.push_back(gamma(b.gammas));
      else if (is_word("S")) b.esses.push_back(matrices(b.esses, false));
      else fail("gamma or S");
    }
    return b;
  }
};

// Shortest text that reads back to the same double.
std::string num(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string num(cplx z) {
  if (z.imag() == 0.0) return num(z.real());
  if (z.real() == 0.0 && !std::signbit(z.real())) return num(z.imag()) + "i";
  std::string im = num(std::abs(z.imag())) + "i";
  return num(z.real()) + (std::signbit(z.imag()) ? "-" : "+") + im;
}

std::string ints(const std::vector<int>& v) {
  std::string s = "[";
  for (size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s + "]";
}

std::string mat(const MatLit& m) {
  std::string s = "[";
  for (size_t r = 0; r < m.size(); ++r) {
    s += r ? ", [" : "[";
    for (size_t c = 0; c < m[r].size(); ++c) s += (c ? ", " : "") + num(m[r][c]);
    s += "]";
  }
  return s + "]";
}

std::string mats(const std::vector<MatLit>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + mat(v[i]);
  return s;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + v[i];
  return s;
}

std::string expr(const CorrExpr& e) {
  switch (e.kind) {
    case CorrExpr::Kind::Std: return "std(" + std::to_string(e.n) + ")";
    case CorrExpr::Kind::Identity: return "identity";
    case CorrExpr::Kind::FromHom: {
      if (!e.mult && e.ad.empty()) return "from_hom";
      std::string s = "from_hom {";
      if (e.mult) s += " mult " + mat(*e.mult) + ";";
      if (!e.ad.empty()) s += " ad " + mats(e.ad) + ";";
      return s + " }";
    }
    case CorrExpr::Kind::FromExpectation: {
      std::string s = "from_expectation {";
      if (e.mult) s += " inclusion " + mat(*e.mult) + ";";
      if (e.map) s += " map " + mat(*e.map) + ";";
      if (!e.weights.empty()) {
        s += " weights [";
        for (size_t i = 0; i < e.weights.size(); ++i) s += (i ? ", " : "") + num(e.weights[i]);
        s += "];";
      }
      return s + " }";
    }
    case CorrExpr::Kind::Module: {
      std::string s = "module { mult " + ints(e.module_mult) + ";";
      for (const auto& a : e.acts)
        s += " act(" + std::to_string(a.block) + ", " + std::to_string(a.r) + ", " + std::to_string(a.s) +
             ") = " + mats(a.images) + ";";
      return s + " }";
    }
  }
  return "";
}

void print_statements(std::ostringstream& os, const DiagramBlock& d, const std::string& indent) {
  for (const auto& a : d.algebras) os << indent << "algebra " << a.name << " = blocks" << ints(a.blocks) << ";\n";
  for (const auto& c : d.corrs) {
    os << indent << "corr " << c.name;
    if (c.source) os << ": " << *c.source << " -> " << *c.target;
    os << " = " << expr(c.expr) << ";\n";
  }
  for (const auto& m : d.mults) {
    os << indent << "mult " << m.g << " " << m.h << " = ";
    if (m.kind == MultDecl::Kind::Canonical) os << "canonical";
    else if (m.kind == MultDecl::Kind::Scale) os << "scale(" << num(m.scale) << ")";
    else os << mat(m.matrix);
    os << ";\n";
  }
  for (const auto& t : d.twomaps) os << indent << "twomap " << t.name << " = " << mat(t.matrix) << ";\n";
}

void print_shape(std::ostringstream& os, const ShapeDecl& s) {
  os << "shape " << s.kind;
  if (s.kind == "discrete" || s.kind == "free_monoid") {
    os << "(" << s.args.at(0) << ");\n";
  } else if (s.kind == "chain") {
    os << "(" << s.args.at(0);
    if (s.stabilized_from) os << ", stabilized_from=" << *s.stabilized_from;
    os << ");\n";
  } else if (s.kind == "group") {
    os << " {\n  " << join(s.elements) << ";\n  table:";
    for (const auto& row : s.table) os << "\n    " << join(row) << ";";
    os << "\n}\n";
  } else if (s.kind == "category" || s.kind == "two_category") {
    os << " {\n";
    if (!s.objects.empty()) os << "  objects " << join(s.objects) << ";\n";
    auto arrows = [&](const char* kw, const std::vector<NamedArrow>& v, const char* sep) {
      if (v.empty()) return;
      os << "  " << kw << " ";
      for (size_t i = 0; i < v.size(); ++i)
        os << (i ? ", " : "") << v[i].name << ": " << v[i].source << " " << sep << " " << v[i].target;
      os << ";\n";
    };
    arrows("arrows", s.arrows, "->");
    for (const auto& c : s.compose) os << "  compose " << c.g << " " << c.h << " = " << c.result << ";\n";
    arrows("twoarrows", s.twoarrows, "=>");
    for (const auto& c : s.vcompose) os << "  vcompose " << c.g << " " << c.h << " = " << c.result << ";\n";
    os << "}\n";
  } else {
    os << ";\n";
  }
}

}  // namespace

DslDocument parse_diagram_dsl(const std::string& text) { return Parser(lex(text)).document(); }

std::string print_dsl(const DslDocument& doc) {
  std::ostringstream os;
  print_shape(os, doc.shape);
  print_statements(os, doc.main, "");
  for (const auto& d : doc.diagrams) {
    os << "\ndiagram " << d.name << " {\n";
    print_statements(os, d, "  ");
    os << "}\n";
  }
  for (const auto& t : doc.transformations) {
    os << "\ntransformation " << t.name << ": " << t.from << " => " << t.to << " {\n";
    for (const auto& g : t.gammas) os << "  gamma " << g.object << " = " << expr(g.expr) << ";\n";
    for (const auto& v : t.vees) os << "  vee " << v.arrow << " = " << mats(v.matrices) << ";\n";
    os << "}\n";
  }
  for (const auto& c : doc.cones) {
    os << "\ncone " << c.name;
    if (c.over != "main") os << " over " << c.over;
    os << " to blocks" << ints(c.target) << " {\n";
    for (const auto& g : c.gammas) os << "  gamma " << g.object << " = " << expr(g.expr) << ";\n";
    for (const auto& s : c.esses) os << "  S " << s.arrow << " = " << mats(s.matrices) << ";\n";
    os << "}\n";
  }
  return os.str();
}

bool same_syntax(const DslDocument& a, const DslDocument& b) { return a == b; }

}  // namespace corrcolim::dsl

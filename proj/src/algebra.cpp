#include "corrcolim/algebra.hpp"

#include "corrcolim/errors.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace corrcolim {

int Algebra::dim() const {
  int d = 0;
  for (int n : blocks) d += n * n;
  return d;
}

int Algebra::offset(int block) const {
  int d = 0;
  for (int j = 0; j < block; ++j) d += blocks[j] * blocks[j];
  return d;
}

Algebra::Unit Algebra::unit(int idx) const {
  for (int j = 0; j < num_blocks(); ++j) {
    int n = blocks[j];
    if (idx < n * n) return {j, idx / n, idx % n};
    idx -= n * n;
  }
  throw Error(ErrorKind::ShapeError, "matrix unit index out of range");
}

Algebra new_algebra(const std::vector<int>& blocks, const std::string& label) {
  for (int n : blocks)
    if (n < 1) throw Error(ErrorKind::InvalidBlock, "block size " + std::to_string(n) + " is not positive");
  return Algebra{blocks, label};
}

Algebra direct_sum(const std::vector<Algebra>& parts, const std::string& label) {
  std::vector<int> b;
  for (const auto& p : parts) b.insert(b.end(), p.blocks.begin(), p.blocks.end());
  return Algebra{b, label};
}

bool isomorphic(const Algebra& a, const Algebra& b) {
  auto x = a.blocks, y = b.blocks;
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return x == y;
}

Element zero_element(const Algebra& a) {
  Element e;
  for (int n : a.blocks) e.push_back(Mat::Zero(n, n));
  return e;
}

Element unit_element(const Algebra& a) {
  Element e;
  for (int n : a.blocks) e.push_back(Mat::Identity(n, n));
  return e;
}

Element matrix_unit(const Algebra& a, int idx) {
  auto u = a.unit(idx);
  Element e = zero_element(a);
  e[u.block](u.r, u.s) = 1.0;
  return e;
}

Element block_unit(const Algebra& a, int block) {
  Element e = zero_element(a);
  e[block].setIdentity();
  return e;
}

void check_shape(const Algebra& a, const Element& x) {
  if (static_cast<int>(x.size()) != a.num_blocks())
    throw Error(ErrorKind::ShapeError, "element has wrong number of blocks");
  for (int j = 0; j < a.num_blocks(); ++j)
    if (x[j].rows() != a.blocks[j] || x[j].cols() != a.blocks[j])
      throw Error(ErrorKind::ShapeError, "block " + std::to_string(j) + " has wrong size");
}

Vec to_coords(const Algebra& a, const Element& x) {
  check_shape(a, x);
  Vec v(a.dim());
  int k = 0;
  for (int j = 0; j < a.num_blocks(); ++j)
    for (int r = 0; r < a.blocks[j]; ++r)
      for (int s = 0; s < a.blocks[j]; ++s) v(k++) = x[j](r, s);
  return v;
}

Element from_coords(const Algebra& a, const Vec& v) {
  if (v.size() != a.dim()) throw Error(ErrorKind::ShapeError, "coordinate vector has wrong length");
  Element x = zero_element(a);
  int k = 0;
  for (int j = 0; j < a.num_blocks(); ++j)
    for (int r = 0; r < a.blocks[j]; ++r)
      for (int s = 0; s < a.blocks[j]; ++s) x[j](r, s) = v(k++);
  return x;
}

Element multiply(const Element& x, const Element& y) {
  if (x.size() != y.size()) throw Error(ErrorKind::ShapeError, "block count mismatch in product");
  Element z(x.size());
  for (size_t j = 0; j < x.size(); ++j) z[j] = x[j] * y[j];
  return z;
}

Element adjoint(const Element& x) {
  Element z(x.size());
  for (size_t j = 0; j < x.size(); ++j) z[j] = x[j].adjoint();
  return z;
}

Element add(const Element& x, const Element& y, cplx beta) {
  if (x.size() != y.size()) throw Error(ErrorKind::ShapeError, "block count mismatch in sum");
  Element z(x.size());
  for (size_t j = 0; j < x.size(); ++j) z[j] = x[j] + beta * y[j];
  return z;
}

Element scale(const Element& x, cplx c) {
  Element z(x.size());
  for (size_t j = 0; j < x.size(); ++j) z[j] = c * x[j];
  return z;
}

double operator_norm(const Algebra& a, const Element& x) {
  check_shape(a, x);
  double m = 0;
  for (const auto& b : x) m = std::max(m, opnorm(b));
  return m;
}

Vec apply_coords(const StarHom& h, const Vec& x) {
  if (x.size() != h.map.cols()) throw Error(ErrorKind::ShapeError, "argument does not match hom source");
  return h.map * x;
}

Element apply_hom(const StarHom& h, const Element& x) {
  return from_coords(h.target, apply_coords(h, to_coords(h.source, x)));
}

Vec product_coords(const Algebra& a, int i, int j) {
  auto ui = a.unit(i), uj = a.unit(j);
  Vec v = Vec::Zero(a.dim());
  if (ui.block == uj.block && ui.s == uj.r) v(a.index(ui.block, ui.r, uj.s)) = 1.0;
  return v;
}

Report validate_star_hom(const StarHom& h, double tol) {
  if (h.map.rows() != h.target.dim() || h.map.cols() != h.source.dim())
    throw Error(ErrorKind::ShapeError, "hom map is " + std::to_string(h.map.rows()) + "x" +
                                           std::to_string(h.map.cols()) + ", expected " +
                                           std::to_string(h.target.dim()) + "x" +
                                           std::to_string(h.source.dim()));
  Report rep(tol);
  const int d = h.source.dim();
  std::vector<Element> img(d);
  for (int i = 0; i < d; ++i) img[i] = from_coords(h.target, h.map.col(i));
  double mdef = 0, sdef = 0;
  std::string mwit, swit;
  for (int i = 0; i < d; ++i) {
    auto ui = h.source.unit(i);
    int istar = h.source.index(ui.block, ui.s, ui.r);
    double s = operator_norm(h.target, add(img[istar], adjoint(img[i]), -1.0));
    if (s > sdef) {
      sdef = s;
      swit = "unit " + std::to_string(i);
    }
    for (int j = 0; j < d; ++j) {
      Vec pc = product_coords(h.source, i, j);
      Element lhs = from_coords(h.target, h.map * pc);
      double m = operator_norm(h.target, add(lhs, multiply(img[i], img[j]), -1.0));
      if (m > mdef) {
        mdef = m;
        mwit = "units (" + std::to_string(i) + "," + std::to_string(j) + ")";
      }
    }
  }
  rep.add("multiplicativity", mdef, mwit);
  rep.add("star", sdef, swit);
  Check c{"nondegenerate", 0.0, true, ""};
  c.defect = h.target.is_zero() ? 0.0
                                : operator_norm(h.target, add(apply_hom(h, unit_element(h.source)),
                                                              unit_element(h.target), -1.0));
  // reported, not a pass condition
  rep.note(std::string("nondegenerate=") + (c.defect <= tol ? "true" : "false"));
  return rep;
}

bool is_unital(const StarHom& h, double tol) {
  if (h.target.is_zero()) return true;
  return operator_norm(h.target, add(apply_hom(h, unit_element(h.source)), unit_element(h.target), -1.0)) <= tol;
}

StarHom identity_hom(const Algebra& a) {
  return StarHom{a, a, Mat::Identity(a.dim(), a.dim())};
}

StarHom compose(const StarHom& g, const StarHom& f) {
  if (g.source != f.target) throw Error(ErrorKind::CompositionError, "homs are not composable");
  return StarHom{f.source, g.target, g.map * f.map};
}

StarHom standard_hom(const Algebra& source, const Algebra& target,
                     const std::vector<std::vector<int>>& mult) {
  if (static_cast<int>(mult.size()) != target.num_blocks())
    throw Error(ErrorKind::ShapeError, "multiplicity matrix needs one row per target block");
  StarHom h{source, target, Mat::Zero(target.dim(), source.dim())};
  for (int j = 0; j < target.num_blocks(); ++j) {
    if (static_cast<int>(mult[j].size()) != source.num_blocks())
      throw Error(ErrorKind::ShapeError, "multiplicity matrix needs one column per source block");
    int used = 0;
    for (int i = 0; i < source.num_blocks(); ++i) used += mult[j][i] * source.blocks[i];
    if (used > target.blocks[j])
      throw Error(ErrorKind::ShapeError, "multiplicities overflow target block " + std::to_string(j));
    int pos = 0;
    for (int i = 0; i < source.num_blocks(); ++i) {
      int n = source.blocks[i];
      for (int c = 0; c < mult[j][i]; ++c) {
        for (int r = 0; r < n; ++r)
          for (int s = 0; s < n; ++s)
            h.map(target.index(j, pos + r, pos + s), source.index(i, r, s)) = 1.0;
        pos += n;
      }
    }
  }
  return h;
}

StarHom conjugate(const StarHom& h, const Element& u) {
  check_shape(h.target, u);
  StarHom out = h;
  for (int i = 0; i < h.source.dim(); ++i) {
    Element y = from_coords(h.target, h.map.col(i));
    out.map.col(i) = to_coords(h.target, multiply(multiply(u, y), adjoint(u)));
  }
  return out;
}

std::vector<std::vector<int>> multiplicity_matrix(const StarHom& h, double tol) {
  std::vector<std::vector<int>> m(h.target.num_blocks(), std::vector<int>(h.source.num_blocks(), 0));
  for (int i = 0; i < h.source.num_blocks(); ++i) {
    Element p = from_coords(h.target, h.map.col(h.source.index(i, 0, 0)));
    for (int j = 0; j < h.target.num_blocks(); ++j) m[j][i] = rank_of(p[j], tol);
  }
  return m;
}

}  // namespace corrcolim

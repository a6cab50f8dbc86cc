#include "corrcolim/corr.hpp"

#include "corrcolim/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace corrcolim {

int HilbertModule::dim() const {
  int d = 0;
  for (int j = 0; j < base.num_blocks(); ++j) d += mult[j] * base.blocks[j];
  return d;
}

int HilbertModule::offset(int block) const {
  int d = 0;
  for (int j = 0; j < block; ++j) d += mult[j] * base.blocks[j];
  return d;
}

HilbertModule make_module(const Algebra& base, const std::vector<int>& mult) {
  if (static_cast<int>(mult.size()) != base.num_blocks())
    throw Error(ErrorKind::ShapeError, "need one multiplicity per block of the base algebra");
  for (int m : mult)
    if (m < 0) throw Error(ErrorKind::ShapeError, "negative multiplicity");
  return HilbertModule{base, mult};
}

namespace {

Mat block_of(const HilbertModule& m, const Vec& x, int j) {
  int rows = m.mult[j], cols = m.base.blocks[j];
  Mat b(rows, cols);
  int off = m.offset(j);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) b(r, c) = x(off + r * cols + c);
  return b;
}

}  // namespace

Mat right_full(const HilbertModule& m, const Element& b) {
  check_shape(m.base, b);
  Mat out = Mat::Zero(m.dim(), m.dim());
  for (int j = 0; j < m.base.num_blocks(); ++j) {
    int n = m.base.blocks[j], mj = m.mult[j];
    if (mj == 0) continue;
    out.block(m.offset(j), m.offset(j), mj * n, mj * n) = kron(Mat::Identity(mj, mj), b[j].transpose());
  }
  return out;
}

Mat right_full(const HilbertModule& m, int basis_idx) { return right_full(m, matrix_unit(m.base, basis_idx)); }

Vec inner(const HilbertModule& m, const Vec& x, const Vec& y) {
  Element e = zero_element(m.base);
  for (int j = 0; j < m.base.num_blocks(); ++j)
    if (m.mult[j] > 0) e[j] = block_of(m, x, j).adjoint() * block_of(m, y, j);
  return to_coords(m.base, e);
}

Mat map_full(const HilbertModule& from, const HilbertModule& to, const std::vector<Mat>& blocks) {
  if (!(from.base == to.base)) throw Error(ErrorKind::ShapeError, "maps must be between modules over one base");
  Mat out = Mat::Zero(to.dim(), from.dim());
  for (int j = 0; j < from.base.num_blocks(); ++j) {
    int n = from.base.blocks[j];
    if (to.mult[j] == 0 || from.mult[j] == 0) continue;
    out.block(to.offset(j), from.offset(j), to.mult[j] * n, from.mult[j] * n) = kron(blocks[j], Mat::Identity(n, n));
  }
  return out;
}

std::vector<Mat> map_blocks(const HilbertModule& from, const HilbertModule& to, const Mat& full) {
  std::vector<Mat> out;
  for (int j = 0; j < from.base.num_blocks(); ++j) {
    Mat b(to.mult[j], from.mult[j]);
    for (int r2 = 0; r2 < to.mult[j]; ++r2)
      for (int r1 = 0; r1 < from.mult[j]; ++r1) b(r2, r1) = full(to.index(j, r2, 0), from.index(j, r1, 0));
    out.push_back(b);
  }
  return out;
}

double right_linearity_defect(const HilbertModule& from, const HilbertModule& to, const Mat& full) {
  if (full.rows() != to.dim() || full.cols() != from.dim()) return INFINITY;
  return opnorm(full - map_full(from, to, map_blocks(from, to, full)));
}

double isometry_defect(const HilbertModule& from, const HilbertModule& to, const Mat& full) {
  auto b = map_blocks(from, to, full);
  double d = 0;
  for (const auto& u : b)
    if (u.cols() > 0) d = std::max(d, opnorm(u.adjoint() * u - Mat::Identity(u.cols(), u.cols())));
  return d;
}

Mat left_full(const Correspondence& c, int basis_idx) {
  return map_full(c.module, c.module, c.left[basis_idx]);
}

Mat left_full(const Correspondence& c, const Vec& acoords) {
  Mat out = Mat::Zero(c.dim(), c.dim());
  for (int a = 0; a < acoords.size(); ++a)
    if (acoords(a) != cplx(0)) out += acoords(a) * left_full(c, a);
  return out;
}

Mat rank_one_full(const HilbertModule& m, const RankOne& t) {
  std::vector<Mat> blocks;
  for (int j = 0; j < m.base.num_blocks(); ++j) blocks.push_back(block_of(m, t.xi, j) * block_of(m, t.eta, j).adjoint());
  return map_full(m, m, blocks);
}

namespace {

std::vector<std::vector<RankOne>> make_certificate(const HilbertModule& m, const std::vector<std::vector<Mat>>& left) {
  std::vector<std::vector<RankOne>> cert(left.size());
  for (size_t a = 0; a < left.size(); ++a) {
    for (int j = 0; j < m.base.num_blocks(); ++j) {
      int mj = m.mult[j];
      for (int r = 0; r < mj; ++r) {
        Vec col = left[a][j].col(r);
        if (col.norm() == 0.0) continue;
        RankOne t{Vec::Zero(m.dim()), Vec::Zero(m.dim())};
        for (int i = 0; i < mj; ++i) t.xi(m.index(j, i, 0)) = col(i);
        t.eta(m.index(j, r, 0)) = 1.0;
        cert[a].push_back(t);
      }
    }
  }
  return cert;
}

}  // namespace

Correspondence make_correspondence(const Algebra& source, const HilbertModule& module,
                                   std::vector<std::vector<Mat>> left) {
  if (static_cast<int>(left.size()) != source.dim())
    throw Error(ErrorKind::ShapeError, "left action needs one entry per matrix unit of the source");
  for (auto& per : left) {
    if (static_cast<int>(per.size()) != module.base.num_blocks())
      throw Error(ErrorKind::ShapeError, "left action needs one block per target block");
    for (int j = 0; j < module.base.num_blocks(); ++j)
      if (per[j].rows() != module.mult[j] || per[j].cols() != module.mult[j])
        throw Error(ErrorKind::ShapeError, "left action block has wrong size");
  }
  Correspondence c;
  c.source = source;
  c.module = module;
  c.certificate = make_certificate(module, left);
  c.left = std::move(left);
  return c;
}

std::vector<std::vector<int>> multiplicity_matrix(const Correspondence& c, double tol) {
  std::vector<std::vector<int>> m(c.target().num_blocks(), std::vector<int>(c.source.num_blocks(), 0));
  for (int i = 0; i < c.source.num_blocks(); ++i) {
    int a = c.source.index(i, 0, 0);
    for (int j = 0; j < c.target().num_blocks(); ++j) m[j][i] = rank_of(c.left[a][j], tol);
  }
  return m;
}

Correspondence identity_correspondence(const Algebra& a) {
  HilbertModule m = make_module(a, a.blocks);
  std::vector<std::vector<Mat>> left(a.dim());
  for (int idx = 0; idx < a.dim(); ++idx) {
    auto u = a.unit(idx);
    for (int j = 0; j < a.num_blocks(); ++j) {
      Mat t = Mat::Zero(a.blocks[j], a.blocks[j]);
      if (j == u.block) t(u.r, u.s) = 1.0;
      left[idx].push_back(t);
    }
  }
  auto c = make_correspondence(a, m, std::move(left));
  c.hom = identity_hom(a);
  for (int n : a.blocks) c.ideal_basis.push_back(Mat::Identity(n, n));
  return c;
}

Correspondence zero_correspondence(const Algebra& source, const Algebra& target) {
  HilbertModule m = make_module(target, std::vector<int>(target.num_blocks(), 0));
  std::vector<std::vector<Mat>> left(source.dim(), std::vector<Mat>(target.num_blocks(), Mat(0, 0)));
  return make_correspondence(source, m, std::move(left));
}

Correspondence standard_correspondence(int n) {
  Algebra c = new_algebra({1}, "C");
  HilbertModule m = make_module(c, {n});
  std::vector<std::vector<Mat>> left{{Mat::Identity(n, n)}};
  auto out = make_correspondence(c, m, std::move(left));
  if (n == 1) {
    out.hom = identity_hom(c);
    out.ideal_basis = {Mat::Identity(1, 1)};
  }
  return out;
}

Canonical canonicalize_module(const RawModule& raw, double tol, bool check_positive) {
  const Algebra& b = raw.base;
  const int d = raw.dim;
  if (static_cast<int>(raw.right.size()) != b.dim() || static_cast<int>(raw.form.size()) != b.num_blocks())
    throw Error(ErrorKind::ShapeError, "raw module needs a right action per matrix unit and a form per block");
  for (int k = 0; k < b.num_blocks(); ++k) {
    if (raw.form[k].empty()) throw Error(ErrorKind::ShapeError, "raw form block is empty");
    const Mat& g = raw.form[k][0];
    if (g.rows() != d || g.cols() != d) throw Error(ErrorKind::ShapeError, "raw form has wrong size");
  }
  if (check_positive) {
    for (int k = 0; k < b.num_blocks(); ++k) {
      int n = b.blocks[k];
      if (static_cast<int>(raw.form[k].size()) != n * n)
        throw Error(ErrorKind::ShapeError, "positivity check needs every entry of the form");
      Mat big(d * n, d * n);
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s)
          for (int u = 0; u < d; ++u)
            for (int v = 0; v < d; ++v) big(u * n + r, v * n + s) = raw.form[k][r * n + s](u, v);
      double herm = opnorm(big - big.adjoint());
      double scale = std::max(1.0, opnorm(big));
      if (herm > tol * scale) throw Error(ErrorKind::NotPositive, "form is not hermitian (defect " + std::to_string(herm) + ")");
      if (big.size() > 0) {
        Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (big + big.adjoint()));
        double lo = es.eigenvalues()(0);
        if (lo < -tol * scale)
          throw Error(ErrorKind::NotPositive, "form has negative eigenvalue " + std::to_string(lo));
      }
    }
  }
  std::vector<int> mult(b.num_blocks(), 0);
  std::vector<PivotedCholesky> pcs;
  for (int k = 0; k < b.num_blocks(); ++k) {
    const Mat& g = raw.form[k][0];
    pcs.push_back(pivoted_cholesky(0.5 * (g + g.adjoint()), tol));
    mult[k] = pcs.back().rank;
  }
  HilbertModule m = make_module(b, mult);
  Mat q = Mat::Zero(m.dim(), d);
  for (int k = 0; k < b.num_blocks(); ++k) {
    const Mat& g = raw.form[k][0];
    int n = b.blocks[k];
    for (int c = 0; c < n; ++c) {
      Mat gr = g * raw.right[b.index(k, c, 0)];
      for (int r = 0; r < mult[k]; ++r) q.row(m.index(k, r, c)) = pcs[k].coeffs.col(r).adjoint() * gr;
    }
  }
  return Canonical{m, q, pinv(q)};
}

namespace {

std::vector<std::vector<Mat>> blocks_of_operators(const HilbertModule& m, const std::vector<Mat>& fulls) {
  std::vector<std::vector<Mat>> out;
  for (const auto& f : fulls) out.push_back(map_blocks(m, m, f));
  return out;
}

}  // namespace

Report validate_correspondence(const Correspondence& c, double tol) {
  Report rep(tol);
  const Algebra& a = c.source;
  const int da = a.dim();
  if (static_cast<int>(c.left.size()) != da) throw Error(ErrorKind::ShapeError, "left action size mismatch");
  std::vector<Mat> l(da);
  for (int i = 0; i < da; ++i) l[i] = left_full(c, i);
  double mdef = 0, sdef = 0;
  std::string mw, sw;
  for (int i = 0; i < da; ++i) {
    auto ui = a.unit(i);
    double s = opnorm(l[a.index(ui.block, ui.s, ui.r)] - l[i].adjoint());
    if (s > sdef) sdef = s, sw = "unit " + std::to_string(i);
    for (int j = 0; j < da; ++j) {
      Vec pc = product_coords(a, i, j);
      Mat lhs = Mat::Zero(c.dim(), c.dim());
      for (int k = 0; k < da; ++k)
        if (pc(k) != cplx(0)) lhs += pc(k) * l[k];
      double m = opnorm(lhs - l[i] * l[j]);
      if (m > mdef) mdef = m, mw = "units (" + std::to_string(i) + "," + std::to_string(j) + ")";
    }
  }
  rep.add("left_multiplicativity", mdef, mw);
  rep.add("left_star", sdef, sw);
  int dim = c.dim();
  int rank = 0;
  if (dim > 0) {
    Mat all(dim, dim * da);
    for (int i = 0; i < da; ++i) all.block(0, i * dim, dim, dim) = l[i];
    rank = rank_of(all, tol);
  }
  rep.flag("nondegenerate", rank == dim, "rank " + std::to_string(rank) + " of " + std::to_string(dim),
           static_cast<double>(dim - rank));
  double cdef = 0;
  std::string cw;
  for (int i = 0; i < da; ++i) {
    Mat s = Mat::Zero(dim, dim);
    if (i < static_cast<int>(c.certificate.size()))
      for (const auto& t : c.certificate[i]) s += rank_one_full(c.module, t);
    double d = opnorm(s - l[i]);
    if (d > cdef) cdef = d, cw = "unit " + std::to_string(i);
  }
  rep.add("certificate", cdef, cw);
  return rep;
}

Report validate_iso(const CorrIso& u, const Correspondence& from, const Correspondence& to, double tol) {
  Report rep(tol);
  if (from.source != to.source || !(from.module.base == to.module.base))
    throw Error(ErrorKind::ShapeError, "isomorphism endpoints have different algebras");
  if (u.rows() != to.dim() || u.cols() != from.dim()) {
    rep.flag("shape", false, std::to_string(u.rows()) + "x" + std::to_string(u.cols()) + " vs " +
                                 std::to_string(to.dim()) + "x" + std::to_string(from.dim()));
    return rep;
  }
  rep.add("right_linear", right_linearity_defect(from.module, to.module, u));
  rep.add("unitary", std::max(opnorm(u.adjoint() * u - Mat::Identity(u.cols(), u.cols())),
                              opnorm(u * u.adjoint() - Mat::Identity(u.rows(), u.rows()))));
  double idef = 0;
  std::string w;
  for (int a = 0; a < from.source.dim(); ++a) {
    double d = opnorm(u * left_full(from, a) - left_full(to, a) * u);
    if (d > idef) idef = d, w = "unit " + std::to_string(a);
  }
  rep.add("intertwines", idef, w);
  return rep;
}

Tensor tensor(const Correspondence& e, const Correspondence& f) {
  if (!(e.target() == f.source))
    throw Error(ErrorKind::CompositionError, "cannot tensor: target of the first factor is not the source of the second");
  const Algebra& bAlg = e.target();
  const Algebra& cAlg = f.target();
  const int de = e.dim(), df = f.dim(), d = de * df;

  RawModule raw;
  raw.dim = d;
  raw.base = cAlg;
  for (int g = 0; g < cAlg.dim(); ++g) raw.right.push_back(kron(Mat::Identity(de, de), right_full(f.module, g)));

  // gamma[beta](a1,a2): coefficient of unit beta in <e_a1, e_a2>_B
  std::vector<Mat> gamma(bAlg.dim(), Mat::Zero(de, de));
  for (int j = 0; j < bAlg.num_blocks(); ++j) {
    int n = bAlg.blocks[j];
    for (int r = 0; r < e.module.mult[j]; ++r)
      for (int c1 = 0; c1 < n; ++c1)
        for (int c2 = 0; c2 < n; ++c2)
          gamma[bAlg.index(j, c1, c2)](e.module.index(j, r, c1), e.module.index(j, r, c2)) = 1.0;
  }
  std::vector<Mat> phi(bAlg.dim());
  for (int beta = 0; beta < bAlg.dim(); ++beta) phi[beta] = left_full(f, beta);

  for (int k = 0; k < cAlg.num_blocks(); ++k) {
    // selector for entry (0,0) of block k of <f1, f2>_C
    Mat sel = Mat::Zero(df, df);
    for (int i = 0; i < f.module.mult[k]; ++i) sel(f.module.index(k, i, 0), f.module.index(k, i, 0)) = 1.0;
    Mat g = Mat::Zero(d, d);
    for (int beta = 0; beta < bAlg.dim(); ++beta) {
      if (gamma[beta].isZero()) continue;
      Mat sp = sel * phi[beta];
      if (sp.isZero()) continue;
      g += kron(gamma[beta], sp);
    }
    raw.form.push_back({g});
  }
  Canonical can = canonicalize_module(raw, kDefaultTol, false);

  std::vector<Mat> lefts;
  for (int a = 0; a < e.source.dim(); ++a)
    lefts.push_back(can.quotient * kron(left_full(e, a), Mat::Identity(df, df)) * can.lift);
  Tensor t;
  t.corr = make_correspondence(e.source, can.module, blocks_of_operators(can.module, lefts));
  t.embed = can.quotient;
  t.lift = can.lift;
  return t;
}

Mat tensor_maps(const Tensor& src, const Tensor& dst, const Mat& f, const Mat& g) {
  return dst.embed * kron(f, g) * src.lift;
}

CorrIso associator(const Correspondence& e, const Correspondence& f, const Correspondence& g) {
  Tensor ef = tensor(e, f);
  Tensor ef_g = tensor(ef.corr, g);
  Tensor fg = tensor(f, g);
  Tensor e_fg = tensor(e, fg.corr);
  const int dg = g.dim(), de = e.dim();
  Mat x1 = ef_g.embed * kron(ef.embed, Mat::Identity(dg, dg));
  Mat x2 = e_fg.embed * kron(Mat::Identity(de, de), fg.embed);
  return x2 * pinv(x1);
}

CorrIso left_unit(const Correspondence& e) {
  Correspondence id = identity_correspondence(e.source);
  Tensor t = tensor(id, e);
  const int da = e.source.dim(), de = e.dim();
  Mat m(de, da * de);
  for (int a = 0; a < da; ++a) m.block(0, a * de, de, de) = left_full(e, a);
  return m * t.lift;
}

CorrIso right_unit(const Correspondence& e) {
  Correspondence id = identity_correspondence(e.target());
  Tensor t = tensor(e, id);
  const int db = e.target().dim(), de = e.dim();
  Mat m = Mat::Zero(de, de * db);
  for (int b = 0; b < db; ++b) {
    Mat r = right_full(e.module, b);
    for (int x = 0; x < de; ++x) m.col(x * db + b) = r.col(x);
  }
  return m * t.lift;
}

namespace {

// Orthonormal basis adapted to the isotypic decomposition of a representation on C^m.
bool adapted_basis(const Algebra& a, const std::vector<std::vector<Mat>>& left, int j, int m, Mat& out,
                   std::vector<int>& counts, double tol) {
  std::vector<Vec> cols;
  counts.assign(a.num_blocks(), 0);
  for (int i = 0; i < a.num_blocks(); ++i) {
    const Mat& p = left[a.index(i, 0, 0)][j];
    Mat v = range_basis(p, tol);
    counts[i] = static_cast<int>(v.cols());
    for (int t = 0; t < v.cols(); ++t)
      for (int r = 0; r < a.blocks[i]; ++r) cols.push_back(left[a.index(i, r, 0)][j] * v.col(t));
  }
  Mat b(m, static_cast<int>(cols.size()));
  for (size_t k = 0; k < cols.size(); ++k) b.col(k) = cols[k];
  if (b.cols() > m) return false;
  if (b.cols() < m) {
    Mat k = null_space(b.adjoint(), tol);
    Mat full(m, m);
    full << b, k;
    out = full;
  } else {
    out = b;
  }
  return true;
}

}  // namespace

IsoSearch find_isomorphism(const Correspondence& c1, const Correspondence& c2, double tol) {
  IsoSearch res;
  if (c1.source != c2.source || !(c1.module.base == c2.module.base)) {
    res.witness = "different source or target algebras";
    return res;
  }
  res.mult1 = multiplicity_matrix(c1, tol);
  res.mult2 = multiplicity_matrix(c2, tol);
  if (res.mult1 != res.mult2 || c1.module.mult != c2.module.mult) {
    res.witness = "dimensions (" + std::to_string(c1.dim()) + "," + std::to_string(c2.dim()) + ")";
    return res;
  }
  std::vector<Mat> blocks;
  for (int j = 0; j < c1.target().num_blocks(); ++j) {
    int m = c1.module.mult[j];
    if (m == 0) {
      blocks.push_back(Mat(0, 0));
      continue;
    }
    Mat b1, b2;
    std::vector<int> n1, n2;
    if (!adapted_basis(c1.source, c1.left, j, m, b1, n1, tol) || !adapted_basis(c2.source, c2.left, j, m, b2, n2, tol) ||
        b1.cols() != m || b2.cols() != m) {
      res.witness = "left action is not a representation on block " + std::to_string(j);
      return res;
    }
    blocks.push_back(b2 * b1.adjoint());
  }
  Mat u = map_full(c1.module, c2.module, blocks);
  Report r = validate_iso(u, c1, c2, std::max(tol, 1e-9));
  res.defect = r.max_defect();
  if (!r.pass()) {
    res.witness = "constructed intertwiner failed verification, defect " + std::to_string(res.defect);
    return res;
  }
  res.iso = u;
  return res;
}

Correspondence from_star_hom(const StarHom& h, bool strict) {
  const Algebra& b = h.target;
  Element p = apply_hom(h, unit_element(h.source));
  std::vector<Mat> w;
  std::vector<int> mult;
  for (int j = 0; j < b.num_blocks(); ++j) {
    Mat pj = 0.5 * (p[j] + p[j].adjoint());
    w.push_back(range_basis(pj));
    mult.push_back(static_cast<int>(w.back().cols()));
  }
  HilbertModule m = make_module(b, mult);
  if (strict && m.dim() == 0 && !h.source.is_zero())
    throw Error(ErrorKind::DegenerateAction, "zero homomorphism gives the zero module");
  std::vector<std::vector<Mat>> left(h.source.dim());
  for (int a = 0; a < h.source.dim(); ++a) {
    Element img = from_coords(b, h.map.col(a));
    for (int j = 0; j < b.num_blocks(); ++j) left[a].push_back(w[j].adjoint() * img[j] * w[j]);
  }
  auto c = make_correspondence(h.source, m, std::move(left));
  c.hom = h;
  c.ideal_basis = w;
  return c;
}

std::optional<StarHom> underlying_hom(const Correspondence& c, std::vector<Mat>* ideal_basis) {
  if (c.hom) {
    if (ideal_basis) *ideal_basis = c.ideal_basis;
    return c.hom;
  }
  const Algebra& b = c.target();
  for (int j = 0; j < b.num_blocks(); ++j)
    if (c.module.mult[j] > b.blocks[j]) return std::nullopt;
  std::vector<Mat> w;
  for (int j = 0; j < b.num_blocks(); ++j) w.push_back(Mat::Identity(b.blocks[j], c.module.mult[j]));
  StarHom h{c.source, b, Mat::Zero(b.dim(), c.source.dim())};
  for (int a = 0; a < c.source.dim(); ++a) {
    Element img = zero_element(b);
    for (int j = 0; j < b.num_blocks(); ++j) img[j] = w[j] * c.left[a][j] * w[j].adjoint();
    h.map.col(a) = to_coords(b, img);
  }
  if (ideal_basis) *ideal_basis = w;
  return h;
}

Correspondence direct_sum(const std::vector<Correspondence>& parts) {
  if (parts.empty()) throw Error(ErrorKind::CompositionError, "empty direct sum");
  const Algebra& b = parts[0].target();
  std::vector<Algebra> sources;
  for (const auto& p : parts) {
    if (!(p.target() == b)) throw Error(ErrorKind::CompositionError, "direct sum needs a common target algebra");
    sources.push_back(p.source);
  }
  Algebra a = direct_sum(sources);
  std::vector<int> mult(b.num_blocks(), 0);
  for (const auto& p : parts)
    for (int j = 0; j < b.num_blocks(); ++j) mult[j] += p.module.mult[j];
  HilbertModule m = make_module(b, mult);
  std::vector<std::vector<Mat>> left;
  for (size_t i = 0; i < parts.size(); ++i) {
    for (int la = 0; la < parts[i].source.dim(); ++la) {
      std::vector<Mat> per;
      for (int j = 0; j < b.num_blocks(); ++j) {
        Mat t = Mat::Zero(mult[j], mult[j]);
        int off = 0;
        for (size_t q = 0; q < i; ++q) off += parts[q].module.mult[j];
        int mj = parts[i].module.mult[j];
        if (mj > 0) t.block(off, off, mj, mj) = parts[i].left[la][j];
        per.push_back(t);
      }
      left.push_back(per);
    }
  }
  return make_correspondence(a, m, std::move(left));
}

Decomposition decompose_by_projections(const Correspondence& e, const std::vector<Algebra>& summands) {
  Algebra sum = direct_sum(summands);
  if (sum != e.source) throw Error(ErrorKind::CompositionError, "summands do not add up to the source algebra");
  const Algebra& b = e.target();
  Decomposition out;
  std::vector<std::vector<Mat>> ws(summands.size());
  int block_base = 0;
  for (size_t i = 0; i < summands.size(); ++i) {
    const Algebra& ai = summands[i];
    std::vector<int> mult;
    for (int j = 0; j < b.num_blocks(); ++j) {
      // p_i restricted to target block j
      Mat p = Mat::Zero(e.module.mult[j], e.module.mult[j]);
      for (int q = 0; q < ai.num_blocks(); ++q)
        for (int r = 0; r < ai.blocks[q]; ++r) p += e.left[e.source.index(block_base + q, r, r)][j];
      ws[i].push_back(range_basis(0.5 * (p + p.adjoint())));
      mult.push_back(static_cast<int>(ws[i].back().cols()));
    }
    HilbertModule m = make_module(b, mult);
    std::vector<std::vector<Mat>> left;
    for (int la = 0; la < ai.dim(); ++la) {
      auto u = ai.unit(la);
      int ga = e.source.index(block_base + u.block, u.r, u.s);
      std::vector<Mat> per;
      for (int j = 0; j < b.num_blocks(); ++j) per.push_back(ws[i][j].adjoint() * e.left[ga][j] * ws[i][j]);
      left.push_back(per);
    }
    out.parts.push_back(make_correspondence(ai, m, std::move(left)));
    block_base += ai.num_blocks();
  }
  Correspondence re = direct_sum(out.parts);
  std::vector<Mat> blocks;
  for (int j = 0; j < b.num_blocks(); ++j) {
    Mat u(e.module.mult[j], re.module.mult[j]);
    int col = 0;
    for (size_t i = 0; i < summands.size(); ++i) {
      u.block(0, col, u.rows(), ws[i][j].cols()) = ws[i][j];
      col += static_cast<int>(ws[i][j].cols());
    }
    blocks.push_back(u);
  }
  if (re.module.mult != e.module.mult) throw Error(ErrorKind::CompositionError, "projections do not sum to the identity");
  out.reassembly = map_full(re.module, e.module, blocks);
  out.defect = validate_iso(out.reassembly, re, e).max_defect();
  return out;
}

Decomposition decompose_into_product(const Correspondence& e, const std::vector<Algebra>& summands) {
  Algebra sum = direct_sum(summands);
  if (sum != e.target()) throw Error(ErrorKind::CompositionError, "summands do not add up to the target algebra");
  Decomposition out;
  int base = 0;
  for (const auto& bi : summands) {
    std::vector<int> mult(e.module.mult.begin() + base, e.module.mult.begin() + base + bi.num_blocks());
    HilbertModule m = make_module(bi, mult);
    std::vector<std::vector<Mat>> left;
    for (int a = 0; a < e.source.dim(); ++a)
      left.emplace_back(e.left[a].begin() + base, e.left[a].begin() + base + bi.num_blocks());
    out.parts.push_back(make_correspondence(e.source, m, std::move(left)));
    base += bi.num_blocks();
  }
  // the block orderings agree, so reassembly is the identity
  out.reassembly = Mat::Identity(e.dim(), e.dim());
  int total = 0;
  for (const auto& p : out.parts) total += p.dim();
  out.defect = total == e.dim() ? 0.0 : INFINITY;
  return out;
}

Mat left_mult_matrix(const Algebra& a, const Element& x) {
  Mat m(a.dim(), a.dim());
  for (int i = 0; i < a.dim(); ++i) m.col(i) = to_coords(a, multiply(x, matrix_unit(a, i)));
  return m;
}

Mat right_mult_matrix(const Algebra& a, const Element& x) {
  Mat m(a.dim(), a.dim());
  for (int i = 0; i < a.dim(); ++i) m.col(i) = to_coords(a, multiply(matrix_unit(a, i), x));
  return m;
}

Correspondence correspondence_from_expectation(const Algebra& a, const StarHom& inclusion, const Mat& expectation,
                                               double tol) {
  const Algebra& b = inclusion.source;
  if (inclusion.target != a) throw Error(ErrorKind::ShapeError, "inclusion must land in A");
  if (expectation.rows() != b.dim() || expectation.cols() != a.dim())
    throw Error(ErrorKind::ShapeError, "expectation must be a dim(B) x dim(A) matrix");
  double idem = opnorm(expectation * inclusion.map - Mat::Identity(b.dim(), b.dim()));
  if (idem > tol) throw Error(ErrorKind::NotAnExpectation, "E is not the identity on B (defect " + std::to_string(idem) + ")");
  double bim = 0;
  for (int b1 = 0; b1 < b.dim(); ++b1) {
    Element ib1 = from_coords(a, inclusion.map.col(b1));
    for (int b2 = 0; b2 < b.dim(); ++b2) {
      Element ib2 = from_coords(a, inclusion.map.col(b2));
      for (int x = 0; x < a.dim(); ++x) {
        Element ax = matrix_unit(a, x);
        Vec lhs = expectation * to_coords(a, multiply(multiply(ib1, ax), ib2));
        Element ex = from_coords(b, expectation.col(x));
        Vec rhs = to_coords(b, multiply(multiply(matrix_unit(b, b1), ex), matrix_unit(b, b2)));
        bim = std::max(bim, (lhs - rhs).norm());
      }
    }
  }
  if (bim > tol) throw Error(ErrorKind::NotAnExpectation, "E is not B-bimodular (defect " + std::to_string(bim) + ")");

  RawModule raw;
  raw.dim = a.dim();
  raw.base = b;
  for (int beta = 0; beta < b.dim(); ++beta) raw.right.push_back(right_mult_matrix(a, from_coords(a, inclusion.map.col(beta))));
  for (int k = 0; k < b.num_blocks(); ++k) {
    int n = b.blocks[k];
    std::vector<Mat> per(n * n, Mat::Zero(a.dim(), a.dim()));
    for (int u = 0; u < a.dim(); ++u) {
      Element eu = adjoint(matrix_unit(a, u));
      for (int v = 0; v < a.dim(); ++v) {
        Element val = from_coords(b, expectation * to_coords(a, multiply(eu, matrix_unit(a, v))));
        for (int r = 0; r < n; ++r)
          for (int s = 0; s < n; ++s) per[r * n + s](u, v) = val[k](r, s);
      }
    }
    raw.form.push_back(per);
  }
  Canonical can;
  try {
    can = canonicalize_module(raw, tol, true);
  } catch (const Error& err) {
    if (err.kind() == ErrorKind::NotPositive) throw Error(ErrorKind::NotAnExpectation, "E is not positive: " + err.detail());
    throw;
  }
  std::vector<Mat> fulls;
  for (int x = 0; x < a.dim(); ++x) fulls.push_back(can.quotient * left_mult_matrix(a, matrix_unit(a, x)) * can.lift);
  auto c = make_correspondence(a, can.module, blocks_of_operators(can.module, fulls));
  auto rep = validate_correspondence(c, std::max(tol, 1e-9));
  if (!rep.find("nondegenerate")->pass) throw Error(ErrorKind::DegenerateAction, "left action is degenerate after the quotient");
  return c;
}

CorrIso random_automorphism(const Correspondence& c, Rng& rng) {
  std::vector<Mat> blocks;
  for (int j = 0; j < c.target().num_blocks(); ++j) {
    int m = c.module.mult[j];
    if (m == 0) {
      blocks.push_back(Mat(0, 0));
      continue;
    }
    // X T - T X = 0 for every generator T, as a linear system on vec(X)
    Mat sys(0, m * m);
    for (int a = 0; a < c.source.dim(); ++a) {
      const Mat& t = c.left[a][j];
      Mat rows = kron(t.transpose(), Mat::Identity(m, m)) - kron(Mat::Identity(m, m), t);
      Mat grown(sys.rows() + rows.rows(), m * m);
      grown << sys, rows;
      sys = grown;
    }
    Mat ns = null_space(sys);
    Vec coeff = random_matrix(static_cast<int>(ns.cols()), 1, rng);
    Vec x = ns * coeff;
    Mat xm(m, m);
    for (int col = 0; col < m; ++col)
      for (int row = 0; row < m; ++row) xm(row, col) = x(col * m + row);
    blocks.push_back(polar_unitary(xm));
  }
  return map_full(c.module, c.module, blocks);
}

}  // namespace corrcolim

#include "schottky/mtis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace schottky {

Mtis mtis_from_map(const SpaceContext& ctx, const Mat& f) {
  const int d = ctx.d();
  if (f.rows() != d + 1 || f.cols() != d)
    throw GeometryError("f must be a (d+1) x d matrix");
  if ((f.transpose() * f - Mat::Identity(d, d)).norm() > kTol * std::sqrt(double(d)))
    throw GeometryError("f is not orthogonal (f^T f != Id)");
  Mtis m;
  m.f_ = f;
  m.basis_ = (ctx.basis_T() + ctx.basis_S() * f) / std::sqrt(2.0);
  return m;
}

Mtis map_from_mtis(const SpaceContext& ctx, const Mat& V) {
  const int d = ctx.d();
  if (V.rows() != ctx.dim() || V.cols() != d) throw GeometryError("MTIS must have dimension d");
  Mat ct(d, d), cs(d + 1, d);
  for (int j = 0; j < d; ++j) {
    cs.col(j) = ctx.coords_S(V.col(j));
    ct.col(j) = ctx.coords_T(V.col(j));
  }
  // Q(x) = |x_S|^2 - |x_T|^2 in context coordinates.
  Mat qv = cs.transpose() * cs - ct.transpose() * ct;
  double scale = cs.squaredNorm() + ct.squaredNorm();
  if (qv.norm() > kTol * scale) throw GeometryError("subspace is not totally isotropic");
  Eigen::FullPivLU<Mat> lu(ct);
  if (lu.rank() < d) throw GeometryError("subspace is degenerate under pi_T");
  Mat f = cs * lu.inverse();
  // Remove the rounding left by the inversion: nearest orthogonal map.
  Eigen::JacobiSVD<Mat> svd(f, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return mtis_from_map(ctx, svd.matrixU() * svd.matrixV().transpose());
}

Transversality is_transversal(const Mtis& a, const Mtis& b) {
  if (a.f().rows() != b.f().rows() || a.f().cols() != b.f().cols())
    throw GeometryError("MTIS from different contexts");
  Eigen::JacobiSVD<Mat> svd(a.f() - b.f());
  double m = svd.singularValues()(svd.singularValues().size() - 1);
  return {m > kTol, m};
}

Mat rotation_blocks(int r, double theta) {
  if (r % 2 != 0) throw GeometryError("rotation blocks need an even dimension");
  Mat R = Mat::Zero(r, r);
  const double c = std::cos(theta), s = std::sin(theta);
  for (int k = 0; k < r; k += 2) {
    R(k, k) = c;
    R(k, k + 1) = -s;
    R(k + 1, k) = s;
    R(k + 1, k + 1) = c;
  }
  return R;
}

std::vector<Mtis> generate_transversal_family(const SpaceContext& ctx,
                                              const std::vector<double>& thetas) {
  const int d = ctx.d();
  if (!ctx.odd()) throw GeometryError("transversal families need d odd (d+1 even)");
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t i = 0; i < thetas.size(); ++i)
    for (std::size_t j = i + 1; j < thetas.size(); ++j) {
      double diff = std::remainder(thetas[i] - thetas[j], two_pi);
      if (std::abs(diff) < 1e-12) throw GeometryError("repeated angle in transversal family");
    }
  Mat f0 = Mat::Zero(d + 1, d);
  f0.topRows(d) = Mat::Identity(d, d);
  std::vector<Mtis> out;
  out.reserve(thetas.size());
  for (double th : thetas) out.push_back(mtis_from_map(ctx, rotation_blocks(d + 1, th) * f0));
  return out;
}

Wing positive_wing(const SpaceContext& ctx, const Mtis& V) {
  const Mat& f = V.f();
  const int d = V.d();
  Vec n = null_space(f.transpose()).col(0);
  Mat M(d + 1, d + 1);
  M << f, n;
  // (basis of V with pi_T direct, e) must be direct for the pi_S orientation of V^perp.
  if (M.determinant() * ctx.orientation_S() * ctx.orientation_T() < 0) n = -n;
  return Wing{V, ctx.basis_S() * n};
}

namespace {

// Coefficients of x in the basis [V, e] of V^perp and the least-squares residual.
std::pair<Vec, double> wing_coords(const Wing& w, const Vec& x) {
  Mat A(x.size(), w.base.d() + 1);
  A << w.base.basis(), w.apex;
  Vec c = A.colPivHouseholderQr().solve(x);
  return {c, (A * c - x).norm()};
}

}  // namespace

bool wing_contains(const SpaceContext& ctx, const Wing& w, const Vec& x) {
  ctx.check_vector(x);
  double nx = x.norm();
  if (nx == 0.0) return true;
  auto [c, res] = wing_coords(w, x);
  return res <= kTol * nx && c(c.size() - 1) >= -kTol * nx;
}

WingDistance wing_distance(const Form& form, const Wing& w1, const Wing& w2) {
  const Mat& R = form.factor();
  struct Half {
    Mat U;   // orthonormal basis of V^perp (factor coordinates)
    Mat V;   // orthonormal basis of V
    Vec nrm; // unit normal of V inside V^perp, pointing into the wing
  };
  auto prep = [&](const Wing& w) {
    Half h;
    Mat Vb = R * w.base.basis();
    Eigen::HouseholderQR<Mat> qv(Vb);
    h.V = qv.householderQ() * Mat::Identity(Vb.rows(), Vb.cols());
    Vec a = R * w.apex;
    Vec nrm = a - h.V * (h.V.transpose() * a);
    h.nrm = nrm / nrm.norm();
    h.U.resize(Vb.rows(), Vb.cols() + 1);
    h.U << h.V, h.nrm;
    return h;
  };
  const Half h1 = prep(w1), h2 = prep(w2);

  // The optimum lies on one face pair; on a face the maximum of <a,b> is the
  // top singular pair of the cross matrix.
  double best = -2.0;
  Vec ba, bb;
  auto consider = [&](const Mat& A, const Mat& B, bool a_free, bool b_free) {
    Eigen::JacobiSVD<Mat> svd(A.transpose() * B, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vec& sv = svd.singularValues();
    double s = sv(0);
    if (s <= best) return;
    int mult = 1;
    while (mult < sv.size() && sv(mult) >= s - 1e-12) ++mult;
    Vec a = A * svd.matrixU().col(0), b = B * svd.matrixV().col(0);
    double l1 = a_free ? a.dot(h1.nrm) : 0.0;
    double l2 = b_free ? b.dot(h2.nrm) : 0.0;
    const double tol = 1e-12;
    if (l1 >= -tol && l2 >= -tol) {
    } else if (l1 <= tol && l2 <= tol) {
      a = -a;
      b = -b;
    } else if (mult >= 2) {
      // Two half-constraints on a sphere of dimension >= 1 always meet; the
      // value is attained on the tied singular subspace.
      Mat X = svd.matrixU().leftCols(mult);
      Vec la = a_free ? Vec(X.transpose() * (A.transpose() * h1.nrm)) : Vec::Zero(mult);
      Vec lb = b_free ? Vec(X.transpose() * ((A.transpose() * B) * (B.transpose() * h2.nrm)) / s)
                      : Vec::Zero(mult);
      // With unit la, lb the sum satisfies both constraints unless they cancel.
      Vec x = Vec::Zero(mult);
      if (la.norm() > 0) x += la / la.norm();
      if (lb.norm() > 0) x += lb / lb.norm();
      if (x.norm() < 1e-8) x = null_space(la.transpose()).col(0);
      x.normalize();
      a = A * (X * x);
      b = B * (B.transpose() * a) / s;
    } else {
      return;
    }
    best = s;
    ba = a;
    bb = b;
  };
  consider(h1.U, h2.U, true, true);
  consider(h1.V, h2.U, false, true);
  consider(h1.U, h2.V, true, false);
  best = std::clamp(best, -1.0, 1.0);
  Eigen::TriangularView<const Mat, Eigen::Upper> Rt(R);
  WingDistance out;
  out.a = Rt.solve(ba);
  out.b = Rt.solve(bb);
  out.angle = 2.0 * std::atan2((ba - bb).norm(), (ba + bb).norm());
  return out;
}

namespace {

// Unit (N0) vector spanning V1^perp cap V2^perp, oriented into V2's wing.
Vec eq_direction(const SpaceContext& ctx, const Mtis& V1, const Mtis& V2, const Wing& w2) {
  Mat A(ctx.dim(), 2 * V1.d());
  A << V1.basis(), V2.basis();
  Mat ns = null_space(A.transpose() * ctx.gram_Q());
  if (ns.cols() != 1) throw GeometryError("frame is degenerate: V_= is not a line");
  Vec e = ns.col(0);
  e /= std::sqrt(e.dot(ctx.gram_N0() * e));
  auto [c, res] = wing_coords(w2, e);
  if (c(c.size() - 1) < 0) e = -e;
  return e;
}

}  // namespace

WingIntersection wings_intersection_check(const SpaceContext& ctx, const Mtis& V1,
                                          const Mtis& V2) {
  if (!is_transversal(V1, V2).transversal) throw GeometryError("MTIS pair is not transversal");
  Wing w1 = positive_wing(ctx, V1), w2 = positive_wing(ctx, V2);
  WingIntersection out;
  out.separation = wing_distance(Form::n0(ctx), w1, w2).angle;
  out.trivial = out.separation > kTol;
  out.residual = 0.0;
  if (!out.trivial) {
    Vec e = eq_direction(ctx, V1, V2, w2);
    out.witness = e;
    for (const Wing* w : {&w1, &w2}) {
      auto [c, res] = wing_coords(*w, e);
      out.residual = std::max({out.residual, res, -c(c.size() - 1)});
    }
  }
  return out;
}

Frame build_frame(const SpaceContext& ctx, const Mtis& less, const Mtis& more) {
  auto tr = is_transversal(less, more);
  if (!tr.transversal) throw GeometryError("frame components are not transversal");
  Frame fr;
  fr.ctx_ = ctx;
  fr.less_ = less;
  fr.more_ = more;
  fr.wing_less_ = positive_wing(ctx, less);
  fr.wing_more_ = positive_wing(ctx, more);
  fr.e_eq_ = eq_direction(ctx, less, more, fr.wing_more_);
  const int n = ctx.dim();
  fr.P_.resize(n, n);
  fr.P_ << less.basis(), fr.e_eq_, more.basis();
  fr.Pinv_ = fr.P_.fullPivLu().inverse();
  fr.gram_NV_ = fr.Pinv_.transpose() * fr.Pinv_;
  fr.gram_NV_ = 0.5 * (fr.gram_NV_ + fr.gram_NV_.transpose());
  fr.separation_ = wing_distance(Form::n0(ctx), fr.wing_less_, fr.wing_more_).angle;
  const Form n0 = Form::n0(ctx);
  const Mat& R0 = n0.factor();
  Mat R0inv = R0.triangularView<Eigen::Upper>().solve(Mat::Identity(n, n));
  Eigen::JacobiSVD<Mat> s1(fr.Pinv_ * R0inv), s2(R0 * fr.P_);
  fr.lipschitz_ = std::max(s1.singularValues()(0), s2.singularValues()(0));
  return fr;
}

Mat Frame::V_leq() const {
  Mat m(P_.rows(), less_.d() + 1);
  m << less_.basis(), e_eq_;
  return m;
}

Mat Frame::V_geq() const {
  Mat m(P_.rows(), more_.d() + 1);
  m << more_.basis(), e_eq_;
  return m;
}

Components Frame::components(const Vec& x) const {
  Vec c = Pinv_ * x;
  const int d = less_.d();
  return Components{c.head(d), c(d), c.tail(d)};
}

double frame_separation(const Frame& frame) { return frame.separation(); }
double lipschitz_constant_NV(const Frame& frame) { return frame.lipschitz(); }

}  // namespace schottky

#include "schottky/core_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace schottky {

Vec Rng::gaussian(int n) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = normal();
  return v;
}

Vec Rng::unit(int n) {
  for (;;) {
    Vec v = gaussian(n);
    double nv = v.norm();
    if (nv > 1e-12) return v / nv;
  }
}

Mat Rng::gaussian(int rows, int cols) {
  Mat m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = normal();
  return m;
}

SpaceContext::SpaceContext(int d) : d_(d) {
  if (d < 1) throw GeometryError("d must be a positive integer");
  const int n = dim();
  gram_Q_ = Mat::Identity(n, n);
  for (int i = d + 1; i < n; ++i) gram_Q_(i, i) = -1.0;
  basis_S_ = Mat::Identity(n, d + 1);
  basis_T_ = Mat::Zero(n, d);
  basis_T_.bottomRows(d) = Mat::Identity(d, d);
  finish();
}

SpaceContext SpaceContext::from_bases(const Mat& gram_Q, const Mat& basis_S, const Mat& basis_T,
                                      int orientation_S, int orientation_T) {
  const int d = static_cast<int>(basis_T.cols());
  const int n = 2 * d + 1;
  if (d < 1 || basis_S.cols() != d + 1 || basis_S.rows() != n || basis_T.rows() != n ||
      gram_Q.rows() != n || gram_Q.cols() != n)
    throw GeometryError("context bases have inconsistent shapes");
  if ((gram_Q - gram_Q.transpose()).norm() > kTol * (1.0 + gram_Q.norm()))
    throw GeometryError("gram_Q is not symmetric");
  const double scale = 1.0 + gram_Q.norm();
  if ((basis_S.transpose() * gram_Q * basis_S - Mat::Identity(d + 1, d + 1)).norm() > kTol * scale)
    throw GeometryError("basis_S is not Q-orthonormal");
  if ((basis_T.transpose() * gram_Q * basis_T + Mat::Identity(d, d)).norm() > kTol * scale)
    throw GeometryError("basis_T is not negative Q-orthonormal");
  if ((basis_S.transpose() * gram_Q * basis_T).norm() > kTol * scale)
    throw GeometryError("S and T are not Q-orthogonal");
  if (std::abs(orientation_S) != 1 || std::abs(orientation_T) != 1)
    throw GeometryError("orientations must be +1 or -1");
  SpaceContext ctx;
  ctx.d_ = d;
  ctx.gram_Q_ = gram_Q;
  ctx.basis_S_ = basis_S;
  ctx.basis_T_ = basis_T;
  ctx.orient_S_ = orientation_S;
  ctx.orient_T_ = orientation_T;
  ctx.finish();
  return ctx;
}

void SpaceContext::finish() {
  const int n = dim();
  Mat B(n, n);
  B << basis_S_, basis_T_;
  Eigen::FullPivLU<Mat> lu(B);
  if (!lu.isInvertible()) throw GeometryError("basis_S and basis_T do not span the space");
  coords_ = lu.inverse();
  gram_N0_ = coords_.transpose() * coords_;
  Vec signs = Vec::Ones(n);
  signs.tail(d_).setConstant(-1.0);
  varsigma_ = B * signs.asDiagonal() * coords_;
  standard_ = B.isIdentity(0.0);
}

Vec SpaceContext::coords_S(const Vec& x) const { return coords_.topRows(d_ + 1) * x; }
Vec SpaceContext::coords_T(const Vec& x) const { return coords_.bottomRows(d_) * x; }

void SpaceContext::check_vector(const Vec& x) const {
  if (x.size() != dim())
    throw GeometryError("vector has dimension " + std::to_string(x.size()) + ", expected " +
                        std::to_string(dim()));
}

Form::Form(Kind k, const Mat& g) : kind_(k), gram_(g) {
  if (g.rows() != g.cols()) throw GeometryError("Gram matrix must be square");
  if (k == Kind::Q) return;
  Eigen::LLT<Mat> llt(g);
  if (llt.info() == Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<Mat> es(g, Eigen::EigenvaluesOnly);
    positive_ = es.eigenvalues().minCoeff() > kTol * std::max(1.0, es.eigenvalues().maxCoeff());
    if (positive_) factor_ = llt.matrixU();
  }
  if ((k == Kind::N0 || k == Kind::NV) && !positive_)
    throw GeometryError("form is required to be positive definite");
}

const Mat& Form::factor() const {
  if (!positive_) throw GeometryError("form is not a metric (not positive definite)");
  return factor_;
}

double Form::norm(const Vec& x) const { return (factor() * x).norm(); }

double eval_form(const SpaceContext& ctx, const Form& form, const Vec& x, const Vec& y) {
  ctx.check_vector(x);
  ctx.check_vector(y);
  if (form.gram().rows() != ctx.dim()) throw GeometryError("form dimension mismatch");
  return form.dot(x, y);
}

std::pair<Vec, Vec> split_ST(const SpaceContext& ctx, const Vec& x) {
  ctx.check_vector(x);
  Vec s = ctx.basis_S() * ctx.coords_S(x);
  return {s, x - s};
}

Subspace orthonormalize(const Form& form, const Mat& A, double tol) {
  const Mat& R = form.factor();
  if (A.cols() == 0) return Subspace{Mat(A.rows(), 0)};
  Mat Y = R * A;
  Eigen::JacobiSVD<Mat> svd(Y, Eigen::ComputeThinU);
  const Vec& sv = svd.singularValues();
  int rank = 0;
  const double cut = tol * std::max(sv(0), 1e-300);
  while (rank < sv.size() && sv(rank) > cut) ++rank;
  Mat U = svd.matrixU().leftCols(rank);
  return Subspace{R.triangularView<Eigen::Upper>().solve(U)};
}

namespace {

Mat orthonormal_in_factor(const Form& form, const Mat& A) {
  Mat Y = form.factor() * A;
  Eigen::HouseholderQR<Mat> qr(Y);
  return qr.householderQ() * Mat::Identity(Y.rows(), Y.cols());
}

double unit_angle(const Vec& a, const Vec& b) {
  return 2.0 * std::atan2((a - b).norm(), (a + b).norm());
}

}  // namespace

double angle(const Form& form, const Vec& x, const Vec& y, bool projective) {
  if (!form.positive()) throw GeometryError("angles require a positive definite form");
  Vec a = form.factor() * x, b = form.factor() * y;
  double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) throw GeometryError("angle of a zero vector");
  double th = unit_angle(a / na, b / nb);
  return projective ? std::min(th, std::numbers::pi - th) : th;
}

Vec principal_angles(const Form& form, const Mat& A, const Mat& B) {
  if (A.cols() == 0 || B.cols() == 0) throw GeometryError("principal angles of a zero subspace");
  Mat QA = orthonormal_in_factor(form, A.cols() >= B.cols() ? A : B);
  Mat QB = orthonormal_in_factor(form, A.cols() >= B.cols() ? B : A);
  Mat M = QA.transpose() * QB;
  Eigen::JacobiSVD<Mat> svc(M);
  Vec c = svc.singularValues();  // descending
  Eigen::JacobiSVD<Mat> svs(QB - QA * M);
  Vec s = svs.singularValues();  // descending, pairs with ascending cosines
  const int q = static_cast<int>(c.size());
  Vec out(q);
  for (int i = 0; i < q; ++i) {
    double ci = std::clamp(c(i), -1.0, 1.0);
    double si = std::clamp(s(q - 1 - i), 0.0, 1.0);
    out(i) = (ci * ci >= 0.5) ? std::asin(si) : std::acos(ci);
  }
  std::sort(out.data(), out.data() + q);
  return out;
}

double subspace_min_angle(const Form& form, const Mat& A, const Mat& B) {
  return principal_angles(form, A, B)(0);
}

double subspace_hausdorff_angle(const Form& form, const Mat& A, const Mat& B) {
  if (A.cols() != B.cols()) throw GeometryError("Hausdorff angle needs equal dimensions");
  Vec th = principal_angles(form, A, B);
  return th(th.size() - 1);
}

double angle_to_subspace(const Form& form, const Vec& x, const Mat& B) {
  Vec a = form.factor() * x;
  double na = a.norm();
  if (na == 0.0) throw GeometryError("angle of a zero vector");
  a /= na;
  Mat QB = orthonormal_in_factor(form, B);
  Vec p = QB * (QB.transpose() * a);
  return std::atan2((a - p).norm(), p.norm());
}

double set_min_angle(const Form& form, const std::vector<Vec>& P, const std::vector<Vec>& Q) {
  if (P.empty() || Q.empty()) throw GeometryError("empty sample set");
  auto prep = [&](const std::vector<Vec>& pts) {
    Mat U(form.gram().rows(), static_cast<Eigen::Index>(pts.size()));
    for (std::size_t k = 0; k < pts.size(); ++k) {
      Vec a = form.factor() * pts[k];
      double na = a.norm();
      if (na == 0.0) throw GeometryError("zero vector in sample set");
      U.col(static_cast<Eigen::Index>(k)) = a / na;
    }
    return U;
  };
  Mat UP = prep(P), UQ = prep(Q);
  Mat G = UP.transpose() * UQ;
  Eigen::Index bi = 0, bj = 0;
  G.maxCoeff(&bi, &bj);
  return unit_angle(UP.col(bi), UQ.col(bj));
}

Mat null_space(const Mat& M, double tol) {
  const Eigen::Index n = M.cols();
  if (M.rows() == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
  const Vec& sv = svd.singularValues();
  const double cut = tol * std::max(1.0, sv.size() ? sv(0) : 0.0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cut) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

}  // namespace schottky

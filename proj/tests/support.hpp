#pragma once

// Shared fixtures and independent oracles for the unit and acceptance tests.
// Oracles deliberately avoid the library's own routines for the quantity they check.

#include "schottky/affine.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace testing_support {

using namespace schottky;

inline constexpr double kPi = std::numbers::pi;

inline Mat random_orthogonal_map(int d, Rng& rng) {
  Eigen::HouseholderQR<Mat> qr(rng.gaussian(d + 1, d));
  return qr.householderQ() * Mat::Identity(d + 1, d);
}

inline Mtis random_mtis(const SpaceContext& ctx, Rng& rng) {
  return mtis_from_map(ctx, random_orthogonal_map(ctx.d(), rng));
}

// Random d x d matrix rescaled to the given spectral radius.
inline Mat random_contraction(int d, double rho, Rng& rng) {
  Mat A = rng.gaussian(d, d);
  return A * (rho / A.eigenvalues().cwiseAbs().maxCoeff());
}

// O1 diag(sigma) O2 with singular values in [lo, hi].
inline Mat random_dynamical_part(int d, double lo, double hi, Rng& rng) {
  Eigen::HouseholderQR<Mat> q1(rng.gaussian(d, d)), q2(rng.gaussian(d, d));
  Vec sv(d);
  for (int k = 0; k < d; ++k) sv(k) = rng.uniform(lo, hi);
  return Mat(q1.householderQ()) * sv.asDiagonal() * Mat(q2.householderQ());
}

inline Frame random_frame(const SpaceContext& ctx, Rng& rng) {
  for (;;) {
    Mtis a = random_mtis(ctx, rng), b = random_mtis(ctx, rng);
    if (is_transversal(a, b).margin > 0.2) return build_frame(ctx, a, b);
  }
}

inline SchottkyGroup demo_group(int d, double s, double epsilon = 0.75) {
  SpaceContext ctx(d);
  return build_group(ctx, {0, kPi / 2, kPi, 3 * kPi / 2}, {{0, 2}, {1, 3}},
                     {s * Mat::Identity(d, d), s * Mat::Identity(d, d)}, epsilon);
}

inline SchottkyGroup single_generator_group(int d, double s, double epsilon = 0.75) {
  SpaceContext ctx(d);
  return build_group(ctx, {0, kPi}, {{0, 1}}, {s * Mat::Identity(d, d)}, epsilon);
}

// Principal angles by the textbook route: Gram-Schmidt in the standard inner
// product after a Cholesky change of variables, then arccos of singular values.
inline Vec oracle_principal_angles(const Mat& gram, const Mat& A, const Mat& B) {
  Mat L = gram.llt().matrixU();
  Mat QA = Eigen::ColPivHouseholderQR<Mat>(L * A).householderQ() * Mat::Identity(A.rows(), A.cols());
  Mat QB = Eigen::ColPivHouseholderQR<Mat>(L * B).householderQ() * Mat::Identity(B.rows(), B.cols());
  Vec s = Eigen::JacobiSVD<Mat>(QA.transpose() * QB).singularValues();
  Vec out(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) out(i) = std::acos(std::min(1.0, s(i)));
  return out;
}

// Angle (N0, standard context) from x to the closed wing V + R_{>=0} apex:
// closest point of span(V, apex) if it lies in the half space, else of V.
inline double oracle_angle_to_wing(const Wing& w, const Vec& x) {
  Mat A(x.size(), w.base.d() + 1);
  A << w.base.basis(), w.apex;
  Vec c = A.colPivHouseholderQr().solve(x);
  Vec p = (c(c.size() - 1) >= 0) ? Vec(A * c) : Vec(w.base.basis() * (w.base.basis().transpose() * x));
  double cosv = x.dot(p) / (x.norm() * std::max(p.norm(), 1e-300));
  return std::acos(std::clamp(cosv, -1.0, 1.0));
}

// Determinant in extended precision: double LU loses about cond(m) * 1e-16,
// which is visible for maps of norm 1e4.
inline double determinant_ld(const Mat& m) {
  using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  MatL ml = m.cast<long double>();
  return static_cast<double>(ml.partialPivLu().determinant());
}

// Dense sample of unit vectors on a wing (standard context).
inline std::vector<Vec> sample_wing(const Wing& w, int count, Rng& rng) {
  std::vector<Vec> out;
  for (int k = 0; k < count; ++k) {
    Vec c = rng.gaussian(w.base.d());
    double h = std::abs(rng.normal());
    if (k % 4 == 0) h = 0.0;
    Vec x = w.base.basis() * c + h * w.apex;
    out.push_back(x.normalized());
  }
  return out;
}

// Every word over the 2n letters of length k, filtered by the definitions.
inline std::vector<Word> brute_force_words(int n, int k) {
  std::vector<Word> out;
  const int letters = 2 * n;
  long total = 1;
  for (int j = 0; j < k; ++j) total *= letters;
  for (long code = 0; code < total; ++code) {
    Word w;
    long c = code;
    for (int j = 0; j < k; ++j) {
      int l = static_cast<int>(c % letters);
      c /= letters;
      w.push_back({l / 2, l % 2 == 0 ? 1 : -1});
    }
    out.push_back(w);
  }
  return out;
}

}  // namespace testing_support

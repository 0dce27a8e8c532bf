#include "schottky/pseudohyperbolic.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <functional>

namespace schottky {

Mat dual_block(const Frame& frame, const Mat& g_less) {
  const Mat& G = frame.ctx().gram_Q();
  Mat M = frame.V_less().basis().transpose() * G * frame.V_more().basis();
  Eigen::PartialPivLU<Mat> lu(M);
  Mat AinvT = g_less.transpose().partialPivLu().inverse();
  return lu.solve(AinvT * M);
}

Mat dynamical_part(const Frame& frame, const Mat& g) {
  const Mat& W = frame.V_less().basis();
  return W.transpose() * frame.ctx().gram_N0() * g * W;
}

PseudoHyperbolicMap build_pseudohyperbolic(const Frame& frame, const Mat& g_less) {
  const int d = frame.ctx().d();
  if (g_less.rows() != d || g_less.cols() != d) throw GeometryError("g_less must be d x d");
  Eigen::JacobiSVD<Mat> svd(g_less);
  const Vec& sv = svd.singularValues();
  if (sv(d - 1) <= kTol * std::max(1.0, sv(0))) throw GeometryError("g_less is singular");
  double rho = g_less.eigenvalues().cwiseAbs().maxCoeff();
  if (rho > 1.0 - kRhoMargin)
    throw GeometryError("spectral radius of g_less must be at most 1 - 1e-4");

  PseudoHyperbolicMap g;
  g.frame_ = frame;
  g.g_less_ = g_less;
  g.g_more_ = dual_block(frame, g_less);
  g.rho_less_ = rho;
  const int n = frame.ctx().dim();
  Mat D = Mat::Zero(n, n), Dinv = Mat::Zero(n, n);
  D.topLeftCorner(d, d) = g_less;
  D(d, d) = 1.0;
  D.bottomRightCorner(d, d) = g.g_more_;
  Mat Ainv = g_less.partialPivLu().inverse();
  Mat Xinv = g.g_more_.partialPivLu().inverse();
  Dinv.topLeftCorner(d, d) = Ainv;
  Dinv(d, d) = 1.0;
  Dinv.bottomRightCorner(d, d) = Xinv;
  g.matrix_ = frame.basis() * D * frame.basis_inverse();
  g.inverse_ = frame.basis() * Dinv * frame.basis_inverse();
  Eigen::JacobiSVD<Mat> sx(Xinv);
  g.strength_ = std::max(sv(0), sx.singularValues()(0));
  return g;
}

namespace {

using CMat = Eigen::MatrixXcd;
using cd = std::complex<double>;

// Swap adjacent diagonal entries k, k+1 of the triangular Schur factor.
void swap_schur(CMat& T, CMat& U, int k) {
  const int n = static_cast<int>(T.rows());
  cd t11 = T(k, k), t22 = T(k + 1, k + 1);
  cd f = T(k, k + 1), h = t22 - t11;
  double c;
  cd s;
  if (std::abs(h) == 0.0) {
    c = 1.0;
    s = 0.0;
  } else if (std::abs(f) == 0.0) {
    c = 0.0;
    s = std::conj(h) / std::abs(h);
  } else {
    double nrm = std::hypot(std::abs(f), std::abs(h));
    c = std::abs(f) / nrm;
    s = (f / std::abs(f)) * std::conj(h) / nrm;
  }
  for (int j = k + 2; j < n; ++j) {
    cd x = T(k, j), y = T(k + 1, j);
    T(k, j) = c * x + s * y;
    T(k + 1, j) = c * y - std::conj(s) * x;
  }
  for (int i = 0; i < k; ++i) {
    cd x = T(i, k), y = T(i, k + 1);
    T(i, k) = c * x + std::conj(s) * y;
    T(i, k + 1) = c * y - s * x;
  }
  T(k, k) = t22;
  T(k + 1, k + 1) = t11;
  for (int i = 0; i < n; ++i) {
    cd x = U(i, k), y = U(i, k + 1);
    U(i, k) = c * x + std::conj(s) * y;
    U(i, k + 1) = c * y - s * x;
  }
}

// Real orthonormal basis of the invariant subspace for the selected eigenvalues
// (selection must be closed under conjugation).
Mat invariant_subspace(const Eigen::ComplexSchur<Mat>& schur,
                       const std::function<bool(cd)>& select) {
  CMat T = schur.matrixT(), U = schur.matrixU();
  const int n = static_cast<int>(T.rows());
  int m = 0;
  for (int j = 0; j < n; ++j) {
    if (!select(T(j, j))) continue;
    for (int k = j - 1; k >= m; --k) swap_schur(T, U, k);
    ++m;
  }
  if (m == 0) return Mat(n, 0);
  Mat RI(n, 2 * m);
  RI << U.leftCols(m).real(), U.leftCols(m).imag();
  Eigen::JacobiSVD<Mat> svd(RI, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(m);
}

enum class Band { Less, Eq, More, Unsure };

Band classify_modulus(double r) {
  double gap = std::abs(r - 1.0);
  if (gap <= kBand) return Band::Eq;
  if (gap <= 10.0 * kBand) return Band::Unsure;
  return r < 1.0 ? Band::Less : Band::More;
}

}  // namespace

SpectralSplit spectral_split(const SpaceContext& ctx, const Mat& g) {
  if (g.rows() != ctx.dim() || g.cols() != ctx.dim()) throw GeometryError("matrix size mismatch");
  SpectralSplit out;
  Eigen::ComplexSchur<Mat> schur(g);
  const CMat& T = schur.matrixT();
  for (int j = 0; j < T.rows(); ++j) {
    double r = std::abs(T(j, j));
    switch (classify_modulus(r)) {
      case Band::Less: out.moduli_less.push_back(r); break;
      case Band::Eq: out.moduli_eq.push_back(r); break;
      case Band::More: out.moduli_more.push_back(r); break;
      case Band::Unsure:
        out.conclusive = false;
        out.note = "eigenvalue modulus " + std::to_string(r) + " lies at the edge of the unit band";
        out.moduli_eq.push_back(r);
        break;
    }
  }
  const Form n0 = Form::n0(ctx);
  auto pick = [&](Band b) {
    Mat E = invariant_subspace(schur, [&](cd z) {
      Band c = classify_modulus(std::abs(z));
      return c == b || (b == Band::Eq && c == Band::Unsure);
    });
    return E.cols() ? orthonormalize(n0, E, 1e-14) : Subspace{Mat(ctx.dim(), 0)};
  };
  out.less = pick(Band::Less);
  out.eq = pick(Band::Eq);
  out.more = pick(Band::More);
  return out;
}

PseudoDiagnostics is_pseudohyperbolic(const SpaceContext& ctx, const Mat& g) {
  PseudoDiagnostics dg;
  SpectralSplit sp = spectral_split(ctx, g);
  dg.dim_eq = sp.eq.dim();
  if (!sp.conclusive) {
    dg.conclusive = false;
    dg.reason = sp.note;
    return dg;
  }
  if (dg.dim_eq != 1) {
    dg.reason = "unit-modulus eigenspace has dimension " + std::to_string(dg.dim_eq);
    return dg;
  }
  Vec v = sp.eq.basis.col(0);
  dg.eq_eigenvalue = v.dot(g * v) / v.dot(v);
  if (dg.eq_eigenvalue < 0) {
    dg.reason = "eigenvalue on V_= is " + std::to_string(dg.eq_eigenvalue) + ", not +1";
    return dg;
  }
  dg.pseudohyperbolic = true;
  return dg;
}

double contraction_strength(const PseudoHyperbolicMap& g) { return g.strength(); }

double contraction_strength(const SpaceContext& ctx, const Mat& g, const Mat& V_less,
                            const Mat& V_more) {
  const Form n0 = Form::n0(ctx);
  Mat Bl = orthonormalize(n0, V_less).basis, Bm = orthonormalize(n0, V_more).basis;
  Mat gl = Bl.transpose() * ctx.gram_N0() * g * Bl;
  Mat gm = Bm.transpose() * ctx.gram_N0() * g * Bm;
  Eigen::JacobiSVD<Mat> a(gl), b(gm.partialPivLu().inverse());
  return std::max(a.singularValues()(0), b.singularValues()(0));
}

double q_drift(const SpaceContext& ctx, const Mat& g) {
  const Mat& G = ctx.gram_Q();
  return (g.transpose() * G * g - G).norm() / std::max(1.0, g.squaredNorm());
}

Mat reorthogonalize(const SpaceContext& ctx, const Mat& g) {
  const Mat& G = ctx.gram_Q();
  Mat E = 0.5 * G.partialPivLu().solve(G - g.transpose() * G * g);
  // Outside the contraction regime of the Newton step the correction is skipped.
  if (E.norm() >= 0.5) return g;
  return g * (Mat::Identity(g.rows(), g.cols()) + E);
}

Mat compose(const SpaceContext& ctx, const Mat& g1, const Mat& g2) {
  Mat h = g1 * g2;
  if (q_drift(ctx, h) > kTol / 10) h = reorthogonalize(ctx, h);
  return h;
}

Mat invert(const SpaceContext& ctx, const Mat& g) {
  const Mat& G = ctx.gram_Q();
  return G.partialPivLu().solve(g.transpose() * G);
}

}  // namespace schottky

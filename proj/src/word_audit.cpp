#include "schottky/schottky.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace schottky {

namespace {

using Real = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<100>,
                                           boost::multiprecision::et_off>;
using MMat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using MVec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

const Real kConverged("1e-70");

MMat up(const Mat& m) { return m.cast<Real>(); }
Mat down(const MMat& m) { return m.unaryExpr([](const Real& x) { return static_cast<double>(x); }); }

Real max_abs(const MMat& m) {
  Real best = 0;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) best = std::max(best, Real(abs(m(i, j))));
  return best;
}

// Modified Gram-Schmidt for the Gram matrix N, run twice.
MMat orthonormal(const MMat& N, MMat X) {
  for (int pass = 0; pass < 2; ++pass)
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      for (Eigen::Index k = 0; k < j; ++k) {
        Real c = X.col(k).dot(N * X.col(j));
        X.col(j) -= c * X.col(k);
      }
      X.col(j) /= sqrt(Real(X.col(j).dot(N * X.col(j))));
    }
  return X;
}

struct Dominant {
  MMat basis;
  bool converged = false;
};

// Dominant invariant d-subspace by orthogonal iteration with repeated squaring.
Dominant dominant_subspace(const MMat& N, const MMat& W, const MMat& start) {
  Dominant out;
  MMat P = W / max_abs(W);
  MMat X = orthonormal(N, start);
  for (int it = 0; it < 14; ++it) {
    MMat Y = orthonormal(N, P * X);
    MMat resid = Y - X * (X.transpose() * N * Y);
    X = Y;
    if (max_abs(resid) < kConverged) {
      out.converged = true;
      break;
    }
    P = P * P;
    P /= max_abs(P);
  }
  out.basis = X;
  return out;
}

struct Precise {
  MMat G, Ginv, N;
  std::vector<MMat> fwd, inv;
};

// Generators lifted to extended precision and pulled back onto O(Q) by Newton steps.
Precise lift(const SchottkyGroup& group) {
  Precise p;
  p.G = up(group.ctx.gram_Q());
  p.Ginv = p.G.partialPivLu().inverse();
  p.N = up(group.ctx.gram_N0());
  const Real target("1e-90");
  for (const auto& g : group.generators) {
    MMat m = up(g.matrix());
    for (int it = 0; it < 12; ++it) {
      MMat E = p.G - m.transpose() * p.G * m;
      if (max_abs(E) <= target * std::max(Real(1), max_abs(m) * max_abs(m))) break;
      m += m * (p.Ginv * E) / 2;
    }
    p.fwd.push_back(m);
    p.inv.push_back(p.Ginv * m.transpose() * p.G);
  }
  return p;
}

double sigma_max(const Mat& m) { return Eigen::JacobiSVD<Mat>(m).singularValues()(0); }

WordAudit audit_one(const SchottkyGroup& group, const Precise& P, const Word& w) {
  WordAudit a;
  a.word = w;
  if (w.empty()) {
    a.failure = "empty word";
    return a;
  }
  const SpaceContext& ctx = group.ctx;
  const int n = ctx.dim(), d = ctx.d();
  MMat W = MMat::Identity(n, n);
  for (const auto& l : w) W = W * (l.sigma > 0 ? P.fwd[l.i] : P.inv[l.i]);
  MMat Winv = MMat::Identity(n, n);
  for (auto it = w.rbegin(); it != w.rend(); ++it)
    Winv = Winv * (it->sigma > 0 ? P.inv[it->i] : P.fwd[it->i]);

  const Frame& first = group.frameset.frames[w.front().i];
  const Frame& last = group.frameset.frames[w.back().i];
  Mat first_more = w.front().sigma > 0 ? first.V_more().basis() : first.V_less().basis();
  Mat last_less = w.back().sigma > 0 ? last.V_less().basis() : last.V_more().basis();
  Dominant more = dominant_subspace(P.N, W, up(first_more));
  Dominant less = dominant_subspace(P.N, Winv, up(last_less));

  Mat Wd = down(W);
  a.distance_from_identity = sigma_max(Wd - Mat::Identity(n, n));
  if (!more.converged || !less.converged) {
    a.failure = "no dominant splitting (orthogonal iteration did not settle)";
    return a;
  }

  // V_= is the Q-orthogonal complement of V_< + V_>.
  MMat A(n, n);
  A.topRows(2 * d) = (MMat(n, 2 * d) << less.basis, more.basis).finished().transpose() * P.G;
  A.row(2 * d) = up(first.e_eq()).transpose() * P.N;
  MVec rhs = MVec::Zero(n);
  rhs(2 * d) = 1;
  MVec v = A.partialPivLu().solve(rhs);
  Real lam = v.dot(P.N * (W * v)) / v.dot(P.N * v);
  a.eq_eigenvalue = static_cast<double>(lam);

  MMat Wl = less.basis.transpose() * P.N * W * less.basis;
  MMat Wm = more.basis.transpose() * P.N * W * more.basis;
  MMat Wm_inv = Wm.partialPivLu().inverse();
  a.strength = std::max(sigma_max(down(Wl)), sigma_max(down(Wm_inv)));

  Mat Bl = down(less.basis), Bm = down(more.basis);
  a.hausdorff_to_first = w.size() == 1 ? 0.0 : subspace_hausdorff_angle(Form::n0(ctx), Bm, first_more);
  a.pseudohyperbolic = std::abs(a.eq_eigenvalue - 1.0) <= kBand && a.strength < 1.0 &&
                       static_cast<double>(v.dot(P.G * v)) > 0;
  if (!a.pseudohyperbolic) {
    a.failure = "not pseudohyperbolic: eigenvalue on V_= " + std::to_string(a.eq_eigenvalue) +
                ", s = " + std::to_string(a.strength);
    return a;
  }
  try {
    Frame fr = build_frame(ctx, map_from_mtis(ctx, Bl), map_from_mtis(ctx, Bm));
    a.separation = fr.separation();
  } catch (const GeometryError& e) {
    a.failure = std::string("frame of the word is degenerate: ") + e.what();
    return a;
  }

  // Second route: a double-precision spectral split, while the word is small
  // enough for it to be meaningful.
  if (sigma_max(Wd) < 1e6) {
    SpectralSplit sp = spectral_split(ctx, Wd);
    if (!sp.conclusive || sp.more.dim() != d ||
        subspace_hausdorff_angle(Form::n0(ctx), sp.more.basis, Bm) > 1e-6) {
      a.failure = "double-precision spectral split disagrees with the dominant-subspace route";
      return a;
    }
  }

  const double floor = group.frameset.separation / 3.0 - 1e-6;
  if (a.separation < floor) {
    a.failure = "separation " + std::to_string(a.separation) + " below " + std::to_string(floor);
    return a;
  }
  if (a.distance_from_identity <= 0.1) {
    a.failure = "word is within 0.1 of the identity";
    return a;
  }
  a.ok = true;
  return a;
}

}  // namespace

WordAudit audit_word(const SchottkyGroup& group, const Word& w) {
  return audit_one(group, lift(group), w);
}

ProductAuditReport audit_products(const SchottkyGroup& group, int max_len, bool keep_entries) {
  ProductAuditReport rep;
  rep.frameset_separation = group.frameset.separation;
  rep.min_separation = std::numbers::pi;
  rep.min_distance_from_identity = HUGE_VAL;
  const double sG = group.strength();
  const Precise P = lift(group);
  for (const Word& w : enumerate_words(group.n(), max_len, WordMode::CyclicallyReduced)) {
    if (w.empty()) continue;
    WordAudit a = audit_one(group, P, w);
    ++rep.words;
    if (a.ok) {
      rep.min_separation = std::min(rep.min_separation, a.separation);
      rep.max_strength = std::max(rep.max_strength, a.strength);
      rep.max_hausdorff_ratio = std::max(rep.max_hausdorff_ratio, a.hausdorff_to_first / sG);
    }
    rep.min_distance_from_identity = std::min(rep.min_distance_from_identity,
                                              a.distance_from_identity);
    if (!a.ok) rep.failures.push_back(a);
    if (keep_entries) rep.entries.push_back(std::move(a));
  }
  rep.ok = rep.failures.empty();
  return rep;
}

}  // namespace schottky

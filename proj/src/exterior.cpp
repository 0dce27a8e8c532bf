#include "schottky/exterior.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace schottky {

std::vector<Subset> ext_subsets(int n, int k) {
  std::vector<Subset> out;
  if (k < 0 || k > n) return out;
  Subset s(k);
  for (int i = 0; i < k; ++i) s[i] = i;
  for (;;) {
    out.push_back(s);
    int i = k - 1;
    while (i >= 0 && s[i] == n - k + i) --i;
    if (i < 0) break;
    ++s[i];
    for (int j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
  }
  return out;
}

namespace {

double minor_det(const Mat& g, const Subset& rows, const Subset& cols) {
  const int k = static_cast<int>(rows.size());
  Mat m(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) m(a, b) = g(rows[a], cols[b]);
  return k == 0 ? 1.0 : m.partialPivLu().determinant();
}

}  // namespace

// Per-minor LU is adequate for the C(7,3) = 35 wedge basis used here; a
// recursive compound-matrix scheme would be needed if larger d were enabled.
Mat compound(const Mat& g, int k) {
  auto rs = ext_subsets(static_cast<int>(g.rows()), k);
  auto cs = ext_subsets(static_cast<int>(g.cols()), k);
  Mat out(rs.size(), cs.size());
  for (std::size_t i = 0; i < rs.size(); ++i)
    for (std::size_t j = 0; j < cs.size(); ++j) out(i, j) = minor_det(g, rs[i], cs[j]);
  return out;
}

Mat ext_form(const Form& form, int k) {
  if (!form.positive()) throw GeometryError("exterior form needs a positive definite form");
  return compound(form.gram(), k);
}

Vec wedge(const Mat& B) {
  const int k = static_cast<int>(B.cols());
  auto rs = ext_subsets(static_cast<int>(B.rows()), k);
  Subset cols(k);
  for (int j = 0; j < k; ++j) cols[j] = j;
  Vec out(rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) out(i) = minor_det(B, rs[i], cols);
  return out;
}

namespace {

// Power iteration seeded with v; stops at relative Rayleigh change 1e-12.
double power_iterate(const Mat& f, Vec& v, int& iters) {
  v.normalize();
  double lam = v.dot(f * v);
  for (iters = 0; iters < 10000; ++iters) {
    Vec w = f * v;
    double nw = w.norm();
    if (nw == 0.0) break;
    if (w.dot(v) < 0) w = -w;
    v = w / nw;
    double next = v.dot(f * v);
    bool done = std::abs(next - lam) <= 1e-12 * std::abs(next);
    lam = next;
    if (done) break;
  }
  return lam;
}

Vec top_real_eigvec(const Eigen::EigenSolver<Mat>& es, Eigen::Index idx) {
  Vec v = es.eigenvectors().col(idx).real();
  if (v.norm() < 1e-300) v = es.eigenvectors().col(idx).imag();
  return v;
}

}  // namespace

ProximalData analyze_proximal(const Mat& f, const Form& form) {
  ProximalData out;
  const Eigen::Index n = f.rows();
  Eigen::EigenSolver<Mat> es(f, true);
  Eigen::VectorXcd ev = es.eigenvalues();
  std::vector<Eigen::Index> order(n);
  for (Eigen::Index i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](auto a, auto b) { return std::abs(ev(a)) > std::abs(ev(b)); });
  double m1 = std::abs(ev(order[0]));
  out.second_modulus = n > 1 ? std::abs(ev(order[1])) : 0.0;
  if (m1 == 0.0 || (n > 1 && m1 < (1.0 + kBand) * out.second_modulus) ||
      std::abs(ev(order[0]).imag()) > kTol * m1) {
    out.note = "no simple dominant eigenvalue: leading moduli " + std::to_string(m1) + ", " +
               std::to_string(out.second_modulus);
    return out;
  }
  out.v_s = top_real_eigvec(es, order[0]);
  out.lambda = power_iterate(f, out.v_s, out.iterations);

  Mat ft = f.transpose();
  Eigen::EigenSolver<Mat> esl(ft, true);
  Eigen::Index top = 0;
  esl.eigenvalues().cwiseAbs().maxCoeff(&top);
  out.w_u = top_real_eigvec(esl, top);
  int it2 = 0;
  power_iterate(ft, out.w_u, it2);

  Mat K = null_space(out.w_u.transpose(), 1e-14);
  out.V_u = orthonormalize(form, K, 1e-14).basis;
  const Mat& R = form.factor();
  Eigen::JacobiSVD<Mat> svd(R * f * out.V_u);
  out.strength = svd.singularValues()(0) / std::abs(out.lambda);
  out.proximal = true;
  return out;
}

double lipschitz_on_set(const Mat& f, const Form& form, Region region, double zeta, int samples,
                        std::uint64_t seed) {
  ProximalData pd = analyze_proximal(f, form);
  if (!pd.proximal) throw GeometryError("lipschitz_on_set needs a proximal map: " + pd.note);
  const int n = static_cast<int>(f.rows());
  const Mat& R = form.factor();
  Mat Rinv = R.triangularView<Eigen::Upper>().solve(Mat::Identity(n, n));
  Mat fr = R * f * Rinv;
  Vec vs = (R * pd.v_s).normalized();
  Mat Vu = R * pd.V_u;  // orthonormal columns in factor coordinates
  auto in_region = [&](const Vec& x) {
    if (region == Region::AwayFromRepeller) {
      Vec p = Vu * (Vu.transpose() * x);
      return std::atan2((x - p).norm(), p.norm()) >= zeta;
    }
    double c = std::abs(vs.dot(x)) / x.norm();
    return std::acos(std::min(1.0, c)) < zeta;
  };
  auto proj_angle = [](const Vec& a, const Vec& b) {
    double c = std::abs(a.dot(b)) / (a.norm() * b.norm());
    double s = (a / a.norm() - (a.dot(b) >= 0 ? 1.0 : -1.0) * b / b.norm()).norm();
    return c * c >= 0.5 ? 2.0 * std::asin(std::min(1.0, s / 2.0)) : std::acos(c);
  };
  Rng rng(seed);
  auto draw = [&]() -> Vec {
    if (region == Region::NearAttractor) {
      Vec q = rng.gaussian(n);
      q -= vs * vs.dot(q);
      q.normalize();
      double phi = rng.uniform(0.0, zeta);
      return std::cos(phi) * vs + std::sin(phi) * q;
    }
    return rng.unit(n);
  };
  double best = 0.0;
  int accepted = 0;
  for (int tries = 0; accepted < samples && tries < 50 * samples; ++tries) {
    Vec x = draw();
    if (!in_region(x)) continue;
    Vec q = rng.gaussian(n);
    q -= x * x.dot(q);
    q.normalize();
    double step = std::pow(10.0, rng.uniform(-4.0, -0.5));
    Vec y = std::cos(step) * x + std::sin(step) * q;
    if (!in_region(y)) continue;
    double den = proj_angle(x, y);
    if (den <= 0.0) continue;
    best = std::max(best, proj_angle(fr * x, fr * y) / den);
    ++accepted;
  }
  if (accepted == 0) throw GeometryError("no sample fell inside the requested region");
  return best;
}

ProximalSystemAudit audit_proximal_system(const std::vector<Mat>& maps, const Form& form) {
  ProximalSystemAudit out;
  const int n = static_cast<int>(maps.size());
  std::vector<ProximalData> data(2 * n);
  for (int i = 0; i < n; ++i) {
    for (int s = 0; s < 2; ++s) {
      Mat m = s == 0 ? maps[i] : Mat(maps[i].partialPivLu().inverse());
      data[2 * i + s] = analyze_proximal(m, form);
      if (!data[2 * i + s].proximal) {
        out.error = "map " + std::to_string(i + 1) + (s == 0 ? "" : "^-1") +
                    " is not proximal: " + data[2 * i + s].note;
        return out;
      }
      out.strength = std::max(out.strength, data[2 * i + s].strength);
    }
  }
  out.separation = std::numbers::pi;
  for (int a = 0; a < 2 * n; ++a)
    for (int b = 0; b < 2 * n; ++b) {
      int i = a / 2, sa = a % 2 == 0 ? 1 : -1;
      int j = b / 2, sb = b % 2 == 0 ? 1 : -1;
      if (i == j && sa == -sb) continue;
      double ang = angle_to_subspace(form, data[a].v_s, data[b].V_u);
      out.table.push_back({i + 1, sa, j + 1, sb, ang});
      out.separation = std::min(out.separation, ang);
    }
  out.ok = out.separation > 0.0;
  return out;
}

CorrespondenceReport check_correspondence(const PseudoHyperbolicMap& g,
                                          const std::vector<std::pair<Mat, Mat>>& pairs) {
  const Frame& fr = g.frame();
  const SpaceContext& ctx = fr.ctx();
  const int d = ctx.d();
  CorrespondenceReport rep;
  Mat F = compound(g.matrix(), d);
  Form wedge_n0 = Form::custom(ext_form(Form::n0(ctx), d));
  Form wedge_nv = Form::custom(ext_form(fr.local_form(), d));
  ProximalData pd = analyze_proximal(F, wedge_nv);
  rep.proximal = pd.proximal;
  Mat Xinv = g.g_more().partialPivLu().inverse();
  rep.inv_norm_more = Eigen::JacobiSVD<Mat>(Xinv).singularValues()(0);
  rep.det_more_abs = std::abs(g.g_more().determinant());
  if (pd.proximal) {
    rep.angle_vs_wedge = angle(wedge_n0, pd.v_s, wedge(fr.V_more().basis()), true);
    rep.strength_local = pd.strength;
    rep.lambda_abs = std::abs(pd.lambda);
  }
  const Form n0 = Form::n0(ctx);
  for (const auto& [A, B] : pairs) {
    CorrespondenceReport::Sandwich s;
    s.alpha1 = subspace_hausdorff_angle(n0, A, B);
    s.alpha2 = angle(wedge_n0, wedge(A), wedge(B), true);
    s.bound = std::sqrt(double(d)) * s.alpha1;
    s.holds = s.alpha1 <= s.alpha2 + 1e-12 && s.alpha2 <= s.bound + 1e-12;
    rep.sandwich.push_back(s);
  }
  return rep;
}

}  // namespace schottky

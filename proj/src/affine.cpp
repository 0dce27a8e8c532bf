#include "schottky/affine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace schottky {

Vec solve_center(const Mat& g, const Vec& t) {
  const Eigen::Index n = g.rows();
  Mat M = Mat::Identity(n, n) + g;
  Eigen::JacobiSVD<Mat> svd(M);
  const Vec& sv = svd.singularValues();
  if (sv(n - 1) <= 1e-12 * sv(0)) throw GeometryError("Id + g is singular: -1 is an eigenvalue");
  Vec u = M.partialPivLu().solve(t);
  if ((M * u - t).norm() > 1e-9 * (1.0 + t.norm()))
    throw GeometryError("center equation solved with excessive residual");
  return u;
}

AffineMap AffineDeformation::gamma(int i, int sigma) const {
  const auto& g = group.generators[i];
  if (sigma > 0) return {g.matrix(), t[i]};
  return {g.inverse(), -(g.inverse() * t[i])};
}

AffineDeformation build_deformation(const SchottkyGroup& group, const std::vector<Vec>& t) {
  if (static_cast<int>(t.size()) != group.n())
    throw GeometryError("one translation is needed per generator");
  AffineDeformation def;
  def.group = group;
  def.t = t;
  for (int i = 0; i < group.n(); ++i) {
    if (t[i].size() != group.ctx.dim()) throw GeometryError("translation has the wrong size");
    def.u.push_back(solve_center(group.generators[i].matrix(), t[i]));
  }
  return def;
}

std::vector<Vec> canonical_translations(const SchottkyGroup& group) {
  std::vector<Vec> t;
  for (const auto& fr : group.frameset.frames) t.push_back(2.0 * fr.e_eq());
  return t;
}

bool cone_membership(const AffineDeformation& def, int i, int sigma, const Vec& x, bool closed) {
  Vec y = x - def.apex(i, sigma);
  if (y.isZero(0.0)) return closed;
  return tennis_membership(def.group.frameset.frames[i], def.group.radii[i], y,
                           sigma > 0 ? Side::Plus : Side::Minus, closed);
}

namespace {

double n0_norm(const SpaceContext& ctx, const Vec& x) {
  return std::sqrt(x.dot(ctx.gram_N0() * x));
}

// Signed distance-like margin of x inside the cone H_i^sigma: positive inside,
// negative outside, the angular margin scaled by the distance to the apex.
double cone_margin(const AffineDeformation& def, int i, int sigma, const Vec& x) {
  Vec y = x - def.apex(i, sigma);
  double r = n0_norm(def.group.ctx, y);
  if (r == 0.0) return 0.0;
  const Frame& fr = def.group.frameset.frames[i];
  double ang = angle_to_wing_local(fr, y, sigma > 0 ? Side::Plus : Side::Minus);
  return (def.group.radii[i] - ang) * r;
}

Vec pull_back(const AffineDeformation& def, const Letter& l, const Vec& x) {
  return def.gamma(l.i, -l.sigma)(x);
}

// Open membership in the tilde domain of (i, sigma), without a boundary band.
bool in_tilde(const AffineDeformation& def, int i, int sigma, const Vec& x) {
  if (sigma < 0) return cone_margin(def, i, -1, x) > 0;
  return cone_margin(def, i, -1, def.gamma(i, -1)(x)) < 0;
}

}  // namespace

InTReport in_T(const SchottkyGroup& group, const std::vector<Vec>& t, int samples,
               std::uint64_t seed) {
  InTReport rep;
  rep.samples = samples;
  AffineDeformation def = build_deformation(group, t);
  const SpaceContext& ctx = group.ctx;
  const int n = group.n();
  const Form n0 = Form::n0(ctx);

  struct Cone {
    int i, sigma;
  };
  std::vector<Cone> cones;
  for (int i = 0; i < n; ++i) {
    cones.push_back({i, -1});
    cones.push_back({i, 1});
  }

  // Asymptotic parts: the closed sphere domains must be angularly disjoint.
  rep.sphere_gap = std::numbers::pi;
  for (std::size_t a = 0; a < cones.size(); ++a)
    for (std::size_t b = a + 1; b < cones.size(); ++b) {
      const Frame& fa = group.frameset.frames[cones[a].i];
      const Frame& fb = group.frameset.frames[cones[b].i];
      const Wing& wa = cones[a].sigma > 0 ? fa.wing_more() : fa.wing_less();
      const Wing& wb = cones[b].sigma > 0 ? fb.wing_more() : fb.wing_less();
      double gap = wing_distance(n0, wa, wb).angle -
                   group.radii[cones[a].i] * fa.lipschitz() * fa.lipschitz() -
                   group.radii[cones[b].i] * fb.lipschitz() * fb.lipschitz();
      rep.sphere_gap = std::min(rep.sphere_gap, gap);
    }
  rep.sphere_disjoint = rep.sphere_gap > 0;

  // Compact parts: sample each closed cone inside the ball of radius R.
  double umax = 0.0;
  for (const Vec& u : def.u) umax = std::max(umax, n0_norm(ctx, u));
  rep.radius = 10.0 * (1.0 + umax);
  Rng rng(seed);
  std::vector<std::vector<Vec>> pts(cones.size());
  for (std::size_t a = 0; a < cones.size(); ++a) {
    const auto& c = cones[a];
    auto dirs = sample_sphere_domain(group, c.i, c.sigma > 0 ? Side::Plus : Side::Minus, samples,
                                     rng);
    Vec apex = def.apex(c.i, c.sigma);
    pts[a].push_back(apex);
    for (const Vec& dir : dirs) {
      double s = rng.uniform();
      pts[a].push_back(apex + rep.radius * s * s * dir);
    }
  }

  bool cross = false;
  rep.d_min = HUGE_VAL;
  const Mat& R0 = n0.factor();
  for (std::size_t a = 0; a < cones.size() && !cross; ++a)
    for (std::size_t b = a + 1; b < cones.size() && !cross; ++b) {
      for (const Vec& x : pts[a])
        if (cone_membership(def, cones[b].i, cones[b].sigma, x, true)) {
          cross = true;
          rep.witness_a = rep.witness_b = x;
          break;
        }
      for (const Vec& x : pts[b])
        if (!cross && cone_membership(def, cones[a].i, cones[a].sigma, x, true)) {
          cross = true;
          rep.witness_a = rep.witness_b = x;
        }
      if (cross) break;
      Mat A(ctx.dim(), pts[a].size()), B(ctx.dim(), pts[b].size());
      for (std::size_t k = 0; k < pts[a].size(); ++k) A.col(k) = R0 * pts[a][k];
      for (std::size_t k = 0; k < pts[b].size(); ++k) B.col(k) = R0 * pts[b][k];
      Vec an = A.colwise().squaredNorm().transpose(), bn = B.colwise().squaredNorm().transpose();
      Mat D2 = (-2.0 * A.transpose() * B).colwise() + an;
      D2.rowwise() += bn.transpose();
      Eigen::Index ia, ib;
      double m2 = D2.minCoeff(&ia, &ib);
      double dist = std::sqrt(std::max(0.0, m2));
      if (dist < rep.d_min) {
        rep.d_min = dist;
        rep.witness_a = pts[a][ia];
        rep.witness_b = pts[b][ib];
      }
    }
  if (cross) {
    rep.d_min = 0.0;
    rep.note = "closed cone domains share a point";
  } else if (!rep.sphere_disjoint) {
    rep.note = "sphere domains are not angularly disjoint";
  }
  rep.in_T = !cross && rep.sphere_disjoint && rep.d_min > 0;
  return rep;
}

PointClass classify_point(const AffineDeformation& def, const Vec& x) {
  PointClass pc;
  const SpaceContext& ctx = def.group.ctx;
  bool boundary = false;
  for (int i = 0; i < def.group.n(); ++i) {
    double tau = 1e-7 * (1.0 + n0_norm(ctx, x));
    double m = cone_margin(def, i, -1, x);
    if (std::abs(m) <= tau) boundary = true;
    else if (m > 0) {
      if (pc.claimants++ == 0) pc.i = i, pc.sigma = -1;
    }
    Vec z = def.gamma(i, -1)(x);
    double tz = 1e-7 * (1.0 + n0_norm(ctx, z));
    double mz = cone_margin(def, i, -1, z);
    if (std::abs(mz) <= tz) boundary = true;
    else if (mz < 0) {
      if (pc.claimants++ == 0) pc.i = i, pc.sigma = 1;
    }
  }
  pc.zone = boundary ? Zone::Boundary : pc.claimants > 0 ? Zone::Tilde : Zone::H0;
  return pc;
}

std::string to_string(TraceStatus s) {
  switch (s) {
    case TraceStatus::Landed: return "landed";
    case TraceStatus::BudgetExhausted: return "budget-exhausted";
    case TraceStatus::Diverged: return "diverged";
    case TraceStatus::Boundary: return "boundary";
  }
  return "?";
}

TileTrace trace_point(const AffineDeformation& def, const Vec& x0, int max_steps) {
  TileTrace tr;
  tr.x0 = x0;
  Vec x = x0;
  tr.points.push_back(x);
  for (int k = 0;; ++k) {
    PointClass pc = classify_point(def, x);
    if (pc.zone == Zone::Boundary || pc.claimants > 1) {
      tr.status = TraceStatus::Boundary;
      tr.boundary_step = k;
      break;
    }
    if (pc.zone == Zone::H0) {
      tr.status = TraceStatus::Landed;
      break;
    }
    if (k >= max_steps) {
      tr.status = TraceStatus::BudgetExhausted;
      break;
    }
    Letter l{pc.i, pc.sigma};
    if (!tr.letters.empty() && tr.letters.back().i == l.i && tr.letters.back().sigma == -l.sigma) {
      // Cannot happen for exact arithmetic; treat as a numerical boundary case.
      tr.status = TraceStatus::Boundary;
      tr.boundary_step = k;
      break;
    }
    tr.letters.push_back(l);
    x = pull_back(def, l, x);
    tr.points.push_back(x);
    if (!x.allFinite() || x.norm() > 1e150) {
      tr.status = TraceStatus::Diverged;
      break;
    }
  }
  if (!tr.letters.empty()) tr.gaps = gap_sequence(def, tr);
  return tr;
}

Vec attracting_ray(const AffineDeformation& def, const Letter& first) {
  const Frame& fr = def.group.frameset.frames[first.i];
  return (first.sigma > 0 ? fr.wing_more() : fr.wing_less()).apex;
}

std::vector<GapEntry> gap_sequence(const AffineDeformation& def, const TileTrace& trace,
                                   const GapOptions& opt) {
  std::vector<GapEntry> out;
  const Word& w = trace.letters;
  if (w.empty()) return out;
  const SpaceContext& ctx = def.group.ctx;
  const Mat& N = ctx.gram_N0();
  const Vec delta = attracting_ray(def, w.front());

  // Fixed downward rays in S, shared by all k so that the heights are comparable.
  Mat H = ctx.basis_S();
  for (Eigen::Index j = 0; j < H.cols(); ++j) H.col(j) -= delta * delta.dot(N * H.col(j));
  H = orthonormalize(Form::n0(ctx), H, 1e-10).basis;
  Rng rng(0x5eed);
  std::vector<Vec> rays;
  for (int r = 0; r < opt.rays; ++r) {
    double phi = r == 0 ? 0.0 : 1.45 * r / (opt.rays - 1);
    Vec h = H * rng.unit(static_cast<int>(H.cols()));
    rays.push_back(-std::cos(phi) * delta + std::sin(phi) * h);
  }

  const double scale = 1.0 + n0_norm(ctx, trace.x0);
  const double t0 = 1e-6 * scale, tmax = 1e8 * scale;
  for (std::size_t k = 0; k < w.size(); ++k) {
    // y lies in gamma^{[k]}(Htilde_{i_{k+1}}^{sigma_{k+1}}) iff its pullback by the
    // first k letters lies in the tilde domain of letter k+1.
    auto inside = [&](const Vec& y) {
      Vec z = y;
      for (std::size_t l = 0; l < k; ++l) z = pull_back(def, w[l], z);
      return in_tilde(def, w[k].i, w[k].sigma, z);
    };
    double a = 0.0;
    for (const Vec& r : rays) {
      double lo = 0.0, hi = t0;
      while (hi < tmax && inside(trace.x0 + hi * r)) {
        lo = hi;
        hi *= 1.25;
      }
      for (int b = 0; b < opt.bisection; ++b) {
        double mid = 0.5 * (lo + hi);
        (inside(trace.x0 + mid * r) ? lo : hi) = mid;
      }
      a = std::min(a, hi * r.dot(N * delta));
    }
    GapEntry e;
    e.a = a;
    if (k > 0) {
      e.delta = a - out.back().a;
      e.cyclic = !(w[k].i == w[0].i && w[k].sigma == -w[0].sigma);
    }
    out.push_back(e);
  }
  return out;
}

Subspace q_orthogonal_complement(const SpaceContext& ctx, const Mat& V) {
  Mat perp = null_space(V.transpose() * ctx.gram_N0());
  return orthonormalize(Form::n0(ctx), ctx.varsigma() * perp);
}

namespace {

Mtis random_mtis(const SpaceContext& ctx, Rng& rng) {
  const int d = ctx.d();
  Eigen::HouseholderQR<Mat> qr(rng.gaussian(d + 1, d));
  Mat f = qr.householderQ() * Mat::Identity(d + 1, d);
  return mtis_from_map(ctx, f);
}

}  // namespace

AngleControlReport verify_angle_control(const SpaceContext& ctx, int samples, std::uint64_t seed) {
  AngleControlReport rep;
  const Form n0 = Form::n0(ctx);
  const int d = ctx.d();
  Rng rng(seed);
  for (int k = 0; k < samples; ++k) {
    Mtis V = random_mtis(ctx, rng), W = random_mtis(ctx, rng);
    Mat Vq = q_orthogonal_complement(ctx, V.basis()).basis;
    Mat Wq = q_orthogonal_complement(ctx, W.basis()).basis;
    double lhs = subspace_hausdorff_angle(n0, Vq, Wq);
    double rhs = subspace_hausdorff_angle(n0, V.basis(), W.basis());
    rep.max_dev_complement = std::max(rep.max_dev_complement, std::abs(lhs - rhs));

    Vec x = ctx.basis_S() * rng.gaussian(d + 1);
    Mat J(ctx.dim(), Vq.cols() + d + 1);
    J << Vq, -ctx.basis_S();
    Mat K = null_space(J, 1e-10);
    if (K.cols() != 1) throw GeometryError("Q-complement of an MTIS meets S in more than a line");
    Vec line = Vq * K.topRows(Vq.cols()).col(0);
    double s1 = std::sin(angle_to_subspace(n0, x, line));
    double s2 = std::sqrt(2.0) * std::sin(angle_to_subspace(n0, x, Vq));
    rep.max_dev_sine = std::max(rep.max_dev_sine, std::abs(s1 - s2));
    ++rep.draws;
  }
  rep.ok = rep.max_dev_complement <= 1e-8 && rep.max_dev_sine <= 1e-8;
  return rep;
}

QuotientReport quotient_report(const AffineDeformation& def, const PingPongReport& sphere,
                               const InTReport& t_report) {
  if (!sphere.ok || !t_report.in_T)
    throw GeometryError("quotient report needs a certified group and translations in T");
  QuotientReport q;
  q.dimension = def.group.ctx.dim();
  q.handles = def.group.n();
  for (int i = 1; i <= def.group.n(); ++i)
    q.identifications.push_back("boundary of H~_" + std::to_string(i) + "^- glued to boundary of H~_" +
                                std::to_string(i) + "^+ by gamma_" + std::to_string(i));
  return q;
}

}  // namespace schottky

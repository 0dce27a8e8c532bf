#include "schottky/schottky.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace schottky {

Frameset build_frameset(const SpaceContext& ctx, const std::vector<Mtis>& components,
                        const std::vector<std::pair<int, int>>& pairing) {
  const int m = static_cast<int>(components.size());
  if (m == 0 || m % 2 != 0 || static_cast<int>(pairing.size()) * 2 != m)
    throw GeometryError("a frameset needs 2n components and n pairs");
  std::set<int> used;
  for (auto [a, b] : pairing) {
    if (a < 0 || b < 0 || a >= m || b >= m || a == b || !used.insert(a).second ||
        !used.insert(b).second)
      throw GeometryError("pairing must use every component exactly once");
  }
  Frameset fs;
  fs.components = components;
  fs.pairing = pairing;
  std::vector<Wing> wings;
  for (const auto& c : components) wings.push_back(positive_wing(ctx, c));
  const Form n0 = Form::n0(ctx);
  fs.separation = std::numbers::pi;
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      auto tr = is_transversal(components[a], components[b]);
      if (!tr.transversal)
        throw GeometryError("components " + std::to_string(a) + " and " + std::to_string(b) +
                            (tr.margin < kTol ? " coincide or meet" : " are not transversal"));
      fs.separation = std::min(fs.separation, wing_distance(n0, wings[a], wings[b]).angle);
    }
  for (auto [a, b] : pairing) fs.frames.push_back(build_frame(ctx, components[a], components[b]));
  return fs;
}

double angle_to_wing_local(double less_norm, double eq, double more_norm, Side side) {
  if (less_norm == 0.0 && eq == 0.0 && more_norm == 0.0)
    throw GeometryError("angle to a wing of the zero vector");
  if (side == Side::Plus)
    return eq >= 0 ? std::atan2(less_norm, std::hypot(more_norm, eq))
                   : std::atan2(std::hypot(less_norm, eq), more_norm);
  return eq <= 0 ? std::atan2(more_norm, std::hypot(less_norm, eq))
                 : std::atan2(std::hypot(more_norm, eq), less_norm);
}

double angle_to_wing_local(const Frame& frame, const Vec& x, Side side) {
  Components c = frame.components(x);
  return angle_to_wing_local(c.less.norm(), c.eq, c.more.norm(), side);
}

bool tennis_membership(double less_norm, double eq, double more_norm, double eps, Side side,
                       bool closed) {
  if (less_norm == 0.0 && eq == 0.0 && more_norm == 0.0)
    throw GeometryError("tennis-ball membership of the zero vector");
  if (!(eps > 0.0 && eps < std::numbers::pi / 2))
    throw GeometryError("radius must lie in (0, pi/2)");
  const double t = std::tan(eps);
  auto test = [&](double num, double den) { return closed ? num <= t * den : num < t * den; };
  if (side == Side::Plus) {
    bool lo = eq <= 0 && test(std::hypot(less_norm, eq), more_norm);
    bool hi = eq >= 0 && test(less_norm, std::hypot(more_norm, eq));
    return lo || hi;
  }
  bool lo = eq <= 0 && test(more_norm, std::hypot(less_norm, eq));
  bool hi = eq >= 0 && test(std::hypot(more_norm, eq), less_norm);
  return lo || hi;
}

bool tennis_membership(const Frame& frame, double eps, const Vec& x, Side side, bool closed) {
  Components c = frame.components(x);
  return tennis_membership(c.less.norm(), c.eq, c.more.norm(), eps, side, closed);
}

Tan4Check check_tan4_bound(double strength, double eps) {
  if (eps >= std::numbers::pi / 2) return {true, HUGE_VAL};
  double t4 = std::pow(std::tan(eps), 4);
  return {strength < t4, t4 - strength};
}

std::vector<double> choose_radii(const Frameset& fs, double eps) {
  if (!(eps > 0.0 && eps <= std::numbers::pi / 2))
    throw GeometryError("epsilon must lie in (0, pi/2]");
  std::vector<double> out;
  for (const auto& fr : fs.frames) {
    double c = fr.lipschitz();
    out.push_back(eps / 3.0 / (c * c));
  }
  return out;
}

double SchottkyGroup::strength() const {
  double s = 0.0;
  for (const auto& g : generators) s = std::max(s, g.strength());
  return s;
}

SchottkyGroup build_group(const SpaceContext& ctx, const std::vector<double>& thetas,
                          const std::vector<std::pair<int, int>>& pairing,
                          const std::vector<Mat>& g_less, double epsilon) {
  if (g_less.size() != pairing.size())
    throw GeometryError("one dynamical part is needed per generator");
  SchottkyGroup G;
  G.ctx = ctx;
  G.frameset = build_frameset(ctx, generate_transversal_family(ctx, thetas), pairing);
  for (std::size_t k = 0; k < g_less.size(); ++k)
    G.generators.push_back(build_pseudohyperbolic(G.frameset.frames[k], g_less[k]));
  G.epsilon = epsilon;
  G.radii = choose_radii(G.frameset, epsilon);
  return G;
}

namespace {

// Unit vector (frame coordinates) on the given wing.
Vec wing_point(int d, Side side, Rng& rng) {
  Vec c = Vec::Zero(2 * d + 1);
  double z = std::abs(rng.normal());
  if (side == Side::Plus) {
    c(d) = z;
    c.tail(d) = rng.gaussian(d);
  } else {
    c(d) = -z;
    c.head(d) = rng.gaussian(d);
  }
  return c.normalized();
}

// Rotate p by angle phi towards a random orthogonal direction.
Vec rotate_away(const Vec& p, double phi, Rng& rng) {
  Vec q = rng.gaussian(static_cast<int>(p.size()));
  q -= p * p.dot(q);
  q.normalize();
  return std::cos(phi) * p + std::sin(phi) * q;
}

Vec to_ambient_unit(const SpaceContext& ctx, const Frame& fr, const Vec& c) {
  Vec x = fr.basis() * c;
  return x / std::sqrt(x.dot(ctx.gram_N0() * x));
}

Side opposite(Side s) { return s == Side::Plus ? Side::Minus : Side::Plus; }

}  // namespace

std::vector<Vec> sample_sphere_domain(const SchottkyGroup& group, int i, Side side, int count,
                                      Rng& rng) {
  const Frame& fr = group.frameset.frames[i];
  const double eps = group.radii[i];
  const int d = group.ctx.d();
  std::vector<Vec> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    Vec p = wing_point(d, side, rng);
    double phi = (k % 2 == 0) ? eps : rng.uniform(0.0, eps);
    out.push_back(to_ambient_unit(group.ctx, fr, rotate_away(p, phi, rng)));
  }
  return out;
}

PingPongReport verify_ping_pong_sphere(const SchottkyGroup& group, int samples,
                                       std::uint64_t seed) {
  PingPongReport rep;
  rep.samples = samples;
  rep.seed = seed;
  const SpaceContext& ctx = group.ctx;
  const int d = ctx.d(), n = group.n(), dim = ctx.dim();
  const Form n0 = Form::n0(ctx);
  const Mat& R0 = n0.factor();
  Rng rng(seed);

  rep.tan4_ok = true;
  for (int i = 0; i < n; ++i) {
    auto t4 = check_tan4_bound(group.generators[i], group.radii[i]);
    rep.tan4_margins.push_back(t4.margin);
    rep.tan4_ok = rep.tan4_ok && t4.ok;
  }

  bool all_ok = true;
  for (int i = 0; i < n; ++i) {
    const Frame& fr = group.frameset.frames[i];
    const double eps = group.radii[i];
    for (int sigma : {1, -1}) {
      const Mat& h = sigma > 0 ? group.generators[i].matrix() : group.generators[i].inverse();
      const Side target = sigma > 0 ? Side::Plus : Side::Minus;
      const Side source = opposite(target);
      PingPongGeneratorReport gr{i, sigma, HUGE_VAL, 0, true, Vec()};
      int tries = 0;
      while (gr.samples < samples && tries < 100 * samples) {
        ++tries;
        Vec x;
        if (gr.samples % 2 == 0) {
          x = R0.triangularView<Eigen::Upper>().solve(rng.unit(dim));
        } else {
          Vec c = rotate_away(wing_point(d, source, rng), rng.uniform(eps, 3.0 * eps), rng);
          x = to_ambient_unit(ctx, fr, c);
        }
        if (angle_to_wing_local(fr, x, source) <= eps) continue;
        ++gr.samples;
        double margin = eps - angle_to_wing_local(fr, h * x, target);
        if (margin < gr.worst_margin) {
          gr.worst_margin = margin;
          if (margin <= 0) gr.witness = x;
        }
      }
      gr.ok = gr.samples == samples && gr.worst_margin > 0;
      all_ok = all_ok && gr.ok;
      rep.generators.push_back(gr);
    }
  }

  // Closures of the 2n domains: analytic gap through the N_V -> N0 comparison,
  // plus a sampled cross-membership scan.
  struct Dom {
    int i;
    Side side;
  };
  std::vector<Dom> doms;
  for (int i = 0; i < n; ++i) {
    doms.push_back({i, Side::Minus});
    doms.push_back({i, Side::Plus});
  }
  std::vector<Wing> wings;
  std::vector<std::vector<Vec>> pts;
  const int per = std::min(samples, 2000);
  for (const auto& D : doms) {
    const Frame& fr = group.frameset.frames[D.i];
    wings.push_back(D.side == Side::Plus ? fr.wing_more() : fr.wing_less());
    pts.push_back(sample_sphere_domain(group, D.i, D.side, per, rng));
  }
  rep.disjoint_bound = HUGE_VAL;
  rep.disjoint_sampled = HUGE_VAL;
  bool cross = false;
  for (std::size_t a = 0; a < doms.size(); ++a)
    for (std::size_t b = a + 1; b < doms.size(); ++b) {
      const Frame& fa = group.frameset.frames[doms[a].i];
      const Frame& fb = group.frameset.frames[doms[b].i];
      double ra = group.radii[doms[a].i] * fa.lipschitz() * fa.lipschitz();
      double rb = group.radii[doms[b].i] * fb.lipschitz() * fb.lipschitz();
      double gap = wing_distance(n0, wings[a], wings[b]).angle - ra - rb;
      rep.disjoint_bound = std::min(rep.disjoint_bound, gap);
      rep.disjoint_sampled = std::min(rep.disjoint_sampled, set_min_angle(n0, pts[a], pts[b]));
      for (const Vec& x : pts[a])
        if (angle_to_wing_local(fb, x, doms[b].side) <= group.radii[doms[b].i]) cross = true;
      for (const Vec& x : pts[b])
        if (angle_to_wing_local(fa, x, doms[a].side) <= group.radii[doms[a].i]) cross = true;
    }
  if (doms.size() < 2) rep.disjoint_bound = rep.disjoint_sampled = std::numbers::pi;
  rep.disjoint_ok = rep.disjoint_bound > 0 && !cross;
  rep.ok = all_ok && rep.disjoint_ok;
  return rep;
}

}  // namespace schottky

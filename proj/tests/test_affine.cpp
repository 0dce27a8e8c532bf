#include <doctest.h>

#include "support.hpp"

using namespace schottky;
using namespace testing_support;

namespace {
constexpr std::uint64_t SEED = 4242;
constexpr int ITERATIONS = 200;

AffineDeformation canonical(int d, double s = 1e-3) {
  SchottkyGroup g = demo_group(d, s);
  return build_deformation(g, canonical_translations(g));
}

Vec apply_word(const AffineDeformation& def, const Word& w, Vec x) {
  for (auto it = w.rbegin(); it != w.rend(); ++it) x = def.gamma(it->i, it->sigma)(x);
  return x;
}

// Points of H0 found by rejection in a ball around the origin.
std::vector<Vec> h0_points(const AffineDeformation& def, int count, double radius, Rng& rng) {
  std::vector<Vec> out;
  const int dim = def.group.ctx.dim();
  while (static_cast<int>(out.size()) < count) {
    Vec x = radius * rng.uniform() * rng.unit(dim);
    if (classify_point(def, x).zone == Zone::H0) out.push_back(x);
  }
  return out;
}
}  // namespace

TEST_CASE("center of an affine map") {
  Rng rng(SEED);
  SchottkyGroup g = demo_group(3, 1e-2);
  for (int it = 0; it < 20; ++it) {
    Vec t = rng.gaussian(7);
    const Mat& m = g.generators[it % 2].matrix();
    Vec u = solve_center(m, t);
    CHECK((u + m * u - t).norm() <= 1e-9 * (1.0 + t.norm()));
  }
  CHECK_THROWS_AS(solve_center(-Mat::Identity(3, 3), Vec::Ones(3)), GeometryError);
}

TEST_CASE("canonical translations have centers e_eq") {
  AffineDeformation def = canonical(1);
  for (int i = 0; i < def.group.n(); ++i) {
    CHECK((def.u[i] - def.group.frameset.frames[i].e_eq()).norm() <= 1e-9);
    CHECK((def.apex(i, -1) + def.u[i]).norm() == 0.0);
  }
  CHECK_THROWS_AS(build_deformation(def.group, {Vec::Ones(3)}), GeometryError);
  CHECK_THROWS_AS(build_deformation(def.group, {Vec::Ones(3), Vec::Ones(4)}), GeometryError);
}

TEST_CASE("gamma and its inverse") {
  Rng rng(SEED + 1);
  AffineDeformation def = canonical(3);
  for (int it = 0; it < 50; ++it) {
    Vec x = rng.gaussian(7);
    int i = it % 2;
    Vec y = def.gamma(i, -1)(def.gamma(i, 1)(x));
    CHECK((y - x).norm() <= 1e-6 * (1.0 + x.norm()));
    // gamma carries the apex of its repelling cone to that of its attracting cone.
    CHECK((def.gamma(i, 1)(def.apex(i, -1)) - def.apex(i, 1)).norm() <= 1e-9);
  }
}

TEST_CASE("cone membership: apex, axis and far side") {
  AffineDeformation def = canonical(1);
  for (int i = 0; i < 2; ++i) {
    const Vec& e = def.group.frameset.frames[i].e_eq();
    CHECK(cone_membership(def, i, 1, def.apex(i, 1), true));
    CHECK_FALSE(cone_membership(def, i, 1, def.apex(i, 1), false));
    CHECK(cone_membership(def, i, 1, def.apex(i, 1) + 5.0 * e, false));
    CHECK(cone_membership(def, i, -1, def.apex(i, -1) - 5.0 * e, false));
    CHECK_FALSE(cone_membership(def, i, 1, def.apex(i, 1) - 5.0 * e, true));
    CHECK_FALSE(cone_membership(def, i, -1, def.apex(i, -1) + 5.0 * e, true));
  }
}

TEST_CASE("canonical translations lie in T") {
  for (int d : {1, 3}) {
    SchottkyGroup g = demo_group(d, d == 1 ? 1e-3 : 1e-4);
    InTReport r = in_T(g, canonical_translations(g), 600);
    CHECK(r.in_T);
    CHECK(r.sphere_disjoint);
    CHECK(r.d_min > 0);
    CHECK(r.note.empty());
  }
}

TEST_CASE("T is a cone and is open") {
  Rng rng(SEED + 2);
  SchottkyGroup g = demo_group(1, 1e-3);
  auto t0 = canonical_translations(g);
  InTReport base = in_T(g, t0, 600);
  REQUIRE(base.in_T);
  for (double c : {0.5, 3.0, 10.0}) {
    std::vector<Vec> t;
    for (const Vec& v : t0) t.push_back(c * v);
    CHECK(in_T(g, t, 600).in_T);
  }
  // Moving each center by less than d_min / 4 keeps the cones d_min / 2 apart.
  AffineDeformation def = build_deformation(g, t0);
  for (int it = 0; it < 5; ++it) {
    std::vector<Vec> t;
    for (int i = 0; i < g.n(); ++i) {
      Vec u = def.u[i] + 0.2 * base.d_min * rng.unit(3);
      t.push_back(u + g.generators[i].matrix() * u);
    }
    CHECK(in_T(g, t, 600).in_T);
  }
}

TEST_CASE("equal apexes are not in T") {
  SchottkyGroup g = demo_group(1, 1e-3);
  InTReport r = in_T(g, {Vec::Zero(3), Vec::Zero(3)}, 300);
  CHECK_FALSE(r.in_T);
  CHECK(r.d_min == 0.0);
  CHECK(r.note == "closed cone domains share a point");
  CHECK(r.witness_a.size() == 3);
}

TEST_CASE("classification is exclusive and matches the generators") {
  Rng rng(SEED + 3);
  AffineDeformation def = canonical(1);
  const double R = 10.0 * 2.0;
  int h0 = 0, tilde = 0;
  for (int it = 0; it < ITERATIONS * 10; ++it) {
    Vec x = R * rng.uniform() * rng.unit(3);
    PointClass pc = classify_point(def, x);
    if (pc.zone == Zone::Boundary) continue;
    CHECK(pc.claimants <= 1);
    if (pc.zone == Zone::Tilde) {
      ++tilde;
      if (pc.sigma < 0) CHECK(cone_membership(def, pc.i, -1, x, false));
      else CHECK_FALSE(cone_membership(def, pc.i, -1, def.gamma(pc.i, -1)(x), true));
    } else {
      ++h0;
    }
  }
  CHECK(h0 > 0);
  CHECK(tilde > 0);
}

TEST_CASE("generators move H0 into their own tilde domains") {
  Rng rng(SEED + 4);
  AffineDeformation def = canonical(1);
  for (const Vec& p : h0_points(def, ITERATIONS, 8.0, rng))
    for (int i = 0; i < def.group.n(); ++i)
      for (int sigma : {1, -1}) {
        PointClass pc = classify_point(def, def.gamma(i, sigma)(p));
        if (pc.zone == Zone::Boundary) continue;
        CHECK(pc.zone == Zone::Tilde);
        CHECK(pc.i == i);
        CHECK(pc.sigma == sigma);
      }
}

TEST_CASE("tracing an image of H0 recovers the word and the point") {
  Rng rng(SEED + 5);
  for (int d : {1, 3}) {
    AffineDeformation def = canonical(d, d == 1 ? 1e-3 : 1e-4);
    auto words = enumerate_words(2, 3, WordMode::Reduced);
    auto base = h0_points(def, 120, 3.0, rng);
    for (std::size_t k = 0; k < base.size(); ++k) {
      const Word& w = words[1 + k % (words.size() - 1)];
      Vec x0 = apply_word(def, w, base[k]);
      TileTrace tr = trace_point(def, x0, 60);
      if (tr.status == TraceStatus::Boundary) continue;
      REQUIRE(tr.status == TraceStatus::Landed);
      CHECK(tr.points.size() == tr.letters.size() + 1);
      // Running the trace forward from the landing point reproduces x0.
      Vec back = apply_word(def, tr.letters, tr.points.back());
      CHECK((back - x0).norm() <= 1e-6 * (1.0 + x0.norm()));
      // Each pullback expands rounding by 1/s, so at s = 1e-3 only words of
      // length <= 2 are guaranteed to come back letter for letter.
      if (w.size() <= 2) {
        CHECK(tr.letters == w);
        CHECK((tr.points.back() - base[k]).norm() <= 1e-6 * (1.0 + x0.norm()));
      }
    }
  }
}

TEST_CASE("gap heights are nondecreasing and grow at cyclically reduced steps") {
  Rng rng(SEED + 6);
  AffineDeformation def = canonical(1);
  auto base = h0_points(def, 12, 2.0, rng);
  Word w{{0, 1}, {1, 1}, {0, -1}, {1, 1}, {0, 1}};
  int cyclic_steps = 0;
  for (const Vec& p : base) {
    TileTrace tr = trace_point(def, apply_word(def, w, p), 60);
    if (tr.status != TraceStatus::Landed) continue;
    REQUIRE(tr.gaps.size() == tr.letters.size());
    for (std::size_t k = 1; k < tr.gaps.size(); ++k) {
      CHECK(tr.gaps[k].a >= tr.gaps[k - 1].a - 1e-9 * (1.0 + std::abs(tr.gaps[k].a)));
      if (tr.gaps[k].cyclic) {
        CHECK(tr.gaps[k].delta > 0);
        ++cyclic_steps;
      }
    }
  }
  CHECK(cyclic_steps > 0);
}

TEST_CASE("trace statuses") {
  AffineDeformation def = canonical(1);
  Vec p = Vec::Zero(3);
  REQUIRE(classify_point(def, p).zone == Zone::H0);
  TileTrace landed = trace_point(def, p, 60);
  CHECK(landed.status == TraceStatus::Landed);
  CHECK(landed.letters.empty());
  CHECK(landed.gaps.empty());
  Vec deep = apply_word(def, {{0, 1}, {1, 1}, {0, 1}}, p);
  CHECK(trace_point(def, deep, 1).status == TraceStatus::BudgetExhausted);
  CHECK(to_string(TraceStatus::Diverged) == "diverged");
  CHECK(to_string(TraceStatus::BudgetExhausted) == "budget-exhausted");
}

TEST_CASE("attracting ray is the apex of the first letter's wing") {
  AffineDeformation def = canonical(3);
  for (int i = 0; i < 2; ++i)
    for (int sigma : {1, -1}) {
      Vec r = attracting_ray(def, {i, sigma});
      CHECK(r.norm() == doctest::Approx(1.0));
      CHECK(def.group.ctx.coords_T(r).norm() <= 1e-12);
      const Frame& fr = def.group.frameset.frames[i];
      CHECK(wing_contains(def.group.ctx, sigma > 0 ? fr.wing_more() : fr.wing_less(), r));
    }
}

TEST_CASE("Q-orthogonal complement of an MTIS") {
  Rng rng(SEED + 7);
  for (int d : {1, 3}) {
    SpaceContext ctx(d);
    Form n0 = Form::n0(ctx);
    for (int it = 0; it < 20; ++it) {
      Mtis V = random_mtis(ctx, rng);
      Subspace c = q_orthogonal_complement(ctx, V.basis());
      CHECK(c.dim() == d + 1);
      CHECK((V.basis().transpose() * ctx.gram_Q() * c.basis).norm() <= 1e-10);
      // An isotropic subspace lies in its own complement.
      CHECK(angle_to_subspace(n0, V.basis().col(0), c.basis) <= 1e-8);
    }
  }
  SpaceContext ctx(1);
  Subspace c = q_orthogonal_complement(ctx, Vec::Unit(3, 0));
  CHECK(c.dim() == 2);
  CHECK(std::abs(c.basis.col(0)(0)) + std::abs(c.basis.col(1)(0)) <= 1e-12);
}

TEST_CASE("angle control identities") {
  for (int d : {1, 3}) {
    AngleControlReport r = verify_angle_control(SpaceContext(d), 100, 17);
    CHECK(r.ok);
    CHECK(r.draws == 100);
    CHECK(r.max_dev_complement <= 1e-8);
    CHECK(r.max_dev_sine <= 1e-8);
  }
}

TEST_CASE("quotient report needs a certified deformation") {
  SchottkyGroup g = demo_group(1, 1e-3);
  auto t = canonical_translations(g);
  AffineDeformation def = build_deformation(g, t);
  PingPongReport pp = verify_ping_pong_sphere(g, 500, 1);
  InTReport it = in_T(g, t, 300);
  QuotientReport q = quotient_report(def, pp, it);
  CHECK(q.dimension == 3);
  CHECK(q.handles == 2);
  CHECK(q.identifications.size() == 2);
  InTReport bad = in_T(g, {Vec::Zero(3), Vec::Zero(3)}, 100);
  CHECK_THROWS_AS(quotient_report(def, pp, bad), GeometryError);
}

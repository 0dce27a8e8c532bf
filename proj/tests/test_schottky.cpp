#include <doctest.h>

#include "support.hpp"

#include <set>

using namespace schottky;
using namespace testing_support;

namespace {
constexpr std::uint64_t SEED = 31337;
constexpr int ITERATIONS = 1000;

// Reducedness by direct scan of the letter codes, independent of is_reduced.
bool oracle_reduced(const Word& w, bool cyclic) {
  auto cancels = [](const Letter& a, const Letter& b) { return a.i == b.i && a.sigma + b.sigma == 0; };
  for (std::size_t k = 0; k + 1 < w.size(); ++k)
    if (cancels(w[k], w[k + 1])) return false;
  if (cyclic && w.size() >= 2 && cancels(w.front(), w.back())) return false;
  return true;
}

SchottkyGroup skewed_group(int d) {
  SpaceContext ctx(d);
  return build_group(ctx, {0.0, 0.9, 2.1, 4.0}, {{0, 2}, {1, 3}},
                     {1e-4 * Mat::Identity(d, d), 1e-4 * Mat::Identity(d, d)}, 0.6);
}
}  // namespace

TEST_CASE("frameset validation") {
  SpaceContext ctx(1);
  auto fam = generate_transversal_family(ctx, {0, kPi / 2, kPi, 3 * kPi / 2});
  CHECK_NOTHROW(build_frameset(ctx, fam, {{0, 2}, {1, 3}}));
  CHECK_THROWS_AS(build_frameset(ctx, {fam[0], fam[1], fam[2]}, {{0, 1}}), GeometryError);
  CHECK_THROWS_AS(build_frameset(ctx, fam, {{0, 2}, {2, 3}}), GeometryError);
  CHECK_THROWS_AS(build_frameset(ctx, fam, {{0, 0}, {1, 3}}), GeometryError);
  CHECK_THROWS_AS(build_frameset(ctx, fam, {{0, 2}, {1, 4}}), GeometryError);
  std::vector<Mtis> dup{fam[0], fam[1], fam[1], fam[2]};
  try {
    build_frameset(ctx, dup, {{0, 2}, {1, 3}});
    FAIL("coincident components accepted");
  } catch (const GeometryError& e) {
    CHECK(std::string(e.what()).find("1 and 2") != std::string::npos);
  }
}

TEST_CASE("frameset separation matches sampled wing distances") {
  Rng rng(SEED);
  SchottkyGroup g = skewed_group(1);
  const auto& comps = g.frameset.components;
  double sampled = HUGE_VAL;
  for (std::size_t a = 0; a < comps.size(); ++a)
    for (std::size_t b = a + 1; b < comps.size(); ++b) {
      Wing wa = positive_wing(g.ctx, comps[a]), wb = positive_wing(g.ctx, comps[b]);
      for (const Vec& x : sample_wing(wa, 4000, rng)) sampled = std::min(sampled, oracle_angle_to_wing(wb, x));
    }
  CHECK(g.frameset.separation <= sampled + 1e-9);
  CHECK(g.frameset.separation >= sampled - 0.01);
}

TEST_CASE("tennis-ball membership on explicit component triples") {
  const double eps = 0.25, t = std::tan(eps);
  // Plus side, positive e_= branch: |x_<| against tan(eps) * hypot(|x_>|, x_=).
  CHECK(tennis_membership(0.0, 1.0, 0.0, eps, Side::Plus, false));
  CHECK(tennis_membership(0.5 * t, 1.0, 0.0, eps, Side::Plus, false));
  CHECK_FALSE(tennis_membership(t, 1.0, 0.0, eps, Side::Plus, false));
  CHECK(tennis_membership(t, 1.0, 0.0, eps, Side::Plus, true));
  CHECK(tennis_membership(0.0, 0.0, 1.0, eps, Side::Plus, false));
  // Negative e_= branch: hypot(|x_<|, x_=) against tan(eps) |x_>|.
  CHECK(tennis_membership(0.0, -0.1 * t, 1.0, eps, Side::Plus, false));
  CHECK_FALSE(tennis_membership(0.0, -1.0, 0.0, eps, Side::Plus, true));
  CHECK_FALSE(tennis_membership(0.0, -2.0 * t, 1.0, eps, Side::Plus, true));
  // The minus side mirrors the plus side.
  CHECK(tennis_membership(0.0, -1.0, 0.0, eps, Side::Minus, false));
  CHECK(tennis_membership(1.0, 0.1 * t, 0.0, eps, Side::Minus, false));
  CHECK_FALSE(tennis_membership(0.0, 1.0, 0.0, eps, Side::Minus, true));
  CHECK_THROWS_AS(tennis_membership(0.0, 0.0, 0.0, eps, Side::Plus, true), GeometryError);
  CHECK_THROWS_AS(tennis_membership(1.0, 0.0, 0.0, 0.0, Side::Plus, true), GeometryError);
  CHECK_THROWS_AS(tennis_membership(1.0, 0.0, 0.0, kPi / 2, Side::Plus, true), GeometryError);
}

TEST_CASE("membership agrees with the local angle to the wing") {
  Rng rng(SEED + 1);
  for (int it = 0; it < ITERATIONS; ++it) {
    double l = std::abs(rng.normal()), e = rng.normal(), m = std::abs(rng.normal());
    double eps = rng.uniform(0.01, 1.5);
    for (Side side : {Side::Plus, Side::Minus}) {
      double a = angle_to_wing_local(l, e, m, side);
      if (std::abs(a - eps) > 1e-12) CHECK(tennis_membership(l, e, m, eps, side, true) == (a <= eps));
      // Geometric oracle: nearest point of the wing in the (less, eq, more) plane.
      Vec x(3);
      x << l, e, m;
      Vec p = x;
      if (side == Side::Plus) {
        p(0) = 0;
        p(1) = std::max(0.0, e);
      } else {
        p(2) = 0;
        p(1) = std::min(0.0, e);
      }
      double ref = p.norm() == 0 ? kPi / 2 : std::acos(std::clamp(x.dot(p) / (x.norm() * p.norm()), -1.0, 1.0));
      CHECK(a == doctest::Approx(ref).epsilon(1e-9));
    }
  }
}

TEST_CASE("fourth-power tangent bound") {
  CHECK(check_tan4_bound(1e-3, 0.25).ok);
  CHECK(check_tan4_bound(1e-3, 0.25).margin == doctest::Approx(std::pow(std::tan(0.25), 4) - 1e-3));
  CHECK_FALSE(check_tan4_bound(0.5, 0.25).ok);
  CHECK_FALSE(check_tan4_bound(std::pow(std::tan(0.25), 4), 0.25).ok);
  CHECK(check_tan4_bound(0.99, kPi / 2).ok);
}

TEST_CASE("radii: eps / 3 / C^2") {
  SchottkyGroup demo = demo_group(1, 1e-3);
  for (double r : demo.radii) CHECK(r == doctest::Approx(0.25));
  SchottkyGroup g = skewed_group(1);
  for (std::size_t k = 0; k < g.radii.size(); ++k) {
    double c = g.frameset.frames[k].lipschitz();
    CHECK(c > 1.0);
    CHECK(g.radii[k] == doctest::Approx(0.6 / 3.0 / (c * c)));
  }
  CHECK_THROWS_AS(choose_radii(g.frameset, 0.0), GeometryError);
  CHECK_THROWS_AS(choose_radii(g.frameset, 2.0), GeometryError);
}

TEST_CASE("local tennis balls sit inside the N0 neighborhoods of the wings") {
  Rng rng(SEED + 2);
  for (int d : {1, 3}) {
    SchottkyGroup g = skewed_group(d);
    for (int i = 0; i < g.n(); ++i)
      for (Side side : {Side::Plus, Side::Minus}) {
        const Frame& fr = g.frameset.frames[i];
        const Wing& w = side == Side::Plus ? fr.wing_more() : fr.wing_less();
        const double c = fr.lipschitz();
        double worst = 0.0;
        for (const Vec& x : sample_sphere_domain(g, i, side, 2500, rng)) {
          CHECK(tennis_membership(fr, g.radii[i], x, side, true));
          worst = std::max(worst, oracle_angle_to_wing(w, x));
        }
        CHECK(worst <= c * c * g.radii[i] + 1e-9);
        CHECK(worst <= g.epsilon / 3.0 + 1e-9);
      }
  }
}

TEST_CASE("sphere ping-pong: demo groups pass") {
  for (int d : {1, 3}) {
    SchottkyGroup g = demo_group(d, d == 1 ? 1e-3 : 1e-4);
    PingPongReport r = verify_ping_pong_sphere(g, 2000, 11);
    CHECK(r.ok);
    CHECK(r.tan4_ok);
    CHECK(r.disjoint_ok);
    CHECK(r.disjoint_bound > 0);
    CHECK(r.disjoint_sampled >= r.disjoint_bound);
    REQUIRE(r.generators.size() == 4);
    std::set<std::pair<int, int>> seen;
    for (const auto& e : r.generators) {
      seen.insert({e.index, e.sigma});
      CHECK(e.ok);
      CHECK(e.samples == 2000);
      CHECK(e.worst_margin > 1e-3);
      CHECK(e.witness.size() == 0);
    }
    CHECK(seen.size() == 4);
  }
}

TEST_CASE("sphere ping-pong: a weak group fails with a witness") {
  SchottkyGroup g = demo_group(1, 0.5);
  PingPongReport r = verify_ping_pong_sphere(g, 2000, 11);
  CHECK_FALSE(r.ok);
  CHECK_FALSE(r.tan4_ok);
  bool witnessed = false;
  for (const auto& e : r.generators) {
    if (e.ok) continue;
    REQUIRE(e.witness.size() == 3);
    const Frame& fr = g.frameset.frames[e.index];
    const Mat& h = e.sigma > 0 ? g.generators[e.index].matrix() : g.generators[e.index].inverse();
    Side target = e.sigma > 0 ? Side::Plus : Side::Minus;
    Side source = e.sigma > 0 ? Side::Minus : Side::Plus;
    CHECK_FALSE(tennis_membership(fr, g.radii[e.index], e.witness, source, true));
    CHECK_FALSE(tennis_membership(fr, g.radii[e.index], h * e.witness, target, false));
    witnessed = true;
  }
  CHECK(witnessed);
}

TEST_CASE("ping-pong reports are seed deterministic") {
  SchottkyGroup g = demo_group(1, 1e-3);
  PingPongReport a = verify_ping_pong_sphere(g, 500, 5), b = verify_ping_pong_sphere(g, 500, 5);
  REQUIRE(a.generators.size() == b.generators.size());
  for (std::size_t k = 0; k < a.generators.size(); ++k)
    CHECK(a.generators[k].worst_margin == b.generators[k].worst_margin);
  CHECK(a.disjoint_sampled == b.disjoint_sampled);
}

TEST_CASE("word enumeration matches brute force") {
  for (int n : {1, 2}) {
    for (int k = 0; k <= 5; ++k) {
      auto all = brute_force_words(n, k);
      std::set<std::string> red, cyc;
      for (const Word& w : all) {
        if (oracle_reduced(w, false)) red.insert(word_to_string(w));
        if (oracle_reduced(w, true)) cyc.insert(word_to_string(w));
      }
      std::set<std::string> got_red, got_cyc;
      for (const Word& w : enumerate_words(n, k, WordMode::Reduced))
        if (static_cast<int>(w.size()) == k) got_red.insert(word_to_string(w));
      for (const Word& w : enumerate_words(n, k, WordMode::CyclicallyReduced))
        if (static_cast<int>(w.size()) == k) got_cyc.insert(word_to_string(w));
      CHECK(got_red == red);
      CHECK(got_cyc == cyc);
    }
  }
  // 1 + 4 + 12 + 36 reduced words of length <= 3 over two generators.
  CHECK(enumerate_words(2, 3, WordMode::Reduced).size() == 53);
}

TEST_CASE("word order and printing") {
  auto w = enumerate_words(2, 2, WordMode::Reduced);
  CHECK(word_to_string(w[0]) == "e");
  CHECK(word_to_string(w[1]) == "g1");
  CHECK(word_to_string(w[2]) == "g1^-1");
  CHECK(word_to_string(w[3]) == "g2");
  CHECK(word_to_string(w[5]) == "g1 g1");
  CHECK(word_to_string(w[6]) == "g1 g2");
  CHECK(is_reduced(Word{{0, 1}, {1, -1}, {0, 1}}));
  CHECK_FALSE(is_reduced(Word{{0, 1}, {0, -1}}));
  CHECK_FALSE(is_cyclically_reduced(Word{{0, 1}, {1, 1}, {0, -1}}));
  CHECK_THROWS_AS(enumerate_words(0, 2, WordMode::Reduced), GeometryError);
}

TEST_CASE("word matrices multiply generators in order") {
  SchottkyGroup g = demo_group(1, 1e-2);
  Word w{{0, 1}, {1, -1}};
  Mat m = g.generators[0].matrix() * g.generators[1].inverse();
  CHECK((word_matrix(g, w) - m).norm() <= 1e-9 * m.norm());
  CHECK(word_matrix(g, {}).isIdentity(0.0));
}

TEST_CASE("product audit of the demo groups") {
  for (int d : {1, 3}) {
    SchottkyGroup g = demo_group(d, d == 1 ? 1e-3 : 1e-4);
    ProductAuditReport r = audit_products(g, 3, true);
    CHECK(r.ok);
    CHECK(r.failures.empty());
    CHECK(r.words == static_cast<int>(enumerate_words(2, 3, WordMode::CyclicallyReduced).size()) - 1);
    CHECK(r.min_separation >= r.frameset_separation / 3.0 - 1e-6);
    CHECK(r.max_strength < 1.0);
    CHECK(r.min_distance_from_identity > 0.1);
    for (const auto& e : r.entries) {
      CHECK(e.pseudohyperbolic);
      CHECK(e.eq_eigenvalue == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("single-letter audit reproduces the generator data") {
  SchottkyGroup g = demo_group(1, 1e-3);
  WordAudit a = audit_word(g, {{0, 1}});
  CHECK(a.ok);
  CHECK(a.strength == doctest::Approx(g.generators[0].strength()).epsilon(1e-6));
  CHECK(a.separation == doctest::Approx(g.frameset.frames[0].separation()).epsilon(1e-6));
  CHECK(a.hausdorff_to_first <= 1e-8);
}

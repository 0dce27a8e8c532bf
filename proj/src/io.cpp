#include "schottky/io.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace schottky {

namespace {

Vec vec_from(const Json& j, int size, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != size)
    throw InputError(std::string(what) + ": expected an array of " + std::to_string(size) +
                     " numbers");
  Vec v(size);
  for (int k = 0; k < size; ++k) {
    if (!j[k].is_number()) throw InputError(std::string(what) + ": non-numeric entry");
    v(k) = j[k].get<double>();
  }
  return v;
}

Mat mat_from(const Json& j, int rows, int cols, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    throw InputError(std::string(what) + ": expected " + std::to_string(rows) + " rows");
  Mat m(rows, cols);
  for (int r = 0; r < rows; ++r) m.row(r) = vec_from(j[r], cols, what).transpose();
  return m;
}

const Json& field(const Json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("group spec is missing \"") + key + "\"");
  return j.at(key);
}

}  // namespace

GroupSpec parse_group_spec(const Json& j) {
  if (!j.is_object()) throw InputError("group spec must be a JSON object");
  GroupSpec s;
  if (!field(j, "d").is_number_integer() || !field(j, "n").is_number_integer())
    throw InputError("\"d\" and \"n\" must be integers");
  s.d = j["d"].get<int>();
  s.n = j["n"].get<int>();
  if (s.d < 1 || s.n < 1) throw InputError("\"d\" and \"n\" must be positive");
  Vec th = vec_from(field(j, "thetas"), 2 * s.n, "thetas");
  s.thetas.assign(th.data(), th.data() + th.size());
  const Json& p = field(j, "pairing");
  if (!p.is_array() || static_cast<int>(p.size()) != s.n)
    throw InputError("pairing: expected n index pairs");
  for (const auto& e : p) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
      throw InputError("pairing: each entry must be a pair of integers");
    s.pairing.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  const Json& g = field(j, "g_less");
  if (!g.is_array() || static_cast<int>(g.size()) != s.n)
    throw InputError("g_less: expected one d x d matrix per generator");
  for (const auto& m : g) s.g_less.push_back(mat_from(m, s.d, s.d, "g_less"));
  if (!field(j, "epsilon").is_number()) throw InputError("\"epsilon\" must be a number");
  s.epsilon = j["epsilon"].get<double>();
  if (!(s.epsilon > 0 && s.epsilon <= std::numbers::pi / 2))
    throw InputError("\"epsilon\" must lie in (0, pi/2]");
  if (j.contains("t")) {
    const Json& t = j["t"];
    if (!t.is_array() || static_cast<int>(t.size()) != s.n)
      throw InputError("t: expected one translation per generator");
    for (const auto& v : t) s.t.push_back(vec_from(v, 2 * s.d + 1, "t"));
  }
  return s;
}

GroupSpec read_group_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
  return parse_group_spec(j);
}

Json to_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(v(k));
  return a;
}

Json to_json(const Mat& m) {
  Json a = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) a.push_back(to_json(Vec(m.row(r).transpose())));
  return a;
}

Json to_json(const GroupSpec& s) {
  Json j;
  j["d"] = s.d;
  j["n"] = s.n;
  j["thetas"] = s.thetas;
  Json p = Json::array();
  for (auto [a, b] : s.pairing) p.push_back({a, b});
  j["pairing"] = p;
  Json g = Json::array();
  for (const Mat& m : s.g_less) g.push_back(to_json(m));
  j["g_less"] = g;
  j["epsilon"] = s.epsilon;
  if (!s.t.empty()) {
    Json t = Json::array();
    for (const Vec& v : s.t) t.push_back(to_json(v));
    j["t"] = t;
  }
  return j;
}

SchottkyGroup build_group(const GroupSpec& spec) {
  return build_group(SpaceContext(spec.d), spec.thetas, spec.pairing, spec.g_less, spec.epsilon);
}

GroupSpec demo_spec(int d, int n, double strength, double epsilon) {
  GroupSpec s;
  s.d = d;
  s.n = n;
  for (int k = 0; k < 2 * n; ++k) s.thetas.push_back(k * std::numbers::pi / n);
  for (int k = 0; k < n; ++k) {
    s.pairing.emplace_back(k, k + n);
    s.g_less.push_back(strength * Mat::Identity(d, d));
  }
  s.epsilon = epsilon;
  return s;
}

Json context_to_json(const SpaceContext& ctx) {
  return Json{{"d", ctx.d()},
              {"gram_Q", to_json(ctx.gram_Q())},
              {"basis_S", to_json(ctx.basis_S())},
              {"basis_T", to_json(ctx.basis_T())},
              {"orientation_S", ctx.orientation_S()},
              {"orientation_T", ctx.orientation_T()}};
}

Json mtis_to_json(const Mtis& V) { return Json{{"f", to_json(V.f())}}; }

Json to_json(const PingPongReport& r) {
  Json j;
  j["verdict"] = "sampled, " + std::to_string(r.samples) + " samples per map";
  j["ok"] = r.ok;
  j["seed"] = r.seed;
  j["tan4_bound_holds"] = r.tan4_ok;
  j["tan4_margins"] = r.tan4_margins;
  j["disjoint_ok"] = r.disjoint_ok;
  j["disjoint_bound"] = r.disjoint_bound;
  j["disjoint_sampled"] = r.disjoint_sampled;
  Json g = Json::array();
  for (const auto& e : r.generators) {
    Json x{{"generator", e.index + 1}, {"sigma", e.sigma}, {"worst_margin", e.worst_margin},
           {"samples", e.samples}, {"ok", e.ok}};
    if (e.witness.size()) x["witness"] = to_json(e.witness);
    g.push_back(x);
  }
  j["maps"] = g;
  return j;
}

namespace {

Json word_json(const WordAudit& a) {
  return Json{{"word", word_to_string(a.word)},
              {"pseudohyperbolic", a.pseudohyperbolic},
              {"eq_eigenvalue", a.eq_eigenvalue},
              {"separation", a.separation},
              {"strength", a.strength},
              {"hausdorff_to_first", a.hausdorff_to_first},
              {"distance_from_identity", a.distance_from_identity},
              {"ok", a.ok},
              {"failure", a.failure}};
}

}  // namespace

Json to_json(const ProductAuditReport& r) {
  Json j;
  j["ok"] = r.ok;
  j["words"] = r.words;
  j["frameset_separation"] = r.frameset_separation;
  j["min_separation"] = r.min_separation;
  j["max_strength"] = r.max_strength;
  j["max_hausdorff_ratio"] = r.max_hausdorff_ratio;
  j["min_distance_from_identity"] = r.min_distance_from_identity;
  Json f = Json::array();
  for (const auto& a : r.failures) f.push_back(word_json(a));
  j["failures"] = f;
  if (!r.entries.empty()) {
    Json e = Json::array();
    for (const auto& a : r.entries) e.push_back(word_json(a));
    j["entries"] = e;
  }
  return j;
}

Json to_json(const InTReport& r) {
  Json j{{"in_T", r.in_T},
         {"sphere_disjoint", r.sphere_disjoint},
         {"sphere_gap", r.sphere_gap},
         {"d_min", r.d_min},
         {"radius", r.radius},
         {"samples", r.samples},
         {"note", r.note}};
  if (r.witness_a.size()) j["witness"] = {to_json(r.witness_a), to_json(r.witness_b)};
  return j;
}

Json to_json(const AngleControlReport& r) {
  return Json{{"ok", r.ok},
              {"draws", r.draws},
              {"max_dev_complement", r.max_dev_complement},
              {"max_dev_sine", r.max_dev_sine}};
}

}  // namespace schottky

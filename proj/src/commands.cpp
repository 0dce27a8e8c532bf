#include "schottky/commands.hpp"

#include "schottky/io.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

namespace schottky::cli {

namespace {

const char* kEvenDimension =
    "d must be odd: for even d the positive wings of two transversal MTIS'es always share a "
    "nonzero vector, so no disjoint wings (and no ping-pong domains) can be built";

// Runs body with the selected sink; maps the library's exceptions to exit codes.
int run(const std::string& path, std::ostream& out, std::ostream& err,
        const std::function<int(std::ostream&)>& body) {
  try {
    if (path.empty()) return body(out);
    std::ofstream f(path);
    if (!f) {
      err << "error: cannot write " << path << "\n";
      return kBadInput;
    }
    return body(f);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const GeometryError& e) {
    err << "error: invalid group: " << e.what() << "\n";
    return kBadInput;
  }
}

GroupSpec load(const std::string& path) {
  GroupSpec s = read_group_spec(path);
  if (s.d % 2 == 0) throw InputError(kEvenDimension);
  return s;
}

std::string num(double x) {
  std::ostringstream o;
  o << std::setprecision(17) << x;
  return o.str();
}

void write_row(std::ostream& os, const Vec& x) {
  for (Eigen::Index k = 0; k < x.size(); ++k) os << ',' << num(x(k));
}

std::string coord_header(int dim) {
  std::string h;
  for (int k = 0; k < dim; ++k) h += ",x" + std::to_string(k);
  return h;
}

std::vector<Vec> translations(const GroupSpec& spec, const SchottkyGroup& G) {
  return spec.t.empty() ? canonical_translations(G) : spec.t;
}

}  // namespace

int cmd_gen(const GenOptions& o, std::ostream& out, std::ostream& err) {
  if (o.d % 2 == 0) {
    err << "error: " << kEvenDimension << "\n";
    return kInconclusive;
  }
  if (o.d < 1 || o.n < 1) {
    err << "error: --d and --n must be positive\n";
    return kBadInput;
  }
  if (o.strength < 0 || o.strength > 1.0 - kRhoMargin) {
    err << "error: --strength must lie in (0, 1 - 1e-4]\n";
    return kBadInput;
  }
  return run(o.out, out, err, [&](std::ostream& os) {
    GroupSpec s = demo_spec(o.d, o.n, 0.5, o.epsilon);
    double strength = o.strength;
    if (strength == 0.0) {
      SchottkyGroup probe = build_group(s);
      double emin = *std::min_element(probe.radii.begin(), probe.radii.end());
      strength = std::pow(std::tan(emin), 4) / 10.0;
    }
    s = demo_spec(o.d, o.n, strength, o.epsilon);
    build_group(s);  // validates the frameset before anything is written
    os << to_json(s).dump(2) << "\n";
    return kPass;
  });
}

int cmd_certify(const CertifyOptions& o, std::ostream& out, std::ostream& err) {
  if (o.samples < 100) {
    err << "error: --samples must be at least 100\n";
    return kBadInput;
  }
  GroupSpec spec;
  try {
    spec = read_group_spec(o.spec);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  }
  if (spec.d % 2 == 0) {
    err << "error: " << kEvenDimension << "\n";
    return kInconclusive;
  }
  return run(o.out, out, err, [&](std::ostream& os) {
    SchottkyGroup G = build_group(spec);
    Json report;
    report["format"] = "schottky-certify v1";
    report["seed"] = o.seed;
    report["samples"] = o.samples;
    report["max_word_length"] = o.max_len;
    report["spec"] = to_json(spec);
    report["frameset_separation"] = G.frameset.separation;
    report["radii"] = G.radii;

    bool inconclusive = false;
    Json gens = Json::array();
    for (int i = 0; i < G.n(); ++i) {
      const auto& g = G.generators[i];
      PseudoDiagnostics dg = is_pseudohyperbolic(G.ctx, g.matrix());
      inconclusive = inconclusive || !dg.conclusive;
      gens.push_back(Json{{"generator", i + 1},
                          {"strength", g.strength()},
                          {"pseudohyperbolic", dg.pseudohyperbolic},
                          {"conclusive", dg.conclusive},
                          {"eq_eigenvalue", dg.eq_eigenvalue},
                          {"lipschitz_constant", g.frame().lipschitz()},
                          {"frame_separation", g.frame().separation()},
                          {"q_drift", q_drift(G.ctx, g.matrix())},
                          {"note", dg.reason}});
    }
    report["generators"] = gens;

    PingPongReport pp = verify_ping_pong_sphere(G, o.samples, o.seed);
    ProductAuditReport audit = audit_products(G, o.max_len);
    InTReport it = in_T(G, translations(spec, G), 1500, o.seed);
    AngleControlReport ac = verify_angle_control(G.ctx, 100, o.seed);
    report["ping_pong"] = to_json(pp);
    report["products"] = to_json(audit);
    report["in_T"] = to_json(it);
    report["angle_control"] = to_json(ac);

    bool pass = pp.ok && audit.ok && it.in_T && ac.ok;
    int code = !pass ? kFail : inconclusive ? kInconclusive : kPass;
    report["verdict"] = code == kPass ? "pass" : code == kFail ? "fail" : "inconclusive";
    os << report.dump(2) << "\n";
    return code;
  });
}

namespace {

std::vector<Vec> read_points(const std::string& path, int dim) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::vector<Vec> pts;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream ls(line);
    std::vector<double> v;
    double x;
    while (ls >> x) v.push_back(x);
    if (!ls.eof() || static_cast<int>(v.size()) != dim)
      throw InputError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(dim) +
                       " numbers");
    pts.push_back(Eigen::Map<Vec>(v.data(), dim));
  }
  return pts;
}

}  // namespace

int cmd_trace(const TraceOptions& o, std::ostream& out, std::ostream& err) {
  if (o.samples < 100) {
    err << "error: --samples must be at least 100\n";
    return kBadInput;
  }
  if (o.max_steps < 0 || (o.points.empty() && o.random <= 0)) {
    err << "error: give --points FILE or --random N, and a nonnegative --max-steps\n";
    return kBadInput;
  }
  GroupSpec spec;
  std::vector<Vec> pts;
  try {
    spec = load(o.spec);
    if (!o.points.empty()) pts = read_points(o.points, 2 * spec.d + 1);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  }
  SchottkyGroup G;
  try {
    G = build_group(spec);
  } catch (const GeometryError& e) {
    err << "error: invalid group: " << e.what() << "\n";
    return kBadInput;
  }
  std::vector<Vec> t = translations(spec, G);
  if (!o.force) {
    PingPongReport pp = verify_ping_pong_sphere(G, o.samples, o.seed);
    InTReport it = in_T(G, t, 1500, o.seed);
    if (!pp.ok || !it.in_T) {
      err << "error: group is not certified (" << (pp.ok ? "" : "sphere ping-pong failed; ")
          << (it.in_T ? "" : "translations not in T") << "); pass --force to trace anyway\n";
      return kPrecondition;
    }
  }
  return run(o.out, out, err, [&](std::ostream& os) {
    AffineDeformation def = build_deformation(G, t);
    const int dim = G.ctx.dim();
    if (pts.empty()) {
      double R = 0.0;
      for (const Vec& v : t) R += v.squaredNorm();
      R = 10.0 * std::max(1.0, std::sqrt(R));
      Rng rng(o.seed);
      for (int k = 0; k < o.random; ++k)
        pts.push_back(rng.unit(dim) * R * std::pow(rng.uniform(), 1.0 / dim));
    }
    os << "# schottky-trace v1 d=" << spec.d << " n=" << spec.n << " seed=" << o.seed
       << " max_steps=" << o.max_steps << "\n";
    os << "point,step,i,sigma" << coord_header(dim) << ",a_k,delta_k,status\n";
    int landed = 0;
    double floor = HUGE_VAL;
    for (std::size_t p = 0; p < pts.size(); ++p) {
      TileTrace tr = trace_point(def, pts[p], o.max_steps);
      if (tr.status == TraceStatus::Landed) ++landed;
      const std::string status = to_string(tr.status);
      for (std::size_t k = 0; k < tr.letters.size(); ++k) {
        os << p << ',' << k + 1 << ',' << tr.letters[k].i + 1 << ',' << tr.letters[k].sigma;
        write_row(os, tr.points[k]);
        const GapEntry& g = tr.gaps[k];
        os << ',' << num(g.a) << ',' << (k > 0 ? num(g.delta) : "") << ',' << status << "\n";
        if (g.cyclic) floor = std::min(floor, g.delta);
      }
      os << p << ',' << tr.letters.size() << ",,";
      write_row(os, tr.points.back());
      os << ",,," << status << "\n";
    }
    std::ostringstream summary;
    summary << "points=" << pts.size() << " landed=" << landed
            << " landing_rate=" << num(pts.empty() ? 0.0 : double(landed) / pts.size())
            << " delta_floor=" << (std::isfinite(floor) ? num(floor) : std::string("none"));
    os << "# summary " << summary.str() << "\n";
    if (!o.out.empty()) err << summary.str() << "\n";
    return kPass;
  });
}

int cmd_export(const ExportOptions& o, std::ostream& out, std::ostream& err) {
  if (o.resolution < 1) {
    err << "error: --resolution must be at least 1\n";
    return kBadInput;
  }
  if (o.what != "wings" && o.what != "domains" && o.what != "tiles") {
    err << "error: --what must be wings, domains or tiles\n";
    return kBadInput;
  }
  GroupSpec spec;
  try {
    spec = load(o.spec);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  }
  return run(o.out, out, err, [&](std::ostream& os) {
    SchottkyGroup G = build_group(spec);
    const SpaceContext& ctx = G.ctx;
    const int dim = ctx.dim(), d = ctx.d(), res = o.resolution;
    os << "# schottky-export v1 what=" << o.what << " d=" << d << " n=" << spec.n
       << " resolution=" << res << "\n";
    os << "set,label" << coord_header(dim) << "\n";

    if (o.what == "wings") {
      Rng rng(17);
      for (std::size_t c = 0; c < G.frameset.components.size(); ++c) {
        Wing w = positive_wing(ctx, G.frameset.components[c]);
        const Mat& B = w.base.basis();
        int dirs = d == 1 ? 1 : res;
        for (int b = 0; b < dirs; ++b) {
          Vec v = d == 1 ? Vec(B.col(0)) : Vec(B * rng.unit(d));
          for (int a = 0; a <= res; ++a) {
            double phi = std::numbers::pi * a / res;
            for (int r = 1; r <= res; ++r) {
              os << c << ",wing " << c + 1;
              write_row(os, double(r) / res * (std::cos(phi) * v + std::sin(phi) * w.apex));
              os << "\n";
            }
          }
        }
      }
      return kPass;
    }

    AffineDeformation def = build_deformation(G, translations(spec, G));
    // Boundary directions of the minus (or plus) sphere domain of generator i.
    auto boundary_cloud = [&](int i, int sigma) {
      Rng rng(29 + 2 * i + (sigma > 0));
      auto dirs = sample_sphere_domain(G, i, sigma > 0 ? Side::Plus : Side::Minus, 2 * res * res,
                                       rng);
      std::vector<Vec> pts;
      Vec apex = def.apex(i, sigma);
      for (std::size_t k = 0; k < dirs.size(); k += 2)
        for (int r = 1; r <= res; ++r) pts.push_back(apex + 10.0 * r / res * dirs[k]);
      return pts;
    };
    if (o.what == "domains") {
      int set = 0;
      for (int i = 0; i < G.n(); ++i)
        for (int sigma : {-1, 1}) {
          for (const Vec& x : boundary_cloud(i, sigma)) {
            os << set << ",H_" << i + 1 << (sigma > 0 ? "^+" : "^-");
            write_row(os, x);
            os << "\n";
          }
          ++set;
        }
      return kPass;
    }
    // Faces of the first-generation tiles gamma_i^sigma(H0): images of the
    // boundaries of the tilde domains, with d(H~_j^+) = gamma_j(d(H_j^-)).
    int set = 0;
    for (int i = 0; i < G.n(); ++i)
      for (int sigma : {1, -1}) {
        AffineMap gi = def.gamma(i, sigma);
        for (int j = 0; j < G.n(); ++j)
          for (int tau : {-1, 1}) {
            std::string label = "tile g" + std::to_string(i + 1) + (sigma > 0 ? "" : "^-1") +
                                " face " + std::to_string(j + 1) + (tau > 0 ? "+" : "-");
            for (const Vec& y : boundary_cloud(j, -1)) {
              Vec face = tau > 0 ? def.gamma(j, 1)(y) : y;
              os << set << ',' << label;
              write_row(os, gi(face));
              os << "\n";
            }
            ++set;
          }
      }
    return kPass;
  });
}

}  // namespace schottky::cli

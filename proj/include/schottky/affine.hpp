#pragma once

#include "schottky/schottky.hpp"

#include <string>
#include <vector>

namespace schottky {

struct AffineMap {
  Mat linear;
  Vec translation;
  Vec operator()(const Vec& x) const { return linear * x + translation; }
};

// Unique u with (Id + g) u = t.
Vec solve_center(const Mat& g, const Vec& t);

struct AffineDeformation {
  SchottkyGroup group;
  std::vector<Vec> t;
  std::vector<Vec> u;
  AffineMap gamma(int i, int sigma) const;
  // Apex of the cone domain of generator i on side sigma: sigma * u_i.
  Vec apex(int i, int sigma) const { return sigma > 0 ? u[i] : Vec(-u[i]); }
};

AffineDeformation build_deformation(const SchottkyGroup& group, const std::vector<Vec>& t);

// Translations 2 e_{i,=}, for which u_i = e_{i,=}.
std::vector<Vec> canonical_translations(const SchottkyGroup& group);

// Open cone excludes its apex, closed cone contains it.
bool cone_membership(const AffineDeformation& def, int i, int sigma, const Vec& x, bool closed);

struct InTReport {
  bool in_T = false;
  bool sphere_disjoint = false;  // angular separation of the closed sphere domains
  double sphere_gap = 0.0;
  double d_min = 0.0;            // sampled minimum distance between the closed cones
  double radius = 0.0;           // ball in which the compact parts were sampled
  int samples = 0;
  Vec witness_a, witness_b;      // closest pair (or a common point)
  std::string note;
};
InTReport in_T(const SchottkyGroup& group, const std::vector<Vec>& t, int samples = 1500,
               std::uint64_t seed = 7);

enum class Zone { H0, Tilde, Boundary };
struct PointClass {
  Zone zone = Zone::H0;
  int i = -1;
  int sigma = 0;
  int claimants = 0;
};
// Boundary verdict when x lies within 1e-7 (1 + |x|) of a domain boundary.
PointClass classify_point(const AffineDeformation& def, const Vec& x);

enum class TraceStatus { Landed, BudgetExhausted, Diverged, Boundary };
std::string to_string(TraceStatus s);

struct GapEntry {
  double a = 0.0;
  double delta = 0.0;
  bool cyclic = false;  // prefix word cyclically reduced
};

struct TileTrace {
  Vec x0;
  Word letters;
  std::vector<Vec> points;  // gamma^{-[k]}(x0), k = 0..
  TraceStatus status = TraceStatus::BudgetExhausted;
  int boundary_step = -1;
  std::vector<GapEntry> gaps;
};

TileTrace trace_point(const AffineDeformation& def, const Vec& x0, int max_steps);

struct GapOptions {
  int rays = 48;
  int bisection = 40;
};
// Heights a_k of the nested domains gamma^{[k]}(Htilde_{i_{k+1}}) inside x0 + S,
// measured along the attracting half-line of the first letter.
std::vector<GapEntry> gap_sequence(const AffineDeformation& def, const TileTrace& trace,
                                   const GapOptions& opt = {});
// Unit vector of S spanning S intersected with the attracting wing of (i, sigma).
Vec attracting_ray(const AffineDeformation& def, const Letter& first);

Subspace q_orthogonal_complement(const SpaceContext& ctx, const Mat& V);

struct AngleControlReport {
  bool ok = false;
  int draws = 0;
  double max_dev_complement = 0.0;  // |alpha(V^Q, W^Q) - alpha(V, W)|
  double max_dev_sine = 0.0;        // |sin alpha(x, V' n S) - sqrt2 sin alpha(x, V')|
};
AngleControlReport verify_angle_control(const SpaceContext& ctx, int samples, std::uint64_t seed);

struct QuotientReport {
  int dimension = 0;
  int handles = 0;
  std::vector<std::string> identifications;
};
QuotientReport quotient_report(const AffineDeformation& def, const PingPongReport& sphere,
                               const InTReport& t_report);

}  // namespace schottky

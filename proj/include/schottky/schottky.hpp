#pragma once

#include "schottky/exterior.hpp"

#include <string>
#include <utility>
#include <vector>

namespace schottky {

struct Frameset {
  std::vector<Mtis> components;
  std::vector<std::pair<int, int>> pairing;  // (less, more) indices into components
  std::vector<Frame> frames;
  double separation = 0.0;  // min wing distance over all pairs of components
};

Frameset build_frameset(const SpaceContext& ctx, const std::vector<Mtis>& components,
                        const std::vector<std::pair<int, int>>& pairing);

enum class Side { Minus, Plus };

// Angle, in the frame's local metric, from x to the wing V_<^L (Minus) or V_>^L (Plus).
double angle_to_wing_local(const Frame& frame, const Vec& x, Side side);
// Same, from the N_V-components: |x_<|, signed x_=, |x_>|.
double angle_to_wing_local(double less_norm, double eq, double more_norm, Side side);

// Two-branch ratio test against tan(eps) in N_V components.
bool tennis_membership(const Frame& frame, double eps, const Vec& x, Side side, bool closed);
bool tennis_membership(double less_norm, double eq, double more_norm, double eps, Side side,
                       bool closed);

struct Tan4Check {
  bool ok;
  double margin;  // tan(eps)^4 - s
};
Tan4Check check_tan4_bound(double strength, double eps);
inline Tan4Check check_tan4_bound(const PseudoHyperbolicMap& g, double eps) {
  return check_tan4_bound(g.strength(), eps);
}

std::vector<double> choose_radii(const Frameset& fs, double eps);

struct SchottkyGroup {
  SpaceContext ctx{1};
  Frameset frameset;
  std::vector<PseudoHyperbolicMap> generators;
  std::vector<double> radii;
  double epsilon = 0.0;
  double strength() const;
  int n() const { return static_cast<int>(generators.size()); }
};

SchottkyGroup build_group(const SpaceContext& ctx, const std::vector<double>& thetas,
                          const std::vector<std::pair<int, int>>& pairing,
                          const std::vector<Mat>& g_less, double epsilon);

struct PingPongGeneratorReport {
  int index;
  int sigma;
  double worst_margin;
  int samples;
  bool ok;
  Vec witness;  // source point whose image escaped the target domain
};

struct PingPongReport {
  bool ok = false;
  bool tan4_ok = false;
  bool disjoint_ok = false;
  double disjoint_bound = 0.0;    // analytic lower bound on the angular gap of the closures
  double disjoint_sampled = 0.0;  // sampled minimum angular gap (upper estimate)
  std::vector<PingPongGeneratorReport> generators;
  std::vector<double> tan4_margins;
  int samples = 0;
  std::uint64_t seed = 0;
};

PingPongReport verify_ping_pong_sphere(const SchottkyGroup& group, int samples,
                                       std::uint64_t seed);

// Points of the closed sphere domain of generator i on the given side (unit N0),
// half of them on or near its boundary.
std::vector<Vec> sample_sphere_domain(const SchottkyGroup& group, int i, Side side, int count,
                                      Rng& rng);

struct Letter {
  int i;      // generator index, 0-based
  int sigma;  // +1 or -1
  bool operator==(const Letter&) const = default;
};
using Word = std::vector<Letter>;

bool is_reduced(const Word& w);
bool is_cyclically_reduced(const Word& w);
std::string word_to_string(const Word& w);

enum class WordMode { Reduced, CyclicallyReduced };
// Lexicographic by length, then letters ordered (1,+) < (1,-) < (2,+) < ...
std::vector<Word> enumerate_words(int n, int max_len, WordMode mode);

struct WordAudit {
  Word word;
  bool pseudohyperbolic = false;
  double eq_eigenvalue = 0.0;
  double separation = 0.0;
  double strength = 0.0;
  double hausdorff_to_first = 0.0;
  double distance_from_identity = 0.0;
  bool ok = false;
  std::string failure;
};

struct ProductAuditReport {
  bool ok = false;
  double frameset_separation = 0.0;
  double min_separation = 0.0;
  double max_strength = 0.0;
  double max_hausdorff_ratio = 0.0;
  double min_distance_from_identity = 0.0;
  int words = 0;
  std::vector<WordAudit> entries;
  std::vector<WordAudit> failures;
};

// Words are evaluated in extended precision: their norms grow like s^-length.
ProductAuditReport audit_products(const SchottkyGroup& group, int max_len,
                                  bool keep_entries = false);
WordAudit audit_word(const SchottkyGroup& group, const Word& w);

// Matrix of a word in double precision (product of generator matrices).
Mat word_matrix(const SchottkyGroup& group, const Word& w);

}  // namespace schottky

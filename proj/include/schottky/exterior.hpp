#pragma once

#include "schottky/pseudohyperbolic.hpp"

#include <optional>
#include <string>
#include <vector>

namespace schottky {

using Subset = std::vector<int>;

// Lexicographically ordered k-subsets of {0, ..., n-1}.
std::vector<Subset> ext_subsets(int n, int k);

// Compound matrix: entry (I, J) is the minor of g on rows I, columns J.
Mat compound(const Mat& g, int k);
inline Mat ext_operator(const SpaceContext& ctx, const Mat& g) { return compound(g, ctx.d()); }
// Gram of the induced form on the k-th exterior power (compound of the Gram).
Mat ext_form(const Form& form, int k);
// Coordinates of the wedge of the columns of B in the lexicographic wedge basis.
Vec wedge(const Mat& B);

struct ProximalData {
  bool proximal = false;
  double lambda = 0.0;          // signed top eigenvalue
  double second_modulus = 0.0;  // largest modulus on V_u
  Vec v_s;                      // spans V_s
  Vec w_u;                      // V_u is the kernel of the functional x -> w_u . x
  Mat V_u;                      // orthonormal (for the form) basis of V_u
  double strength = 0.0;        // ||f|_{V_u}|| / |lambda|
  int iterations = 0;
  std::string note;
};

// Top eigenpair by power iteration, invariant complement from the left top
// eigenvector, gap check on the full spectrum.
ProximalData analyze_proximal(const Mat& f, const Form& form);

enum class Region { AwayFromRepeller, NearAttractor };
// Sampled supremum of the projective difference quotient of f over the region;
// a lower bound on the true supremum.
double lipschitz_on_set(const Mat& f, const Form& form, Region region, double zeta, int samples,
                        std::uint64_t seed);

struct ProximalAuditEntry {
  int i, sigma, i2, sigma2;
  double angle;
};
struct ProximalSystemAudit {
  bool ok = false;
  double separation = 0.0;  // eta(F)
  double strength = 0.0;    // s-hat(F)
  std::vector<ProximalAuditEntry> table;
  std::string error;
};
ProximalSystemAudit audit_proximal_system(const std::vector<Mat>& maps, const Form& form);

struct CorrespondenceReport {
  bool proximal = false;
  double angle_vs_wedge = 0.0;     // angle(V_s, wedge V_>(g)) in the wedge N0 metric
  double strength_local = 0.0;     // s-hat of the compound in the wedge N_V metric
  double inv_norm_more = 0.0;      // ||g_>^{-1}||
  double lambda_abs = 0.0;
  double det_more_abs = 0.0;
  struct Sandwich {
    double alpha1, alpha2, bound;
    bool holds;
  };
  std::vector<Sandwich> sandwich;
};
// Sandwich pairs: subspaces of dimension d (columns) to compare in N0.
CorrespondenceReport check_correspondence(const PseudoHyperbolicMap& g,
                                          const std::vector<std::pair<Mat, Mat>>& pairs = {});

}  // namespace schottky

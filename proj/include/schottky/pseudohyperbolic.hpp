#pragma once

#include "schottky/mtis.hpp"

#include <string>
#include <vector>

namespace schottky {

// Construction requires rho(g_<) <= 1 - kRhoMargin.
inline constexpr double kRhoMargin = 1e-4;

class PseudoHyperbolicMap {
 public:
  const Frame& frame() const { return frame_; }
  // Dynamical part in the basis Frame::V_less().basis(); g_> in V_more().basis().
  const Mat& g_less() const { return g_less_; }
  const Mat& g_more() const { return g_more_; }
  const Mat& matrix() const { return matrix_; }
  const Mat& inverse() const { return inverse_; }
  double strength() const { return strength_; }
  double rho_less() const { return rho_less_; }

 private:
  friend PseudoHyperbolicMap build_pseudohyperbolic(const Frame& frame, const Mat& g_less);
  Frame frame_;
  Mat g_less_, g_more_, matrix_, inverse_;
  double strength_ = 0.0, rho_less_ = 0.0;
};

// g_< (+) Id on V_= (+) g_>, with g_> the Q-adjoint of g_<^{-1} across the
// pairing V_< x V_> -> R.
PseudoHyperbolicMap build_pseudohyperbolic(const Frame& frame, const Mat& g_less);

// g_> from g_< through the Gram pairing M = B_<^T Q B_>.
Mat dual_block(const Frame& frame, const Mat& g_less);
// Restriction of g to V_< in the frame's basis of V_<.
Mat dynamical_part(const Frame& frame, const Mat& g);

struct SpectralSplit {
  bool conclusive = true;
  std::string note;
  Subspace less, eq, more;  // N0-orthonormal bases
  std::vector<double> moduli_less, moduli_eq, moduli_more;
};

// Invariant subspaces of g by eigenvalue modulus (< 1, = 1, > 1) with band kBand;
// moduli falling just outside the band are reported inconclusive.
SpectralSplit spectral_split(const SpaceContext& ctx, const Mat& g);

struct PseudoDiagnostics {
  bool pseudohyperbolic = false;
  bool conclusive = true;
  int dim_eq = 0;
  double eq_eigenvalue = 0.0;
  std::string reason;
};
PseudoDiagnostics is_pseudohyperbolic(const SpaceContext& ctx, const Mat& g);

double contraction_strength(const PseudoHyperbolicMap& g);
// max(||g_<||, ||g_>^{-1}||) in N0 for a map with the given invariant splitting.
double contraction_strength(const SpaceContext& ctx, const Mat& g, const Mat& V_less,
                            const Mat& V_more);

// Relative Q-drift ||g^T Q g - Q|| / max(1, ||g||^2).
double q_drift(const SpaceContext& ctx, const Mat& g);
// One Newton step towards O(Q) on g^T Q g = Q.
Mat reorthogonalize(const SpaceContext& ctx, const Mat& g);
Mat compose(const SpaceContext& ctx, const Mat& g1, const Mat& g2);
// Inverse of an element of O(Q): Q^{-1} g^T Q.
Mat invert(const SpaceContext& ctx, const Mat& g);

}  // namespace schottky

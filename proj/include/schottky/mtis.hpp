#pragma once

#include "schottky/core_geometry.hpp"

#include <vector>

namespace schottky {

// Maximal totally isotropic subspace V_f = {t + f(t)}, stored through the
// orthogonal map f: T -> S in context coordinates ((d+1) x d, f^T f = Id).
class Mtis {
 public:
  const Mat& f() const { return f_; }
  // Ambient N0-orthonormal basis (t_j + f t_j) / sqrt(2), t_j running over basis_T.
  const Mat& basis() const { return basis_; }
  int d() const { return static_cast<int>(f_.cols()); }

 private:
  friend Mtis mtis_from_map(const SpaceContext& ctx, const Mat& f);
  Mat f_, basis_;
};

Mtis mtis_from_map(const SpaceContext& ctx, const Mat& f);
Mtis map_from_mtis(const SpaceContext& ctx, const Mat& V);

struct Transversality {
  bool transversal;
  double margin;  // smallest singular value of f1 - f2
};
Transversality is_transversal(const Mtis& a, const Mtis& b);

// Block-diagonal plane rotations of R^{d+1} (d odd) by theta.
Mat rotation_blocks(int r, double theta);
// R(theta_k) composed with the coordinate inclusion R^d -> R^{d+1}, one MTIS per angle.
std::vector<Mtis> generate_transversal_family(const SpaceContext& ctx,
                                              const std::vector<double>& thetas);

struct Wing {
  Mtis base;
  Vec apex;  // unit vector of S orthogonal to pi_S(V), oriented by the direct-basis rule
};

Wing positive_wing(const SpaceContext& ctx, const Mtis& V);
bool wing_contains(const SpaceContext& ctx, const Wing& w, const Vec& x);

// Spherical distance, in `form`, between the projections of two wings,
// together with a pair of unit vectors realizing it.
struct WingDistance {
  double angle;
  Vec a, b;
};
WingDistance wing_distance(const Form& form, const Wing& w1, const Wing& w2);

struct WingIntersection {
  bool trivial;
  double separation;  // N0 angle between the wings
  Vec witness;        // common nonzero vector when not trivial
  double residual;
};
WingIntersection wings_intersection_check(const SpaceContext& ctx, const Mtis& V1, const Mtis& V2);

struct Components {
  Vec less;
  double eq;
  Vec more;
};

class Frame {
 public:
  const SpaceContext& ctx() const { return ctx_; }
  const Mtis& V_less() const { return less_; }
  const Mtis& V_more() const { return more_; }
  const Vec& e_eq() const { return e_eq_; }
  const Wing& wing_less() const { return wing_less_; }
  const Wing& wing_more() const { return wing_more_; }
  // Columns: basis of V_<, e_=, basis of V_>; orthonormal for the local form N_V.
  const Mat& basis() const { return P_; }
  const Mat& basis_inverse() const { return Pinv_; }
  const Mat& gram_local() const { return gram_NV_; }
  Form local_form() const { return Form::local(gram_NV_); }
  Mat V_leq() const;
  Mat V_geq() const;
  double separation() const { return separation_; }
  double lipschitz() const { return lipschitz_; }
  Components components(const Vec& x) const;

 private:
  friend Frame build_frame(const SpaceContext& ctx, const Mtis& less, const Mtis& more);
  SpaceContext ctx_{1};
  Mtis less_, more_;
  Wing wing_less_, wing_more_;
  Vec e_eq_;
  Mat P_, Pinv_, gram_NV_;
  double separation_ = 0.0, lipschitz_ = 1.0;
};

Frame build_frame(const SpaceContext& ctx, const Mtis& less, const Mtis& more);
double frame_separation(const Frame& frame);
double lipschitz_constant_NV(const Frame& frame);

}  // namespace schottky

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace schottky {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Relative tolerance for rank, orthonormality and isotropy tests.
inline constexpr double kTol = 1e-8;
// Band around modulus 1 used by the spectral trichotomy.
inline constexpr double kBand = 1e-6;

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Seeded source for every sampled estimator; Gaussian draws normalized onto
// spheres give rotation-invariant coverage.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double normal() { return normal_(eng_); }
  double uniform() { return uniform_(eng_); }
  double uniform(double a, double b) { return a + (b - a) * uniform_(eng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  Vec gaussian(int n);
  Vec unit(int n);
  Mat gaussian(int rows, int cols);
  std::uint64_t next() { return eng_(); }

 private:
  std::mt19937_64 eng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

// R^{d+1,d}: ambient coordinates, the splitting S + T and the forms Q, N0.
// basis_S (resp. basis_T) holds Q-orthonormal columns spanning S (resp. T,
// where Q is negative definite).
class SpaceContext {
 public:
  explicit SpaceContext(int d);
  static SpaceContext from_bases(const Mat& gram_Q, const Mat& basis_S, const Mat& basis_T,
                                 int orientation_S = 1, int orientation_T = 1);

  int d() const { return d_; }
  int dim() const { return 2 * d_ + 1; }
  bool odd() const { return d_ % 2 == 1; }
  const Mat& gram_Q() const { return gram_Q_; }
  const Mat& gram_N0() const { return gram_N0_; }
  const Mat& basis_S() const { return basis_S_; }
  const Mat& basis_T() const { return basis_T_; }
  int orientation_S() const { return orient_S_; }
  int orientation_T() const { return orient_T_; }
  bool is_standard() const { return standard_; }

  // Coordinates of pi_S(x), pi_T(x) in basis_S, basis_T.
  Vec coords_S(const Vec& x) const;
  Vec coords_T(const Vec& x) const;
  // Id_S (+) -Id_T, an N0-isometry exchanging N0- and Q-orthogonality.
  const Mat& varsigma() const { return varsigma_; }

  void check_vector(const Vec& x) const;

 private:
  SpaceContext() = default;
  void finish();

  int d_ = 1;
  Mat gram_Q_, gram_N0_, basis_S_, basis_T_, coords_, varsigma_;
  int orient_S_ = 1, orient_T_ = 1;
  bool standard_ = true;
};

class Form {
 public:
  enum class Kind { Q, N0, NV, Custom };

  static Form q(const SpaceContext& ctx) { return Form(Kind::Q, ctx.gram_Q()); }
  static Form n0(const SpaceContext& ctx) { return Form(Kind::N0, ctx.gram_N0()); }
  static Form custom(const Mat& gram) { return Form(Kind::Custom, gram); }
  static Form local(const Mat& gram) { return Form(Kind::NV, gram); }

  Kind kind() const { return kind_; }
  const Mat& gram() const { return gram_; }
  bool positive() const { return positive_; }
  // Upper factor R with gram = R^T R; throws for Q or indefinite forms.
  const Mat& factor() const;

  double dot(const Vec& x, const Vec& y) const { return x.dot(gram_ * y); }
  double norm(const Vec& x) const;

 private:
  Form(Kind k, const Mat& g);
  Kind kind_;
  Mat gram_;
  Mat factor_;
  bool positive_ = false;
};

struct Subspace {
  Mat basis;  // columns orthonormal for the form the subspace was built with
  int dim() const { return static_cast<int>(basis.cols()); }
};

double eval_form(const SpaceContext& ctx, const Form& form, const Vec& x, const Vec& y);
std::pair<Vec, Vec> split_ST(const SpaceContext& ctx, const Vec& x);

// Orthonormal basis (for `form`) of the column span of A; rank by relative tolerance.
Subspace orthonormalize(const Form& form, const Mat& A, double tol = kTol);

double angle(const Form& form, const Vec& x, const Vec& y, bool projective = false);
// Ascending principal angles between the spans of A and B.
Vec principal_angles(const Form& form, const Mat& A, const Mat& B);
double subspace_min_angle(const Form& form, const Mat& A, const Mat& B);
double subspace_hausdorff_angle(const Form& form, const Mat& A, const Mat& B);
// Angle between x and the span of B (projective, in [0, pi/2]).
double angle_to_subspace(const Form& form, const Vec& x, const Mat& B);

// Sampled infimum of angular distance between two finite point sets: an upper
// bound on the true infimum between the sets they were drawn from.
double set_min_angle(const Form& form, const std::vector<Vec>& P, const std::vector<Vec>& Q);

// Null space of the functional rows of M (columns of the result span ker M).
Mat null_space(const Mat& M, double tol = kTol);

}  // namespace schottky

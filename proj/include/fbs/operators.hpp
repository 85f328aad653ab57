#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>

#include "fbs/errors.hpp"

namespace fbs {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

bool is_finite(const Vector& v);
// Throws InputError when an argument vector carries NaN/Inf.
void require_finite_input(const Vector& v, const char* what);
// Throws OperatorEvaluationError when an oracle produced NaN/Inf.
void require_finite_output(const Vector& v, const char* what);

// -------------------------------------------------------------------------
// Closed convex sets with closed-form projections.
// -------------------------------------------------------------------------
class ConvexSetSpec {
 public:
  enum class Kind { Box, Ball, Halfspace, AffineSubspace, WholeSpace };

  static ConvexSetSpec box(Vector lower, Vector upper);
  static ConvexSetSpec ball(Vector center, double radius);
  // { x : <normal, x> <= offset }
  static ConvexSetSpec halfspace(Vector normal, double offset);
  // { x : equations * x = rhs }; must be consistent (nonempty).
  static ConvexSetSpec affine_subspace(Matrix equations, Vector rhs);
  static ConvexSetSpec whole_space(Eigen::Index dim = 0);

  Kind kind() const { return kind_; }
  // 0 means dimension-agnostic (whole space with unspecified dim).
  Eigen::Index dim() const { return dim_; }
  bool contains(const Vector& x, double tol = 1e-12) const;

  const Vector& box_lower() const { return vec_a_; }
  const Vector& box_upper() const { return vec_b_; }
  const Vector& ball_center() const { return vec_a_; }
  double ball_radius() const { return scalar_; }
  const Vector& halfspace_normal() const { return vec_a_; }
  double halfspace_offset() const { return scalar_; }
  const Matrix& subspace_equations() const { return mat_; }
  const Vector& subspace_rhs() const { return vec_a_; }

  friend Vector project(const ConvexSetSpec& set, const Vector& y);

 private:
  ConvexSetSpec() = default;

  Kind kind_ = Kind::WholeSpace;
  Eigen::Index dim_ = 0;
  Vector vec_a_, vec_b_;
  double scalar_ = 0.0;
  Matrix mat_;      // affine subspace equations
  Matrix pinv_;     // cached pseudo-inverse of equations
};

// Euclidean projection onto the set; unique nearest point.
Vector project(const ConvexSetSpec& set, const Vector& y);

// -------------------------------------------------------------------------
// Functions with closed-form proximity operators.
// -------------------------------------------------------------------------
class FunctionSpec {
 public:
  enum class Kind { Zero, L1Norm, Quadratic, Indicator, Affine };

  static FunctionSpec zero();
  static FunctionSpec l1_norm(double weight);
  // f(x) = 0.5 x'Qx - b'x. Q is symmetrized on ingestion.
  static FunctionSpec quadratic(Matrix Q, Vector b);
  static FunctionSpec indicator(ConvexSetSpec set);
  // f(x) = <c, x>
  static FunctionSpec affine(Vector c);

  Kind kind() const { return kind_; }
  Eigen::Index dim() const { return dim_; }

  // Function value; +inf outside an indicator's set.
  double value(const Vector& x) const;
  bool differentiable() const;
  Vector gradient(const Vector& x) const;

  double l1_weight() const { return weight_; }
  const Matrix& quadratic_matrix() const { return Q_; }
  const Vector& quadratic_offset() const { return b_; }
  const ConvexSetSpec& indicator_set() const { return *set_; }
  const Vector& affine_slope() const { return c_; }

  friend Vector prox(const FunctionSpec& f, double lambda, const Vector& y);

 private:
  FunctionSpec() = default;

  Kind kind_ = Kind::Zero;
  Eigen::Index dim_ = 0;
  double weight_ = 0.0;
  Matrix Q_;
  Vector b_, c_;
  std::optional<ConvexSetSpec> set_;
  // Eigendecomposition of the symmetrized Q, cached for the prox solve.
  Vector q_eigvals_;
  Matrix q_eigvecs_;
};

// prox_{lambda f}(y) = argmin_z f(z) + ||z - y||^2 / (2 lambda).
Vector prox(const FunctionSpec& f, double lambda, const Vector& y);

// -------------------------------------------------------------------------
// Operator moduli.
// -------------------------------------------------------------------------
struct Moduli {
  double mu = 0.0;         // monotonicity modulus (may be negative)
  double lipschitz = 0.0;  // Lipschitz constant
  bool exact = false;      // closed form vs sampled estimate
};

// Closed form for a linear operator x -> Mx:
// mu = smallest eigenvalue of (M + M')/2, L = largest singular value of M.
Moduli moduli_of(const Matrix& M);

// Sampled estimates over random pairs in [-radius, radius]^dim. The returned
// mu is an upper estimate of the true modulus and lipschitz a lower estimate
// of the true constant; both are flagged exact = false.
Moduli estimate_moduli(const std::function<Vector(const Vector&)>& op,
                       Eigen::Index dim, int sample_pairs, std::uint64_t seed,
                       double radius = 10.0);

// -------------------------------------------------------------------------
// The set-valued side A, represented by its resolvent oracle.
// -------------------------------------------------------------------------
class MaximalOperatorSpec {
 public:
  using ResolventFn = std::function<Vector(double lambda, const Vector& y)>;

  MaximalOperatorSpec(ResolventFn oracle, double mu_A, Eigen::Index dim = 0);

  // A = 0 (resolvent is the identity).
  static MaximalOperatorSpec zero();
  // A = kappa * Id; resolvent y / (1 + lambda kappa). kappa may be negative.
  static MaximalOperatorSpec scaled_identity(double kappa);
  // A(x) = Mx; resolvent solves (I + lambda M) z = y.
  static MaximalOperatorSpec linear(Matrix M);
  // A = subdifferential of f; resolvent is prox_{lambda f}.
  static MaximalOperatorSpec subdifferential(FunctionSpec f);
  // A = normal cone of a set; resolvent is the projection.
  static MaximalOperatorSpec normal_cone(ConvexSetSpec set);

  double mu() const { return mu_A_; }
  Eigen::Index dim() const { return dim_; }
  const std::optional<FunctionSpec>& source_function() const {
    return source_function_;
  }
  const std::optional<ConvexSetSpec>& source_set() const { return source_set_; }

  friend Vector resolvent(const MaximalOperatorSpec& A, double lambda,
                          const Vector& y);

 private:
  ResolventFn oracle_;
  double mu_A_ = 0.0;
  Eigen::Index dim_ = 0;
  std::optional<FunctionSpec> source_function_;
  std::optional<ConvexSetSpec> source_set_;
};

// J_{lambda A}(y). Requires lambda > 0 and 1 + lambda mu_A > 0.
Vector resolvent(const MaximalOperatorSpec& A, double lambda, const Vector& y);

// -------------------------------------------------------------------------
// The single-valued side B with declared moduli.
// -------------------------------------------------------------------------
class ForwardOperatorSpec {
 public:
  using EvalFn = std::function<Vector(const Vector&)>;

  // Declared moduli are trusted statements: mu_B a lower bound on the
  // monotonicity modulus, lipschitz_L an upper bound on the Lipschitz
  // constant. mu_B > lipschitz_L is rejected (Cauchy-Schwarz).
  ForwardOperatorSpec(EvalFn eval, double mu_B, double lipschitz_L,
                      std::optional<double> cocoercivity_beta = std::nullopt,
                      Eigen::Index dim = 0);

  static ForwardOperatorSpec zero();
  static ForwardOperatorSpec identity();
  // B(x) = Mx + offset with tight moduli from M.
  static ForwardOperatorSpec affine(Matrix M, Vector offset);
  // B = gradient of a smooth FunctionSpec (quadratic/affine/zero).
  static ForwardOperatorSpec gradient(const FunctionSpec& f);

  // Copy with re-declared moduli (e.g. a loose lower modulus).
  ForwardOperatorSpec with_moduli(
      double mu_B, double lipschitz_L,
      std::optional<double> cocoercivity_beta = std::nullopt) const;

  double mu() const { return mu_B_; }
  double lipschitz() const { return lipschitz_L_; }
  std::optional<double> cocoercivity_beta() const { return beta_; }
  Eigen::Index dim() const { return dim_; }

  friend Vector evaluate_forward(const ForwardOperatorSpec& B, const Vector& x);

 private:
  EvalFn eval_;
  double mu_B_ = 0.0;
  double lipschitz_L_ = 0.0;
  std::optional<double> beta_;
  Eigen::Index dim_ = 0;
};

// B(x); output checked finite.
Vector evaluate_forward(const ForwardOperatorSpec& B, const Vector& x);

}  // namespace fbs

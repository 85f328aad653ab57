#include "fbs/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <sstream>

namespace fbs {

namespace {

void check_dim(Eigen::Index spec_dim, const Vector& v, const char* what) {
  if (spec_dim != 0 && v.size() != spec_dim) {
    std::ostringstream os;
    os << what << ": dimension mismatch (spec " << spec_dim << ", argument "
       << v.size() << ")";
    throw InputError(os.str());
  }
}

}  // namespace

bool is_finite(const Vector& v) { return v.allFinite(); }

void require_finite_input(const Vector& v, const char* what) {
  if (!v.allFinite()) {
    throw InputError(std::string(what) + ": input vector has NaN/Inf entries");
  }
}

void require_finite_output(const Vector& v, const char* what) {
  if (!v.allFinite()) {
    throw OperatorEvaluationError(std::string(what) +
                                  ": operator produced NaN/Inf entries");
  }
}

// ---------------------------------------------------------------------------
// ConvexSetSpec
// ---------------------------------------------------------------------------

ConvexSetSpec ConvexSetSpec::box(Vector lower, Vector upper) {
  if (lower.size() != upper.size()) {
    throw InvalidSpecError("box: lower/upper dimension mismatch");
  }
  if (!lower.allFinite() || !upper.allFinite()) {
    throw InvalidSpecError("box: bounds must be finite");
  }
  if ((lower.array() > upper.array()).any()) {
    throw InvalidSpecError("box: requires lower <= upper componentwise");
  }
  ConvexSetSpec s;
  s.kind_ = Kind::Box;
  s.dim_ = lower.size();
  s.vec_a_ = std::move(lower);
  s.vec_b_ = std::move(upper);
  return s;
}

ConvexSetSpec ConvexSetSpec::ball(Vector center, double radius) {
  if (!center.allFinite() || !std::isfinite(radius)) {
    throw InvalidSpecError("ball: center/radius must be finite");
  }
  if (radius < 0.0) throw InvalidSpecError("ball: requires radius >= 0");
  ConvexSetSpec s;
  s.kind_ = Kind::Ball;
  s.dim_ = center.size();
  s.vec_a_ = std::move(center);
  s.scalar_ = radius;
  return s;
}

ConvexSetSpec ConvexSetSpec::halfspace(Vector normal, double offset) {
  if (!normal.allFinite() || !std::isfinite(offset)) {
    throw InvalidSpecError("halfspace: normal/offset must be finite");
  }
  if (normal.norm() == 0.0) {
    throw InvalidSpecError("halfspace: normal must be nonzero");
  }
  ConvexSetSpec s;
  s.kind_ = Kind::Halfspace;
  s.dim_ = normal.size();
  s.vec_a_ = std::move(normal);
  s.scalar_ = offset;
  return s;
}

ConvexSetSpec ConvexSetSpec::affine_subspace(Matrix equations, Vector rhs) {
  if (equations.rows() != rhs.size()) {
    throw InvalidSpecError("affine_subspace: equations/rhs row mismatch");
  }
  if (!equations.allFinite() || !rhs.allFinite()) {
    throw InvalidSpecError("affine_subspace: data must be finite");
  }
  ConvexSetSpec s;
  s.kind_ = Kind::AffineSubspace;
  s.dim_ = equations.cols();
  s.mat_ = std::move(equations);
  s.vec_a_ = std::move(rhs);
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(s.mat_);
  s.pinv_ = cod.pseudoInverse();
  // Nonempty iff Mx = rhs is consistent.
  Vector witness = s.pinv_ * s.vec_a_;
  double gap = (s.mat_ * witness - s.vec_a_).norm();
  if (gap > 1e-10 * (1.0 + s.vec_a_.norm())) {
    throw InvalidSpecError("affine_subspace: inconsistent equations (empty set)");
  }
  return s;
}

ConvexSetSpec ConvexSetSpec::whole_space(Eigen::Index dim) {
  ConvexSetSpec s;
  s.kind_ = Kind::WholeSpace;
  s.dim_ = dim;
  return s;
}

bool ConvexSetSpec::contains(const Vector& x, double tol) const {
  check_dim(dim_, x, "ConvexSetSpec::contains");
  switch (kind_) {
    case Kind::Box:
      return (x.array() >= vec_a_.array() - tol).all() &&
             (x.array() <= vec_b_.array() + tol).all();
    case Kind::Ball:
      return (x - vec_a_).norm() <= scalar_ + tol;
    case Kind::Halfspace:
      return vec_a_.dot(x) <= scalar_ + tol * (1.0 + x.norm());
    case Kind::AffineSubspace:
      return (mat_ * x - vec_a_).norm() <= tol * (1.0 + x.norm());
    case Kind::WholeSpace:
      return true;
  }
  return false;
}

Vector project(const ConvexSetSpec& set, const Vector& y) {
  require_finite_input(y, "project");
  check_dim(set.dim_, y, "project");
  switch (set.kind_) {
    case ConvexSetSpec::Kind::Box:
      return y.cwiseMax(set.vec_a_).cwiseMin(set.vec_b_);
    case ConvexSetSpec::Kind::Ball: {
      Vector d = y - set.vec_a_;
      double n = d.norm();
      if (n <= set.scalar_) return y;
      if (n == 0.0) return set.vec_a_;
      return set.vec_a_ + (set.scalar_ / n) * d;
    }
    case ConvexSetSpec::Kind::Halfspace: {
      double excess = set.vec_a_.dot(y) - set.scalar_;
      if (excess <= 0.0) return y;
      return y - (excess / set.vec_a_.squaredNorm()) * set.vec_a_;
    }
    case ConvexSetSpec::Kind::AffineSubspace:
      return y - set.pinv_ * (set.mat_ * y - set.vec_a_);
    case ConvexSetSpec::Kind::WholeSpace:
      return y;
  }
  throw InputError("project: unknown set kind");
}

// ---------------------------------------------------------------------------
// FunctionSpec
// ---------------------------------------------------------------------------

FunctionSpec FunctionSpec::zero() { return FunctionSpec(); }

FunctionSpec FunctionSpec::l1_norm(double weight) {
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    throw InvalidSpecError("l1_norm: requires weight >= 0");
  }
  FunctionSpec f;
  f.kind_ = Kind::L1Norm;
  f.weight_ = weight;
  return f;
}

FunctionSpec FunctionSpec::quadratic(Matrix Q, Vector b) {
  if (Q.rows() != Q.cols()) throw InvalidSpecError("quadratic: Q must be square");
  if (Q.rows() != b.size()) {
    throw InvalidSpecError("quadratic: Q/b dimension mismatch");
  }
  if (!Q.allFinite() || !b.allFinite()) {
    throw InvalidSpecError("quadratic: data must be finite");
  }
  FunctionSpec f;
  f.kind_ = Kind::Quadratic;
  f.dim_ = Q.rows();
  f.Q_ = 0.5 * (Q + Q.transpose());  // symmetrize on ingestion
  f.b_ = std::move(b);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(f.Q_);
  if (eig.info() != Eigen::Success) {
    throw InvalidSpecError("quadratic: eigendecomposition failed");
  }
  f.q_eigvals_ = eig.eigenvalues();
  f.q_eigvecs_ = eig.eigenvectors();
  return f;
}

FunctionSpec FunctionSpec::indicator(ConvexSetSpec set) {
  FunctionSpec f;
  f.kind_ = Kind::Indicator;
  f.dim_ = set.dim();
  f.set_ = std::move(set);
  return f;
}

FunctionSpec FunctionSpec::affine(Vector c) {
  if (!c.allFinite()) throw InvalidSpecError("affine: slope must be finite");
  FunctionSpec f;
  f.kind_ = Kind::Affine;
  f.dim_ = c.size();
  f.c_ = std::move(c);
  return f;
}

double FunctionSpec::value(const Vector& x) const {
  require_finite_input(x, "FunctionSpec::value");
  check_dim(dim_, x, "FunctionSpec::value");
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::L1Norm:
      return weight_ * x.lpNorm<1>();
    case Kind::Quadratic:
      return 0.5 * x.dot(Q_ * x) - b_.dot(x);
    case Kind::Indicator:
      return set_->contains(x) ? 0.0 : std::numeric_limits<double>::infinity();
    case Kind::Affine:
      return c_.dot(x);
  }
  return 0.0;
}

bool FunctionSpec::differentiable() const {
  return kind_ == Kind::Zero || kind_ == Kind::Quadratic || kind_ == Kind::Affine;
}

Vector FunctionSpec::gradient(const Vector& x) const {
  require_finite_input(x, "FunctionSpec::gradient");
  check_dim(dim_, x, "FunctionSpec::gradient");
  switch (kind_) {
    case Kind::Zero:
      return Vector::Zero(x.size());
    case Kind::Quadratic:
      return Q_ * x - b_;
    case Kind::Affine:
      return c_;
    default:
      throw InputError("FunctionSpec::gradient: function is not differentiable");
  }
}

Vector prox(const FunctionSpec& f, double lambda, const Vector& y) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InputError("prox: requires lambda > 0");
  }
  require_finite_input(y, "prox");
  check_dim(f.dim_, y, "prox");
  switch (f.kind_) {
    case FunctionSpec::Kind::Zero:
      return y;
    case FunctionSpec::Kind::L1Norm: {
      double t = lambda * f.weight_;
      return y.unaryExpr([t](double v) {
        double m = std::abs(v) - t;
        return m > 0.0 ? (v < 0.0 ? -m : m) : 0.0;
      });
    }
    case FunctionSpec::Kind::Quadratic: {
      // (I + lambda Q) z = y + lambda b, solved in Q's eigenbasis.
      Vector rhs = f.q_eigvecs_.transpose() * (y + lambda * f.b_);
      Vector z(rhs.size());
      for (Eigen::Index i = 0; i < rhs.size(); ++i) {
        double denom = 1.0 + lambda * f.q_eigvals_[i];
        if (std::abs(denom) < 1e-14 * (1.0 + std::abs(lambda * f.q_eigvals_[i]))) {
          throw IllPosedParameterError(
              "prox: I + lambda Q is singular for this lambda");
        }
        z[i] = rhs[i] / denom;
      }
      return f.q_eigvecs_ * z;
    }
    case FunctionSpec::Kind::Indicator:
      return project(*f.set_, y);
    case FunctionSpec::Kind::Affine:
      return y - lambda * f.c_;
  }
  throw InputError("prox: unknown function kind");
}

// ---------------------------------------------------------------------------
// Moduli
// ---------------------------------------------------------------------------

Moduli moduli_of(const Matrix& M) {
  if (M.rows() != M.cols()) throw InputError("moduli_of: matrix must be square");
  if (!M.allFinite()) throw InputError("moduli_of: matrix must be finite");
  Matrix sym = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig_sym(sym);
  Eigen::SelfAdjointEigenSolver<Matrix> eig_gram(M.transpose() * M);
  double mu = eig_sym.eigenvalues().minCoeff();
  double lip = std::sqrt(std::max(0.0, eig_gram.eigenvalues().maxCoeff()));
  return Moduli{mu, lip, true};
}

Moduli estimate_moduli(const std::function<Vector(const Vector&)>& op,
                       Eigen::Index dim, int sample_pairs, std::uint64_t seed,
                       double radius) {
  if (dim <= 0) throw InputError("estimate_moduli: requires dim > 0");
  if (sample_pairs <= 0) {
    throw InputError("estimate_moduli: requires a positive sampling budget");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-radius, radius);
  double mu = std::numeric_limits<double>::infinity();
  double lip = 0.0;
  for (int k = 0; k < sample_pairs; ++k) {
    Vector x(dim), y(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      x[i] = unif(rng);
      y[i] = unif(rng);
    }
    Vector d = x - y;
    double dn2 = d.squaredNorm();
    if (dn2 < 1e-24) continue;
    Vector db = op(x) - op(y);
    mu = std::min(mu, db.dot(d) / dn2);
    lip = std::max(lip, db.norm() / std::sqrt(dn2));
  }
  if (!std::isfinite(mu)) mu = 0.0;
  return Moduli{mu, lip, false};
}

// ---------------------------------------------------------------------------
// MaximalOperatorSpec
// ---------------------------------------------------------------------------

MaximalOperatorSpec::MaximalOperatorSpec(ResolventFn oracle, double mu_A,
                                         Eigen::Index dim)
    : oracle_(std::move(oracle)), mu_A_(mu_A), dim_(dim) {
  if (!oracle_) throw InvalidSpecError("MaximalOperatorSpec: null oracle");
  if (!std::isfinite(mu_A)) {
    throw InvalidSpecError("MaximalOperatorSpec: mu_A must be finite");
  }
}

MaximalOperatorSpec MaximalOperatorSpec::zero() {
  return MaximalOperatorSpec([](double, const Vector& y) { return y; }, 0.0);
}

MaximalOperatorSpec MaximalOperatorSpec::scaled_identity(double kappa) {
  if (!std::isfinite(kappa)) {
    throw InvalidSpecError("scaled_identity: kappa must be finite");
  }
  return MaximalOperatorSpec(
      [kappa](double lambda, const Vector& y) -> Vector {
        return y / (1.0 + lambda * kappa);
      },
      kappa);
}

MaximalOperatorSpec MaximalOperatorSpec::linear(Matrix M) {
  Moduli m = moduli_of(M);
  Eigen::Index n = M.rows();
  auto mat = std::make_shared<Matrix>(std::move(M));
  return MaximalOperatorSpec(
      [mat, n](double lambda, const Vector& y) -> Vector {
        Matrix sys = Matrix::Identity(n, n) + lambda * (*mat);
        Eigen::PartialPivLU<Matrix> lu(sys);
        Vector z = lu.solve(y);
        if ((sys * z - y).norm() > 1e-8 * (1.0 + y.norm())) {
          throw IllPosedParameterError(
              "resolvent: I + lambda M is numerically singular");
        }
        return z;
      },
      m.mu, n);
}

MaximalOperatorSpec MaximalOperatorSpec::subdifferential(FunctionSpec f) {
  double mu = 0.0;  // subdifferential of a convex function is monotone
  if (f.kind() == FunctionSpec::Kind::Quadratic) {
    // Tight modulus; may be negative for an indefinite Q (weakly monotone).
    Eigen::SelfAdjointEigenSolver<Matrix> eig(f.quadratic_matrix());
    mu = eig.eigenvalues().minCoeff();
  }
  auto fn = std::make_shared<FunctionSpec>(std::move(f));
  MaximalOperatorSpec spec(
      [fn](double lambda, const Vector& y) { return prox(*fn, lambda, y); }, mu,
      fn->dim());
  spec.source_function_ = *fn;
  return spec;
}

MaximalOperatorSpec MaximalOperatorSpec::normal_cone(ConvexSetSpec set) {
  auto s = std::make_shared<ConvexSetSpec>(std::move(set));
  MaximalOperatorSpec spec(
      [s](double, const Vector& y) { return project(*s, y); }, 0.0, s->dim());
  spec.source_set_ = *s;
  return spec;
}

Vector resolvent(const MaximalOperatorSpec& A, double lambda, const Vector& y) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InputError("resolvent: requires lambda > 0");
  }
  if (!(1.0 + lambda * A.mu_A_ > 0.0)) {
    std::ostringstream os;
    os << "resolvent: 1 + lambda*mu_A = " << 1.0 + lambda * A.mu_A_
       << " <= 0; the resolvent is not single-valued there";
    throw IllPosedParameterError(os.str());
  }
  require_finite_input(y, "resolvent");
  check_dim(A.dim_, y, "resolvent");
  Vector out = A.oracle_(lambda, y);
  if (A.dim_ != 0 && out.size() != A.dim_) {
    throw OperatorEvaluationError("resolvent: oracle changed dimension");
  }
  require_finite_output(out, "resolvent");
  return out;
}

// ---------------------------------------------------------------------------
// ForwardOperatorSpec
// ---------------------------------------------------------------------------

ForwardOperatorSpec::ForwardOperatorSpec(EvalFn eval, double mu_B,
                                         double lipschitz_L,
                                         std::optional<double> cocoercivity_beta,
                                         Eigen::Index dim)
    : eval_(std::move(eval)),
      mu_B_(mu_B),
      lipschitz_L_(lipschitz_L),
      beta_(cocoercivity_beta),
      dim_(dim) {
  if (!eval_) throw InvalidSpecError("ForwardOperatorSpec: null eval");
  if (!std::isfinite(mu_B) || !std::isfinite(lipschitz_L)) {
    throw InvalidSpecError("ForwardOperatorSpec: moduli must be finite");
  }
  if (lipschitz_L < 0.0) {
    throw InvalidSpecError("ForwardOperatorSpec: requires lipschitz_L >= 0");
  }
  // Cauchy-Schwarz: the modulus never exceeds the Lipschitz constant. The
  // declared mu_B is a lower bound, so values below -L stay admissible.
  if (mu_B > lipschitz_L) {
    throw InvalidSpecError(
        "ForwardOperatorSpec: mu_B > lipschitz_L contradicts Cauchy-Schwarz");
  }
  if (beta_) {
    if (!(*beta_ > 0.0) || !std::isfinite(*beta_)) {
      throw InvalidSpecError("ForwardOperatorSpec: requires beta > 0");
    }
    if (lipschitz_L_ > (1.0 / *beta_) * (1.0 + 1e-12)) {
      throw InvalidSpecError(
          "ForwardOperatorSpec: beta-cocoercivity implies L <= 1/beta");
    }
  }
}

ForwardOperatorSpec ForwardOperatorSpec::zero() {
  return ForwardOperatorSpec(
      [](const Vector& x) -> Vector { return Vector::Zero(x.size()); }, 0.0, 0.0);
}

ForwardOperatorSpec ForwardOperatorSpec::identity() {
  return ForwardOperatorSpec([](const Vector& x) { return x; }, 1.0, 1.0, 1.0);
}

ForwardOperatorSpec ForwardOperatorSpec::affine(Matrix M, Vector offset) {
  if (M.rows() != offset.size()) {
    throw InvalidSpecError("affine: M/offset dimension mismatch");
  }
  Moduli m = moduli_of(M);
  Eigen::Index n = M.rows();
  auto mat = std::make_shared<Matrix>(std::move(M));
  auto off = std::make_shared<Vector>(std::move(offset));
  return ForwardOperatorSpec(
      [mat, off](const Vector& x) -> Vector { return (*mat) * x + (*off); }, m.mu,
      m.lipschitz, std::nullopt, n);
}

ForwardOperatorSpec ForwardOperatorSpec::gradient(const FunctionSpec& f) {
  if (!f.differentiable()) {
    throw InvalidSpecError("gradient: function is not differentiable by kind");
  }
  if (f.kind() == FunctionSpec::Kind::Quadratic) {
    return affine(f.quadratic_matrix(), -f.quadratic_offset());
  }
  if (f.kind() == FunctionSpec::Kind::Affine) {
    Vector c = f.affine_slope();
    return ForwardOperatorSpec(
        [c](const Vector& x) -> Vector {
          (void)x;
          return c;
        },
        0.0, 0.0, std::nullopt, c.size());
  }
  return zero();
}

ForwardOperatorSpec ForwardOperatorSpec::with_moduli(
    double mu_B, double lipschitz_L,
    std::optional<double> cocoercivity_beta) const {
  return ForwardOperatorSpec(eval_, mu_B, lipschitz_L, cocoercivity_beta, dim_);
}

Vector evaluate_forward(const ForwardOperatorSpec& B, const Vector& x) {
  require_finite_input(x, "evaluate_forward");
  check_dim(B.dim_, x, "evaluate_forward");
  Vector out = B.eval_(x);
  if (out.size() != x.size()) {
    throw OperatorEvaluationError("evaluate_forward: operator changed dimension");
  }
  require_finite_output(out, "evaluate_forward");
  return out;
}

}  // namespace fbs

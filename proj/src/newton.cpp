#include "ipbox/newton.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SparseCholesky>

#include <algorithm>

namespace ipbox {

Direction Direction::zero(int n) {
  Direction d;
  d.dx = Vector::Zero(n);
  d.dlambda_l = Vector::Zero(n);
  d.dlambda_u = Vector::Zero(n);
  d.x_source.assign(n, Provenance::Zero);
  d.lambda_l_source.assign(n, Provenance::Zero);
  d.lambda_u_source.assign(n, Provenance::Zero);
  return d;
}

Vector Direction::stacked(const Vector& lower, const Vector& upper) const {
  const int n = static_cast<int>(dx.size());
  std::vector<double> out;
  out.reserve(3 * n);
  for (int i = 0; i < n; ++i) out.push_back(dx[i]);
  for (int i = 0; i < n; ++i)
    if (is_finite(lower[i])) out.push_back(dlambda_l[i]);
  for (int i = 0; i < n; ++i)
    if (is_finite(upper[i])) out.push_back(dlambda_u[i]);
  return Eigen::Map<const Vector>(out.data(), out.size());
}

namespace detail {

Vector solve_shifted_spd(const SparseMatrix& hessian, const Vector& shift,
                         const Vector& rhs, bool reduced) {
  const int n = static_cast<int>(rhs.size());
  if (n == 0) return Vector();
  if (n <= 512) {
    Matrix m = Matrix(hessian);
    m.diagonal() += shift;
    Eigen::LLT<Matrix> llt(m);
    if (llt.info() != Eigen::Success) {
      if (reduced) throw IndefiniteReduced();
      throw IndefiniteSystem();
    }
    return llt.solve(rhs);
  }
  SparseMatrix m = hessian;
  for (int i = 0; i < n; ++i) m.coeffRef(i, i) += shift[i];
  m.makeCompressed();
  Eigen::SimplicialLLT<SparseMatrix> llt(m);
  if (llt.info() != Eigen::Success) {
    if (reduced) throw IndefiniteReduced();
    throw IndefiniteSystem();
  }
  return llt.solve(rhs);
}

}  // namespace detail

Direction newton_direction(const BoundedProblem& problem, const Iterate& iterate,
                           double mu_plus) {
  if (!(mu_plus > 0.0)) throw SolverError("direction target mu must be positive");
  const int n = problem.n;
  Residual f = residual(problem, iterate, mu_plus);
  SparseMatrix hess = problem.hessian(iterate.x);

  Vector shift = Vector::Zero(n);
  Vector rhs = -problem.gradient(iterate.x);
  for (int i = 0; i < n; ++i) {
    if (is_finite(problem.lower[i])) {
      double gap = iterate.x[i] - problem.lower[i];
      shift[i] += iterate.lambda_l[i] / gap;
      rhs[i] += mu_plus / gap;
    }
    if (is_finite(problem.upper[i])) {
      double gap = problem.upper[i] - iterate.x[i];
      shift[i] += iterate.lambda_u[i] / gap;
      rhs[i] -= mu_plus / gap;
    }
  }

  Direction d = Direction::zero(n);
  d.dx = detail::solve_shifted_spd(hess, shift, rhs, false);
  d.x_source.assign(n, Provenance::Newton);
  for (int i = 0; i < n; ++i) {
    if (is_finite(problem.lower[i])) {
      double gap = iterate.x[i] - problem.lower[i];
      d.dlambda_l[i] =
          -iterate.lambda_l[i] + (mu_plus - iterate.lambda_l[i] * d.dx[i]) / gap;
      d.lambda_l_source[i] = Provenance::Newton;
    }
    if (is_finite(problem.upper[i])) {
      double gap = problem.upper[i] - iterate.x[i];
      d.dlambda_u[i] =
          -iterate.lambda_u[i] + (mu_plus + iterate.lambda_u[i] * d.dx[i]) / gap;
      d.lambda_u_source[i] = Provenance::Newton;
    }
  }

  JacobianBlocks jac = jacobian(problem, iterate);
  double solve_residual =
      (jac.apply(d.stacked(problem.lower, problem.upper)) + f.stacked()).norm();
  if (!(solve_residual <= 1e-10 * (1.0 + f.norm)))
    throw SolverError("Newton solve residual " + std::to_string(solve_residual) +
                      " exceeds tolerance");
  return d;
}

StepLengths max_feasible_steps(const Iterate& iterate, const Direction& direction,
                               const Vector& lower, const Vector& upper) {
  StepLengths s;
  s.alpha_p = kInfinity;
  s.alpha_d = kInfinity;
  const int n = static_cast<int>(iterate.x.size());
  for (int i = 0; i < n; ++i) {
    if (direction.dx[i] < 0.0 && is_finite(lower[i]))
      s.alpha_p = std::min(s.alpha_p, (iterate.x[i] - lower[i]) / -direction.dx[i]);
    if (direction.dx[i] > 0.0 && is_finite(upper[i]))
      s.alpha_p = std::min(s.alpha_p, (upper[i] - iterate.x[i]) / direction.dx[i]);
    if (is_finite(lower[i]) && direction.dlambda_l[i] < 0.0)
      s.alpha_d = std::min(s.alpha_d, iterate.lambda_l[i] / -direction.dlambda_l[i]);
    if (is_finite(upper[i]) && direction.dlambda_u[i] < 0.0)
      s.alpha_d = std::min(s.alpha_d, iterate.lambda_u[i] / -direction.dlambda_u[i]);
  }
  return s;
}

std::pair<Iterate, StepLengths> apply_step(const Iterate& iterate,
                                           const Direction& direction,
                                           const Vector& lower, const Vector& upper,
                                           double fraction) {
  StepLengths raw = max_feasible_steps(iterate, direction, lower, upper);
  StepLengths s;
  s.alpha_p = std::min(1.0, fraction * raw.alpha_p);
  s.alpha_d = std::min(1.0, fraction * raw.alpha_d);

  Iterate next;
  next.x = iterate.x + s.alpha_p * direction.dx;
  next.lambda_l = iterate.lambda_l + s.alpha_d * direction.dlambda_l;
  next.lambda_u = iterate.lambda_u + s.alpha_d * direction.dlambda_u;

  const int n = static_cast<int>(iterate.x.size());
  for (int i = 0; i < n; ++i) {
    if (is_finite(lower[i]) &&
        (!(next.x[i] - lower[i] > 0.0) || !(next.lambda_l[i] > 0.0)))
      throw DegenerateStep(i);
    if (is_finite(upper[i]) &&
        (!(upper[i] - next.x[i] > 0.0) || !(next.lambda_u[i] > 0.0)))
      throw DegenerateStep(i);
  }
  return {std::move(next), s};
}

}  // namespace ipbox

#include "ipbox/residual.hpp"

#include <algorithm>

#include "ipbox/active_sets.hpp"

namespace ipbox {

namespace {

void require_interior(const BoundedProblem& problem, const Iterate& iterate) {
  for (int i = 0; i < problem.n; ++i) {
    if (is_finite(problem.lower[i]) && !(iterate.x[i] - problem.lower[i] > 0.0))
      throw NonInterior(i);
    if (is_finite(problem.upper[i]) && !(problem.upper[i] - iterate.x[i] > 0.0))
      throw NonInterior(i);
  }
}

}  // namespace

Vector Residual::stacked() const {
  Vector out(stationarity.size() + comp_lower.size() + comp_upper.size());
  out << stationarity, comp_lower, comp_upper;
  return out;
}

Residual residual(const BoundedProblem& problem, const Iterate& iterate, double mu) {
  if (mu < 0.0) throw SolverError("mu must be nonnegative");
  require_interior(problem, iterate);

  Residual r;
  Vector g = problem.gradient(iterate.x);
  r.stationarity = g - iterate.lambda_l + iterate.lambda_u;

  std::vector<double> cl, cu;
  cl.reserve(problem.n);
  cu.reserve(problem.n);
  for (int i = 0; i < problem.n; ++i)
    if (is_finite(problem.lower[i]))
      cl.push_back(iterate.lambda_l[i] * (iterate.x[i] - problem.lower[i]) - mu);
  for (int i = 0; i < problem.n; ++i)
    if (is_finite(problem.upper[i]))
      cu.push_back(iterate.lambda_u[i] * (problem.upper[i] - iterate.x[i]) - mu);
  r.comp_lower = Eigen::Map<const Vector>(cl.data(), cl.size());
  r.comp_upper = Eigen::Map<const Vector>(cu.data(), cu.size());

  r.norm = std::sqrt(r.stationarity.squaredNorm() + r.comp_lower.squaredNorm() +
                     r.comp_upper.squaredNorm());
  return r;
}

JacobianBlocks jacobian(const BoundedProblem& problem, const Iterate& iterate) {
  require_interior(problem, iterate);

  JacobianBlocks jac;
  jac.hessian = problem.hessian(iterate.x);
  for (int i = 0; i < problem.n; ++i)
    if (is_finite(problem.lower[i])) jac.lower_index.push_back(i);
  for (int i = 0; i < problem.n; ++i)
    if (is_finite(problem.upper[i])) jac.upper_index.push_back(i);

  jac.lambda_l.resize(jac.lower_index.size());
  jac.gap_l.resize(jac.lower_index.size());
  for (std::size_t k = 0; k < jac.lower_index.size(); ++k) {
    int i = jac.lower_index[k];
    jac.lambda_l[k] = iterate.lambda_l[i];
    jac.gap_l[k] = iterate.x[i] - problem.lower[i];
  }
  jac.lambda_u.resize(jac.upper_index.size());
  jac.gap_u.resize(jac.upper_index.size());
  for (std::size_t k = 0; k < jac.upper_index.size(); ++k) {
    int i = jac.upper_index[k];
    jac.lambda_u[k] = iterate.lambda_u[i];
    jac.gap_u[k] = problem.upper[i] - iterate.x[i];
  }
  return jac;
}

Matrix JacobianBlocks::dense() const {
  const int nn = n();
  const int ml = static_cast<int>(lower_index.size());
  const int mu = static_cast<int>(upper_index.size());
  Matrix j = Matrix::Zero(rows(), rows());
  j.topLeftCorner(nn, nn) = Matrix(hessian);
  for (int k = 0; k < ml; ++k) {
    int i = lower_index[k];
    j(i, nn + k) = -1.0;              // -I column into dlambda_l
    j(nn + k, i) = lambda_l[k];       // Lambda_l row
    j(nn + k, nn + k) = gap_l[k];     // (X - L) diagonal
  }
  for (int k = 0; k < mu; ++k) {
    int i = upper_index[k];
    j(i, nn + ml + k) = 1.0;          // +I column into dlambda_u
    j(nn + ml + k, i) = -lambda_u[k]; // -Lambda_u row
    j(nn + ml + k, nn + ml + k) = gap_u[k];  // (U - X) diagonal
  }
  return j;
}

Vector JacobianBlocks::apply(const Vector& d) const {
  const int nn = n();
  const int ml = static_cast<int>(lower_index.size());
  const int mu = static_cast<int>(upper_index.size());
  Vector dx = d.head(nn);
  Vector out(rows());
  out.head(nn) = hessian * dx;
  for (int k = 0; k < ml; ++k) {
    int i = lower_index[k];
    out[i] -= d[nn + k];
    out[nn + k] = lambda_l[k] * dx[i] + gap_l[k] * d[nn + k];
  }
  for (int k = 0; k < mu; ++k) {
    int i = upper_index[k];
    out[i] += d[nn + ml + k];
    out[nn + ml + k] = -lambda_u[k] * dx[i] + gap_u[k] * d[nn + ml + k];
  }
  return out;
}

namespace {

void order_rows(std::vector<ComponentOrder>& rows, const std::vector<int>& indices,
                bool upper_side, bool active, const Iterate& iterate,
                const Vector& lower, const Vector& upper, double mu, double cap) {
  for (int i : indices) {
    ComponentOrder row;
    row.index = i;
    row.upper_side = upper_side;
    row.active = active;
    double gap = upper_side ? upper[i] - iterate.x[i] : iterate.x[i] - lower[i];
    double lambda = upper_side ? iterate.lambda_u[i] : iterate.lambda_l[i];
    row.gap_ratio = gap / mu;
    row.multiplier_ratio = lambda / mu;
    if (active)
      row.gap_violation = row.gap_ratio > cap;  // expected O(mu)
    else
      row.multiplier_violation = row.multiplier_ratio > cap;
    rows.push_back(row);
  }
}

}  // namespace

std::vector<ComponentOrder> component_orders(const Iterate& iterate, const Vector& lower,
                                             const Vector& upper,
                                             const IndexPartition& partition, double mu,
                                             double ratio_cap) {
  if (!(mu > 0.0)) throw SolverError("component orders need mu > 0");
  std::vector<ComponentOrder> rows;
  order_rows(rows, partition.a_l, false, true, iterate, lower, upper, mu, ratio_cap);
  order_rows(rows, partition.i_l, false, false, iterate, lower, upper, mu, ratio_cap);
  order_rows(rows, partition.a_u, true, true, iterate, lower, upper, mu, ratio_cap);
  order_rows(rows, partition.i_u, true, false, iterate, lower, upper, mu, ratio_cap);
  return rows;
}

}  // namespace ipbox

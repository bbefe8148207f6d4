#ifndef IPBOX_RESIDUAL_HPP_
#define IPBOX_RESIDUAL_HPP_

#include <vector>

#include "ipbox/problem.hpp"
#include "ipbox/types.hpp"

namespace ipbox {

struct IndexPartition;

/// Strictly interior primal-dual point. Multipliers are fixed to exactly 0
/// at infinite bounds and positive at finite ones.
struct Iterate {
  Vector x;
  Vector lambda_l;
  Vector lambda_u;
};

/// Barrier residual F_mu in the fixed row order
/// [stationarity; lower complementarity (increasing index); upper ditto].
/// Rows for infinite bounds are absent.
struct Residual {
  Vector stationarity;  // grad f - lambda_l + lambda_u
  Vector comp_lower;    // lambda_l_i (x_i - l_i) - mu over finite lower bounds
  Vector comp_upper;    // lambda_u_i (u_i - x_i) - mu over finite upper bounds
  double norm = 0.0;    // Euclidean norm of the concatenation

  Vector stacked() const;
};

/// mu > 0 for step targets; mu = 0 is permitted for the termination measure.
Residual residual(const BoundedProblem& problem, const Iterate& iterate, double mu);

/// Jacobian of F at (x, lambda) in block form; independent of mu.
struct JacobianBlocks {
  SparseMatrix hessian;                      // grad^2 f(x)
  std::vector<int> lower_index, upper_index; // finite-bound rows, increasing
  Vector lambda_l, gap_l;                    // over lower_index
  Vector lambda_u, gap_u;                    // over upper_index

  int n() const { return static_cast<int>(hessian.rows()); }
  int rows() const {
    return n() + static_cast<int>(lower_index.size() + upper_index.size());
  }
  /// Assembles the full (n + m_l + m_u) square matrix.
  Matrix dense() const;
  /// Block multiply with a stacked vector [dx; dlambda_l; dlambda_u].
  Vector apply(const Vector& d) const;
};

JacobianBlocks jacobian(const BoundedProblem& problem, const Iterate& iterate);

/// Informational per-component order diagnostics (gap and multiplier
/// magnitudes relative to mu) for each partitioned (index, side) pair.
struct ComponentOrder {
  int index = 0;
  bool upper_side = false;       // lower or upper bound pair
  bool active = false;           // listed in a_l/a_u (vs i_l/i_u)
  double gap_ratio = 0.0;        // gap / mu
  double multiplier_ratio = 0.0; // lambda / mu
  bool gap_violation = false;        // active side expected gap = O(mu)
  bool multiplier_violation = false; // inactive side expected lambda = O(mu)
};

std::vector<ComponentOrder> component_orders(const Iterate& iterate,
                                             const Vector& lower, const Vector& upper,
                                             const IndexPartition& partition, double mu,
                                             double ratio_cap = 100.0);

}  // namespace ipbox

#endif  // IPBOX_RESIDUAL_HPP_

#ifndef IPBOX_ACTIVE_SETS_HPP_
#define IPBOX_ACTIVE_SETS_HPP_

#include <utility>
#include <vector>

#include "ipbox/residual.hpp"
#include "ipbox/types.hpp"

namespace ipbox {

/// Index sets over {0..n-1}. a_x = a_l ∪ a_u and i_x is its complement, so
/// a_x/i_x always partition the indices. For exact partitions i_l (i_u) is
/// the complement of a_l (a_u) restricted to finite lower (upper) bounds;
/// estimated partitions may leave indices in neither set.
struct IndexPartition {
  std::vector<int> a_l, a_u, i_l, i_u, a_x, i_x;  // each sorted ascending

  /// Builds a_x, i_x and complement-style i_l/i_u from active sets.
  static IndexPartition from_active(std::vector<int> a_l, std::vector<int> a_u,
                                    const Vector& lower, const Vector& upper);
};

/// Threshold exponents: tau = mu^exponent.
struct EstimationThresholds {
  double tau_a_exponent = 2.0 / 3.0;
  double tau_i_exponent = 3.0 / 4.0;
};

struct ExactPartitionResult {
  IndexPartition partition;
  std::vector<int> degenerate;  // active indices with multiplier below tol_degenerate
};

/// Classifies a known solution: active when the gap to a finite bound is
/// below tol_active, degenerate when the matching multiplier is below
/// tol_degenerate.
ExactPartitionResult exact_partition(const Vector& x_star, const Vector& lambda_l_star,
                                     const Vector& lambda_u_star, const Vector& lower,
                                     const Vector& upper, double tol_active = 1e-10,
                                     double tol_degenerate = 1e-6);

/// Runtime heuristic: i enters a_l iff x_i - l_i < min(lambda_l_i, mu^tau_a).
/// A two-sided index passing both tests goes to the nearer bound, ties to
/// lower. i_l/i_u are complements over finite bounds; free variables land
/// in i_x.
IndexPartition estimate_active(const Iterate& iterate, const Vector& lower,
                               const Vector& upper, double mu,
                               const EstimationThresholds& thresholds);

/// Runtime heuristic for inactive multipliers: lambda_l_i is inactive iff
/// lambda_l_i < min(x_i - l_i, mu^tau_i). Returns (i_l, i_u) estimates;
/// indices may be classified neither active nor inactive.
std::pair<std::vector<int>, std::vector<int>> estimate_inactive_multipliers(
    const Iterate& iterate, const Vector& lower, const Vector& upper, double mu,
    const EstimationThresholds& thresholds);

}  // namespace ipbox

#endif  // IPBOX_ACTIVE_SETS_HPP_

#ifndef IPBOX_APPROX_HPP_
#define IPBOX_APPROX_HPP_

#include <vector>

#include "ipbox/active_sets.hpp"
#include "ipbox/newton.hpp"
#include "ipbox/problem.hpp"
#include "ipbox/residual.hpp"

namespace ipbox {

enum class DxActiveSource : unsigned char { Schur, Comp };        // S | C
enum class DlActiveSource : unsigned char { LeastSquares, BlockRow };  // ls | b
enum class DlInactiveSource : unsigned char { LeastSquares, Comp };    // ls | C

/// Component sources for the full approximate direction. The second-block
/// recovery ("-") is deliberately not selectable; its error is not
/// controlled away from exact inputs.
struct ApproxVariant {
  DxActiveSource dx_active = DxActiveSource::Schur;
  DlActiveSource dlambda_active = DlActiveSource::LeastSquares;
  DlInactiveSource dlambda_inactive = DlInactiveSource::LeastSquares;
};

/// Diagonal Schur-based estimate
///   dx_i = -(g_i - mu+ [1/(x_i-l_i) - 1/(u_i-x_i)])
///          / (H_ii + lambda_l_i/(x_i-l_i) + lambda_u_i/(u_i-x_i)),
/// returned aligned with `indices`. Terms at infinite bounds are dropped.
/// Throws ZeroDenominator when |denominator| < 1e-14 (1 + |H_ii|).
Vector dx_schur_partial(const BoundedProblem& problem, const Iterate& iterate,
                        double mu_plus, const std::vector<int>& indices);

/// Complementarity-based estimate on the active sets, aligned with
/// partition.a_x: -(x_i-l_i) + mu+/lambda_l_i on a_l, (u_i-x_i) - mu+/lambda_u_i
/// on a_u.
Vector dx_comp_partial(const Iterate& iterate, const Vector& lower, const Vector& upper,
                       double mu_plus, const IndexPartition& partition);

struct MultiplierDeltas {
  Vector lower;  // aligned with the relevant lower-side index list
  Vector upper;
};

/// Complementarity-based multiplier estimates: -lambda_l_i + mu+/(x_i-l_i)
/// on i_l and -lambda_u_i + mu+/(u_i-x_i) on i_u.
MultiplierDeltas dlambda_comp_partial(const Iterate& iterate, const Vector& lower,
                                      const Vector& upper, double mu_plus,
                                      const IndexPartition& partition);

/// Solves the |i_x| x |i_x| reduced Schur system given active-set values
/// dx_active (aligned with partition.a_x); result aligned with partition.i_x.
/// With a_x empty this is the condensed Newton system.
Vector reduced_schur_solve(const BoundedProblem& problem, const Iterate& iterate,
                           double mu_plus, const IndexPartition& partition,
                           const Vector& dx_active);

/// Back-substitutes the inactive complementarity rows given the full primal
/// step (dx_active on a_x, dx_inactive on i_x); results aligned with
/// partition.i_l / partition.i_u.
MultiplierDeltas recover_inactive_multipliers(const Iterate& iterate,
                                              const Vector& lower, const Vector& upper,
                                              double mu_plus,
                                              const IndexPartition& partition,
                                              const Vector& dx_active,
                                              const Vector& dx_inactive);

/// Active-set multiplier recovery, aligned with partition.a_l / partition.a_u.
/// BlockRow satisfies the stationarity rows exactly; LeastSquares is the
/// two-row least-squares optimum per index (normal-equation diagonal >= 1).
MultiplierDeltas recover_active_multipliers(const BoundedProblem& problem,
                                            const Iterate& iterate, double mu_plus,
                                            const IndexPartition& partition,
                                            const Vector& dx_active,
                                            const Vector& dx_inactive,
                                            const MultiplierDeltas& dlambda_inactive,
                                            DlActiveSource mode);

/// The known factors multiplying the unknown Newton components in each
/// partial-solution error term. Diagnostic only; nothing selects sources
/// automatically from these.
struct ErrorTermFactors {
  int index = 0;
  double schur = 0.0;        // 1 / (H_ii + lambda_l/(x-l) + lambda_u/(u-x))
  double comp_dx_lower = 0.0;  // (x-l)/lambda_l, 0 without a finite lower bound
  double comp_dx_upper = 0.0;  // (u-x)/lambda_u
  double comp_dl_lower = 0.0;  // lambda_l/(x-l)
  double comp_dl_upper = 0.0;  // lambda_u/(u-x)
};

std::vector<ErrorTermFactors> error_term_factors(const BoundedProblem& problem,
                                                 const Iterate& iterate);

/// Intermediate-step direction: dx from S or C on a_l/a_u and 0 on i_x;
/// dlambda 0 on a_x and complementarity-based on i_l/i_u (all zero when
/// include_dlambda is off).
Direction partial_step_direction(const BoundedProblem& problem, const Iterate& iterate,
                                 double mu_plus, const IndexPartition& partition,
                                 DxActiveSource dx_source, bool include_dlambda);

/// Full approximate direction: S/C on the active set, reduced solve on the
/// inactive set, ls/b active recovery, ls/C inactive recovery. Sources may
/// be overridden per active index through per_index_dx (aligned with a_x).
Direction full_approximate_direction(const BoundedProblem& problem,
                                     const Iterate& iterate, double mu_plus,
                                     const IndexPartition& partition,
                                     const ApproxVariant& variant,
                                     const std::vector<DxActiveSource>* per_index_dx = nullptr);

}  // namespace ipbox

#endif  // IPBOX_APPROX_HPP_

#ifndef IPBOX_NEWTON_HPP_
#define IPBOX_NEWTON_HPP_

#include <utility>
#include <vector>

#include "ipbox/problem.hpp"
#include "ipbox/residual.hpp"
#include "ipbox/types.hpp"

namespace ipbox {

/// How a direction component was produced.
enum class Provenance : unsigned char {
  Newton,         // exact Newton solve
  SchurPartial,   // S: diagonal of the condensed system
  CompPartial,    // C: complementarity row
  ReducedSolve,   // ls: reduced solve / least-squares recovery
  ActiveBlockRow, // b: stationarity-row recovery on the active set
  Zero,           // structurally zero (infinite bound or untouched component)
};

/// Candidate step with per-component provenance. Multiplier components are
/// exactly zero where the bound is infinite.
struct Direction {
  Vector dx, dlambda_l, dlambda_u;
  std::vector<Provenance> x_source, lambda_l_source, lambda_u_source;

  static Direction zero(int n);
  /// Stacked [dx; dlambda_l(finite); dlambda_u(finite)] in residual row order.
  Vector stacked(const Vector& lower, const Vector& upper) const;
};

struct StepLengths {
  double alpha_p = 1.0;
  double alpha_d = 1.0;
};

/// Solves F'(x,lambda) d = -F_{mu_plus}(x,lambda) through the condensed
/// (Schur complement) system, then recovers multipliers from the
/// complementarity rows. Accepted solves satisfy
/// ||F' d + F_{mu_plus}|| <= 1e-10 (1 + ||F_{mu_plus}||).
Direction newton_direction(const BoundedProblem& problem, const Iterate& iterate,
                           double mu_plus);

/// Largest alpha keeping l < x + alpha dx < u, and likewise for the
/// multipliers; +inf when nothing blocks.
StepLengths max_feasible_steps(const Iterate& iterate, const Direction& direction,
                               const Vector& lower, const Vector& upper);

/// Fraction-to-boundary step: alpha = min(1, fraction * alpha_max), one
/// primal and one dual length shared by both multiplier vectors.
std::pair<Iterate, StepLengths> apply_step(const Iterate& iterate,
                                           const Direction& direction,
                                           const Vector& lower, const Vector& upper,
                                           double fraction = 0.98);

namespace detail {
/// Solves (H + diag(shift)) dx = rhs with H sparse symmetric; dense Cholesky
/// up to n = 512, sparse simplicial LLT beyond.
Vector solve_shifted_spd(const SparseMatrix& hessian, const Vector& shift,
                         const Vector& rhs, bool reduced);
}  // namespace detail

}  // namespace ipbox

#endif  // IPBOX_NEWTON_HPP_

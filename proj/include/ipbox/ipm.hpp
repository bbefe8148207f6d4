#ifndef IPBOX_IPM_HPP_
#define IPBOX_IPM_HPP_

#include <limits>
#include <string>
#include <vector>

#include "ipbox/approx.hpp"
#include "ipbox/newton.hpp"
#include "ipbox/problem.hpp"

namespace ipbox {

enum class Algorithm : unsigned char {
  Newton,        // reference interior-point method
  ApproxSchur,   // approximate directions, Schur-based dx on the active set
  ApproxComp,    // approximate directions, complementarity-based dx
  Intermediate,  // approximate intermediate step + Newton solve at (x^E, lambda^E)
  HigherOrder,   // approximate intermediate step + complementarity-block update
};

const char* algorithm_name(Algorithm alg);

struct SolverConfig {
  double mu0 = 100.0;
  double sigma = 0.1;
  double epsilon = 1e-10;            // termination tolerance on ||F_0||
  double boundary_fraction = 0.98;
  int max_iters_per_mu = 50;
  double mu_min = 1e-12;
  EstimationThresholds thresholds;
  /// Substitute the standard per-algorithm threshold exponents (2/3 for
  /// Schur-based, 3/4 for complementarity-based, 1/2 and 3/4 for the
  /// Newton-like rows) unless the exponents were set explicitly.
  bool per_algorithm_thresholds = true;
  /// Perform Newton steps when an approximate method stalls for
  /// max_iters_per_mu iterations at one mu. Ignored by the reference method.
  bool newton_fallback = true;
  ApproxVariant variant;  // multiplier recoveries for the approximate methods
  DxActiveSource intermediate_dx = DxActiveSource::Schur;
  bool intermediate_dlambda = true;

  /// Threshold and step presets for the three published Newton-like rows.
  static SolverConfig newton_like_preset(int row);
};

enum class Outcome : unsigned char { Converged, MuFloor, IterationCap, NumericalFailure };

const char* outcome_name(Outcome outcome);

struct IterationRecord {
  int iteration = 0;
  double mu = 0.0;
  double f_mu_norm = 0.0;  // at the new iterate, for the mu used in the step
  double f0_norm = 0.0;    // at the new iterate
  double alpha_p = 0.0, alpha_d = 0.0;
  double alpha_ep = std::numeric_limits<double>::quiet_NaN();  // intermediate step
  double alpha_ed = std::numeric_limits<double>::quiet_NaN();
  int inactive_count = -1;  // |i_x| estimate, -1 when not applicable
  std::string provenance;
  bool fallback = false;
  double wall_seconds = 0.0;
};

struct RunTrace {
  std::vector<IterationRecord> records;
  Outcome outcome = Outcome::NumericalFailure;
  int fallback_count = 0;  // times the Newton fallback engaged
  Iterate final_iterate;
  double final_f0 = std::numeric_limits<double>::quiet_NaN();
  std::string error;  // populated on NumericalFailure

  int total_iterations() const { return static_cast<int>(records.size()); }
};

/// Infeasible-start guard: components on or outside the box are pulled to a
/// margin of delta = min(1, (u-l)/4) from the violated side.
Vector clip_to_interior(Vector x, const Vector& lower, const Vector& upper);

/// Strictly interior point with ||F_mu0|| < mu0: a per-component warm start
/// (exact for diagonal QPs) polished by Newton steps at fixed mu0.
/// Throws InitFailure after 100 polish iterations.
Iterate initial_point(const BoundedProblem& problem, double mu0);

RunTrace solve(const BoundedProblem& problem, const SolverConfig& config, Algorithm alg);

RunTrace solve_reference(const BoundedProblem& problem, const SolverConfig& config);
RunTrace solve_approx(const BoundedProblem& problem, const SolverConfig& config,
                      DxActiveSource dx_source);
RunTrace solve_intermediate(const BoundedProblem& problem, const SolverConfig& config);
RunTrace solve_higher_order(const BoundedProblem& problem, const SolverConfig& config);

/// True when the traces took the same numerical path (everything except
/// wall-clock fields matches bit for bit).
bool same_path(const RunTrace& a, const RunTrace& b);

}  // namespace ipbox

#endif  // IPBOX_IPM_HPP_

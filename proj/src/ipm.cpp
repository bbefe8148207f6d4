#include "ipbox/ipm.hpp"

#include <chrono>
#include <cmath>

namespace ipbox {

const char* algorithm_name(Algorithm alg) {
  switch (alg) {
    case Algorithm::Newton: return "newton";
    case Algorithm::ApproxSchur: return "aNS";
    case Algorithm::ApproxComp: return "aNC";
    case Algorithm::Intermediate: return "intermediate";
    case Algorithm::HigherOrder: return "higher";
  }
  return "?";
}

const char* outcome_name(Outcome outcome) {
  switch (outcome) {
    case Outcome::Converged: return "converged";
    case Outcome::MuFloor: return "mu_floor";
    case Outcome::IterationCap: return "iteration_cap";
    case Outcome::NumericalFailure: return "numerical_failure";
  }
  return "?";
}

SolverConfig SolverConfig::newton_like_preset(int row) {
  SolverConfig c;
  switch (row) {
    case 1:
      c.intermediate_dx = DxActiveSource::Schur;
      c.intermediate_dlambda = false;
      c.thresholds = {0.5, 0.75};
      break;
    case 2:
      c.intermediate_dx = DxActiveSource::Schur;
      c.intermediate_dlambda = true;
      c.thresholds = {0.5, 0.75};
      break;
    case 3:
      c.intermediate_dx = DxActiveSource::Comp;
      c.intermediate_dlambda = true;
      c.thresholds = {0.75, 0.75};
      break;
    default:
      throw SolverError("newton-like preset row must be 1, 2 or 3");
  }
  c.per_algorithm_thresholds = false;
  return c;
}

namespace {

EstimationThresholds effective_thresholds(const SolverConfig& config, Algorithm alg) {
  if (!config.per_algorithm_thresholds) return config.thresholds;
  EstimationThresholds th = config.thresholds;
  switch (alg) {
    case Algorithm::ApproxSchur: th.tau_a_exponent = 2.0 / 3.0; break;
    case Algorithm::ApproxComp: th.tau_a_exponent = 3.0 / 4.0; break;
    case Algorithm::Intermediate:
    case Algorithm::HigherOrder:
      th.tau_a_exponent = config.intermediate_dx == DxActiveSource::Schur ? 0.5 : 0.75;
      th.tau_i_exponent = 0.75;
      break;
    case Algorithm::Newton: break;
  }
  return th;
}

// Root of the per-component barrier model g + h (x - x0) - mu/(x-l) + mu/(u-x),
// increasing in x for h >= 0. Falls back to x0 when no root is bracketed.
double diagonal_model_root(double g, double h, double x0, double l, double u, double mu) {
  auto phi = [&](double x) {
    double v = g + h * (x - x0);
    if (is_finite(l)) v -= mu / (x - l);
    if (is_finite(u)) v += mu / (u - x);
    return v;
  };
  double lo, hi;
  if (is_finite(l) && is_finite(u)) {
    double w = u - l;
    lo = l + 1e-12 * w;
    hi = u - 1e-12 * w;
  } else if (is_finite(l)) {
    lo = l + 1e-12 * std::max(1.0, std::abs(l));
    hi = l + std::max(1.0, std::abs(l));
    int doublings = 0;
    while (phi(hi) < 0.0 && doublings++ < 200) hi = l + 2.0 * (hi - l);
    if (phi(hi) < 0.0) return x0;
  } else if (is_finite(u)) {
    hi = u - 1e-12 * std::max(1.0, std::abs(u));
    lo = u - std::max(1.0, std::abs(u));
    int doublings = 0;
    while (phi(lo) > 0.0 && doublings++ < 200) lo = u - 2.0 * (u - lo);
    if (phi(lo) > 0.0) return x0;
  } else {
    return h > 1e-300 ? x0 - g / h : x0;
  }
  if (!(phi(lo) <= 0.0 && phi(hi) >= 0.0)) return x0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (phi(mid) <= 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::string approx_provenance(const ApproxVariant& v) {
  std::string s = v.dx_active == DxActiveSource::Schur ? "S" : "C";
  s += v.dlambda_active == DlActiveSource::LeastSquares ? "/ls" : "/b";
  s += v.dlambda_inactive == DlInactiveSource::LeastSquares ? "/ls" : "/C";
  return s;
}

std::string intermediate_provenance(const SolverConfig& config, bool higher_order) {
  std::string s = "E(";
  s += config.intermediate_dx == DxActiveSource::Schur ? "S" : "C";
  if (config.intermediate_dlambda) s += ",C";
  s += higher_order ? ")+HO" : ")+N";
  return s;
}

/// Direction of the approximate higher-order system: complementarity blocks
/// taken at the intermediate point, right-hand side -F_mu at the original.
Direction higher_order_direction(const BoundedProblem& problem, const Iterate& at,
                                 const Iterate& intermediate, double mu) {
  const int n = problem.n;
  Residual f = residual(problem, at, mu);
  SparseMatrix hess = problem.hessian(at.x);
  Vector g = problem.gradient(at.x);

  Vector shift = Vector::Zero(n), rhs(n);
  for (int i = 0; i < n; ++i) {
    double r = -(g[i] - at.lambda_l[i] + at.lambda_u[i]);
    if (is_finite(problem.lower[i])) {
      double gap_e = intermediate.x[i] - problem.lower[i];
      if (!(gap_e > 0.0)) throw NonInterior(i);
      shift[i] += intermediate.lambda_l[i] / gap_e;
      r -= (at.lambda_l[i] * (at.x[i] - problem.lower[i]) - mu) / gap_e;
    }
    if (is_finite(problem.upper[i])) {
      double gap_e = problem.upper[i] - intermediate.x[i];
      if (!(gap_e > 0.0)) throw NonInterior(i);
      shift[i] += intermediate.lambda_u[i] / gap_e;
      r += (at.lambda_u[i] * (problem.upper[i] - at.x[i]) - mu) / gap_e;
    }
    rhs[i] = r;
  }

  Direction d = Direction::zero(n);
  d.dx = detail::solve_shifted_spd(hess, shift, rhs, false);
  d.x_source.assign(n, Provenance::Newton);
  for (int i = 0; i < n; ++i) {
    if (is_finite(problem.lower[i])) {
      double gap_e = intermediate.x[i] - problem.lower[i];
      double comp = at.lambda_l[i] * (at.x[i] - problem.lower[i]) - mu;
      d.dlambda_l[i] = (-comp - intermediate.lambda_l[i] * d.dx[i]) / gap_e;
      d.lambda_l_source[i] = Provenance::Newton;
    }
    if (is_finite(problem.upper[i])) {
      double gap_e = problem.upper[i] - intermediate.x[i];
      double comp = at.lambda_u[i] * (problem.upper[i] - at.x[i]) - mu;
      d.dlambda_u[i] = (-comp + intermediate.lambda_u[i] * d.dx[i]) / gap_e;
      d.lambda_u_source[i] = Provenance::Newton;
    }
  }

  // Residual contract against the modified Jacobian.
  JacobianBlocks jac = jacobian(problem, at);
  for (std::size_t k = 0; k < jac.lower_index.size(); ++k) {
    int i = jac.lower_index[k];
    jac.lambda_l[k] = intermediate.lambda_l[i];
    jac.gap_l[k] = intermediate.x[i] - problem.lower[i];
  }
  for (std::size_t k = 0; k < jac.upper_index.size(); ++k) {
    int i = jac.upper_index[k];
    jac.lambda_u[k] = intermediate.lambda_u[i];
    jac.gap_u[k] = problem.upper[i] - intermediate.x[i];
  }
  double solve_residual =
      (jac.apply(d.stacked(problem.lower, problem.upper)) + f.stacked()).norm();
  if (!(solve_residual <= 1e-10 * (1.0 + f.norm)))
    throw SolverError("higher-order solve residual " + std::to_string(solve_residual) +
                      " exceeds tolerance");
  return d;
}

}  // namespace

Vector clip_to_interior(Vector x, const Vector& lower, const Vector& upper) {
  for (int i = 0; i < x.size(); ++i) {
    double width = upper[i] - lower[i];  // +inf unless two-sided
    double delta = std::min(1.0, width / 4.0);
    if (is_finite(lower[i]) && x[i] <= lower[i]) x[i] = lower[i] + delta;
    if (is_finite(upper[i]) && x[i] >= upper[i]) x[i] = upper[i] - delta;
  }
  return x;
}

Iterate initial_point(const BoundedProblem& problem, double mu0) {
  if (!(mu0 > 0.0)) throw SolverError("mu0 must be positive");
  const int n = problem.n;

  Vector x_ref = clip_to_interior(Vector::Zero(n), problem.lower, problem.upper);
  Vector g = problem.gradient(x_ref);
  Vector hdiag = problem.hessian(x_ref).diagonal();
  Vector x(n);
  for (int i = 0; i < n; ++i)
    x[i] = diagonal_model_root(g[i], std::max(hdiag[i], 0.0), x_ref[i],
                               problem.lower[i], problem.upper[i], mu0);
  x = clip_to_interior(std::move(x), problem.lower, problem.upper);

  Iterate it;
  it.x = std::move(x);
  it.lambda_l = Vector::Zero(n);
  it.lambda_u = Vector::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (is_finite(problem.lower[i])) it.lambda_l[i] = mu0 / (it.x[i] - problem.lower[i]);
    if (is_finite(problem.upper[i])) it.lambda_u[i] = mu0 / (problem.upper[i] - it.x[i]);
  }

  for (int polish = 0; polish < 100; ++polish) {
    if (residual(problem, it, mu0).norm < mu0) return it;
    Direction d = newton_direction(problem, it, mu0);
    it = apply_step(it, d, problem.lower, problem.upper).first;
  }
  if (residual(problem, it, mu0).norm < mu0) return it;
  throw InitFailure();
}

RunTrace solve(const BoundedProblem& problem, const SolverConfig& config, Algorithm alg) {
  RunTrace trace;
  const EstimationThresholds thresholds = effective_thresholds(config, alg);
  try {
    Iterate it = initial_point(problem, config.mu0);
    double mu = config.sigma * config.mu0;
    double f0 = residual(problem, it, 0.0).norm;
    int iters_at_mu = 0;
    bool in_fallback = false;
    int k = 0;

    while (true) {
      if (f0 <= config.epsilon) {
        trace.outcome = Outcome::Converged;
        break;
      }
      // Relative slack so the accumulated sigma ladder still runs the
      // decade that lands on the floor itself.
      if (mu < (1.0 - 1e-9) * config.mu_min) {
        trace.outcome = Outcome::MuFloor;
        break;
      }
      // Fallback steps run "until ||F_mu|| < mu"; they get a generous safety
      // budget independent of the approximate method's cap.
      int cap = in_fallback ? std::max(config.max_iters_per_mu, 100)
                            : config.max_iters_per_mu;
      if (iters_at_mu >= cap) {
        if (alg != Algorithm::Newton && config.newton_fallback && !in_fallback) {
          in_fallback = true;
          ++trace.fallback_count;
          iters_at_mu = 0;
        } else {
          trace.outcome = Outcome::IterationCap;
          break;
        }
      }

      IterationRecord rec;
      rec.iteration = k;
      rec.mu = mu;
      rec.fallback = in_fallback;
      auto tick = std::chrono::steady_clock::now();

      if (in_fallback || alg == Algorithm::Newton) {
        Direction d = newton_direction(problem, it, mu);
        auto [next, steps] = apply_step(it, d, problem.lower, problem.upper,
                                        config.boundary_fraction);
        it = std::move(next);
        rec.alpha_p = steps.alpha_p;
        rec.alpha_d = steps.alpha_d;
        rec.provenance = "N";
      } else if (alg == Algorithm::ApproxSchur || alg == Algorithm::ApproxComp) {
        IndexPartition partition =
            estimate_active(it, problem.lower, problem.upper, mu, thresholds);
        rec.inactive_count = static_cast<int>(partition.i_x.size());
        ApproxVariant variant = config.variant;
        variant.dx_active = alg == Algorithm::ApproxSchur ? DxActiveSource::Schur
                                                          : DxActiveSource::Comp;
        Direction d = full_approximate_direction(problem, it, mu, partition, variant);
        auto [next, steps] = apply_step(it, d, problem.lower, problem.upper,
                                        config.boundary_fraction);
        it = std::move(next);
        rec.alpha_p = steps.alpha_p;
        rec.alpha_d = steps.alpha_d;
        rec.provenance = approx_provenance(variant);
      } else {
        IndexPartition partition =
            estimate_active(it, problem.lower, problem.upper, mu, thresholds);
        rec.inactive_count = static_cast<int>(partition.i_x.size());
        if (config.intermediate_dlambda) {
          auto [i_l, i_u] = estimate_inactive_multipliers(it, problem.lower,
                                                          problem.upper, mu, thresholds);
          partition.i_l = std::move(i_l);
          partition.i_u = std::move(i_u);
        }
        Direction de = partial_step_direction(problem, it, mu, partition,
                                              config.intermediate_dx,
                                              config.intermediate_dlambda);
        auto [mid, mid_steps] = apply_step(it, de, problem.lower, problem.upper,
                                           config.boundary_fraction);
        rec.alpha_ep = mid_steps.alpha_p;
        rec.alpha_ed = mid_steps.alpha_d;
        Direction d = alg == Algorithm::Intermediate
                          ? newton_direction(problem, mid, mu)
                          : higher_order_direction(problem, it, mid, mu);
        const Iterate& base = alg == Algorithm::Intermediate ? mid : it;
        auto [next, steps] = apply_step(base, d, problem.lower, problem.upper,
                                        config.boundary_fraction);
        it = std::move(next);
        rec.alpha_p = steps.alpha_p;
        rec.alpha_d = steps.alpha_d;
        rec.provenance =
            intermediate_provenance(config, alg == Algorithm::HigherOrder);
      }

      rec.f_mu_norm = residual(problem, it, mu).norm;
      f0 = residual(problem, it, 0.0).norm;
      rec.f0_norm = f0;
      rec.wall_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - tick).count();
      trace.records.push_back(std::move(rec));
      ++k;
      ++iters_at_mu;

      if (trace.records.back().f_mu_norm < mu) {
        mu = config.sigma * mu;
        iters_at_mu = 0;
        in_fallback = false;
      }
    }
    trace.final_iterate = std::move(it);
    trace.final_f0 = f0;
  } catch (const SolverError& error) {
    trace.outcome = Outcome::NumericalFailure;
    trace.error = error.what();
  }
  return trace;
}

RunTrace solve_reference(const BoundedProblem& problem, const SolverConfig& config) {
  return solve(problem, config, Algorithm::Newton);
}

RunTrace solve_approx(const BoundedProblem& problem, const SolverConfig& config,
                      DxActiveSource dx_source) {
  return solve(problem, config,
               dx_source == DxActiveSource::Schur ? Algorithm::ApproxSchur
                                                  : Algorithm::ApproxComp);
}

RunTrace solve_intermediate(const BoundedProblem& problem, const SolverConfig& config) {
  return solve(problem, config, Algorithm::Intermediate);
}

RunTrace solve_higher_order(const BoundedProblem& problem, const SolverConfig& config) {
  return solve(problem, config, Algorithm::HigherOrder);
}

bool same_path(const RunTrace& a, const RunTrace& b) {
  if (a.records.size() != b.records.size() || a.outcome != b.outcome ||
      a.fallback_count != b.fallback_count)
    return false;
  auto both_nan_or_equal = [](double x, double y) {
    return (std::isnan(x) && std::isnan(y)) || x == y;
  };
  if (!both_nan_or_equal(a.final_f0, b.final_f0)) return false;
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    const IterationRecord &ra = a.records[k], &rb = b.records[k];
    if (ra.iteration != rb.iteration || ra.mu != rb.mu ||
        ra.f_mu_norm != rb.f_mu_norm || ra.f0_norm != rb.f0_norm ||
        ra.alpha_p != rb.alpha_p || ra.alpha_d != rb.alpha_d ||
        !both_nan_or_equal(ra.alpha_ep, rb.alpha_ep) ||
        !both_nan_or_equal(ra.alpha_ed, rb.alpha_ed) ||
        ra.inactive_count != rb.inactive_count || ra.provenance != rb.provenance ||
        ra.fallback != rb.fallback)
      return false;
  }
  if (a.final_iterate.x.size() != b.final_iterate.x.size()) return false;
  return a.final_iterate.x == b.final_iterate.x &&
         a.final_iterate.lambda_l == b.final_iterate.lambda_l &&
         a.final_iterate.lambda_u == b.final_iterate.lambda_u;
}

}  // namespace ipbox

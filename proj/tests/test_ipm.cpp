#include <doctest.h>

#include <cmath>

#include "ipbox/harness.hpp"
#include "ipbox/ipm.hpp"
#include "oracle.hpp"

using namespace ipbox;

namespace {

QuadraticProblem shifted_parabola() {
  // f = (x-1)^2/2, l = 0: interior minimizer at x* = 1 with lambda* = 0
  Vector c(1), l(1), u(1);
  c << -1.0;
  l << 0.0;
  u << kInfinity;
  return QuadraticProblem(1, {Triplet(0, 0, 1.0)}, c, 0.0, l, u);
}

QuadraticProblem wide_box() {
  // minimizer at the center of a wide box: every estimate stays empty
  std::vector<Triplet> t = {Triplet(0, 0, 1.0), Triplet(1, 1, 2.0)};
  Vector c = Vector::Zero(2);
  Vector l = Vector::Constant(2, -10.0), u = Vector::Constant(2, 10.0);
  return QuadraticProblem(2, t, c, 0.0, l, u);
}

bool numerically_identical(const RunTrace& a, const RunTrace& b) {
  if (a.records.size() != b.records.size() || a.outcome != b.outcome) return false;
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    const IterationRecord &ra = a.records[k], &rb = b.records[k];
    if (ra.mu != rb.mu || ra.f_mu_norm != rb.f_mu_norm || ra.f0_norm != rb.f0_norm ||
        ra.alpha_p != rb.alpha_p || ra.alpha_d != rb.alpha_d)
      return false;
  }
  return a.final_iterate.x == b.final_iterate.x &&
         a.final_iterate.lambda_l == b.final_iterate.lambda_l &&
         a.final_iterate.lambda_u == b.final_iterate.lambda_u;
}

void check_mu_schedule(const RunTrace& trace, const SolverConfig& config) {
  for (std::size_t k = 1; k < trace.records.size(); ++k) {
    double prev = trace.records[k - 1].mu, cur = trace.records[k].mu;
    CHECK(cur <= prev);
    if (cur < prev) {
      CHECK(cur == config.sigma * prev);  // exactly the computed ladder value
      CHECK(trace.records[k - 1].f_mu_norm < prev);
    } else {
      CHECK(trace.records[k - 1].f_mu_norm >= prev);
    }
  }
}

}  // namespace

TEST_CASE("clip guard produces interior points") {
  Vector l(3), u(3);
  l << 0.0, 0.0, -kInfinity;
  u << 1.0, kInfinity, 2.0;
  Vector x(3);
  x << -5.0, -1.0, 7.0;
  Vector clipped = clip_to_interior(x, l, u);
  CHECK(clipped[0] == doctest::Approx(0.25));  // delta = min(1, 1/4)
  CHECK(clipped[1] == doctest::Approx(1.0));   // delta = 1 on half-bounded
  CHECK(clipped[2] == doctest::Approx(1.0));
  Vector inside(3);
  inside << 0.5, 3.0, -4.0;
  CHECK((clip_to_interior(inside, l, u) - inside).norm() == 0.0);
}

TEST_CASE("warm start hits the trajectory of diagonal QPs") {
  Vector c(2), l(2), u(2);
  c << -1.0, -1.0;
  l << 0.0, 0.0;
  u << kInfinity, kInfinity;
  QuadraticProblem qp(2, {Triplet(0, 0, 2.0), Triplet(1, 1, 2.0)}, c, 0.0, l, u);
  Iterate it = initial_point(qp.interface(), 100.0);
  // Zero polish steps needed: the warm start already has F_mu0 ~ 0.
  CHECK(residual(qp.interface(), it, 100.0).norm < 1e-8);
}

TEST_CASE("initial point satisfies its defining bound on generator problems") {
  GeneratorSpec spec;
  spec.n = 50;
  spec.seed = 1;
  BoundedProblem p = generate(spec).problem.interface();
  Iterate it = initial_point(p, 100.0);
  CHECK(residual(p, it, 100.0).norm < 100.0);
}

TEST_CASE("reference method solves the shifted parabola") {
  SolverConfig config;
  config.newton_fallback = false;
  RunTrace trace = solve_reference(shifted_parabola().interface(), config);
  CHECK(trace.outcome == Outcome::Converged);
  CHECK(trace.final_f0 <= config.epsilon);
  CHECK(trace.final_iterate.x[0] == doctest::Approx(1.0).epsilon(1e-6));
  check_mu_schedule(trace, config);
}

TEST_CASE("reference method reaches the certified solution") {
  GeneratorSpec spec;
  spec.n = 50;
  spec.seed = 1;
  CertifiedProblem cert = generate(spec);
  SolverConfig config;
  RunTrace trace = solve_reference(cert.problem.interface(), config);
  REQUIRE(trace.outcome == Outcome::Converged);
  CHECK((trace.final_iterate.x - cert.x_star).lpNorm<Eigen::Infinity>() < 1e-6);
  check_mu_schedule(trace, config);
}

TEST_CASE("empty active estimates reproduce the reference trace") {
  BoundedProblem p = wide_box().interface();
  SolverConfig config;
  config.intermediate_dlambda = false;  // published row 1: dx part only
  RunTrace reference = solve_reference(p, config);
  REQUIRE(reference.outcome == Outcome::Converged);
  // Identical direction systems give bit-identical paths.
  for (Algorithm alg :
       {Algorithm::ApproxSchur, Algorithm::ApproxComp, Algorithm::Intermediate}) {
    RunTrace other = solve(p, config, alg);
    CHECK(other.outcome == Outcome::Converged);
    CHECK(numerically_identical(reference, other));
  }
  // The higher-order system with a zero intermediate step is the Newton
  // system up to expression rearrangement; the path agrees to tolerance.
  RunTrace higher = solve(p, config, Algorithm::HigherOrder);
  CHECK(higher.outcome == Outcome::Converged);
  REQUIRE(higher.records.size() == reference.records.size());
  for (std::size_t k = 0; k < higher.records.size(); ++k) {
    CHECK(higher.records[k].mu == reference.records[k].mu);
    CHECK(higher.records[k].f_mu_norm ==
          doctest::Approx(reference.records[k].f_mu_norm).epsilon(1e-6).scale(1.0));
  }
  CHECK((higher.final_iterate.x - reference.final_iterate.x).norm() <= 1e-8);
}

TEST_CASE("intermediate-step records carry both step pairs") {
  GeneratorSpec spec;
  spec.n = 20;
  spec.seed = 6;
  BoundedProblem p = generate(spec).problem.interface();
  RunTrace trace = solve_intermediate(p, SolverConfig());
  REQUIRE(trace.outcome == Outcome::Converged);
  for (const IterationRecord& rec : trace.records) {
    if (rec.fallback) continue;
    CHECK(std::isfinite(rec.alpha_ep));
    CHECK(std::isfinite(rec.alpha_ed));
    CHECK(rec.alpha_p > 0.0);
  }
}

TEST_CASE("all four drivers converge and are deterministic") {
  GeneratorSpec spec;
  spec.n = 30;
  spec.seed = 2;
  BoundedProblem p = generate(spec).problem.interface();
  SolverConfig config;
  for (Algorithm alg : {Algorithm::Newton, Algorithm::ApproxSchur, Algorithm::ApproxComp,
                        Algorithm::Intermediate, Algorithm::HigherOrder}) {
    RunTrace first = solve(p, config, alg);
    CHECK(first.outcome == Outcome::Converged);
    check_mu_schedule(first, config);
    RunTrace second = solve(p, config, alg);
    CHECK(same_path(first, second));
    // final iterate strictly interior
    for (int i = 0; i < p.n; ++i) {
      if (is_finite(p.lower[i])) CHECK(first.final_iterate.x[i] > p.lower[i]);
      if (is_finite(p.upper[i])) CHECK(first.final_iterate.x[i] < p.upper[i]);
    }
  }
}

TEST_CASE("fully free problems reduce to plain Newton") {
  std::vector<Triplet> t = {Triplet(0, 0, 2.0), Triplet(1, 0, 0.3), Triplet(1, 1, 1.0)};
  Vector c(2);
  c << -1.0, 2.0;
  Vector l = Vector::Constant(2, -kInfinity), u = Vector::Constant(2, kInfinity);
  QuadraticProblem qp(2, t, c, 0.0, l, u);
  for (Algorithm alg : {Algorithm::Newton, Algorithm::ApproxSchur,
                        Algorithm::Intermediate, Algorithm::HigherOrder}) {
    RunTrace trace = solve(qp.interface(), SolverConfig(), alg);
    CHECK(trace.outcome == Outcome::Converged);
    CHECK((qp.gradient(trace.final_iterate.x)).norm() <= 1e-10);
  }
}

TEST_CASE("mu floor outcome") {
  SolverConfig config;
  config.epsilon = 0.0;  // unreachable
  config.mu_min = 1e-6;
  RunTrace trace = solve_reference(shifted_parabola().interface(), config);
  CHECK(trace.outcome == Outcome::MuFloor);
  CHECK(trace.records.back().mu >= config.mu_min * (1.0 - 1e-9));
}

TEST_CASE("iteration cap outcome without fallback") {
  GeneratorSpec spec;
  spec.n = 40;
  spec.seed = 4;
  BoundedProblem p = generate(spec).problem.interface();
  SolverConfig config;
  config.max_iters_per_mu = 1;
  config.newton_fallback = false;
  RunTrace trace = solve_reference(p, config);
  CHECK(trace.outcome == Outcome::IterationCap);
}

TEST_CASE("approximate methods fall back to Newton steps") {
  GeneratorSpec spec;
  spec.n = 40;
  spec.seed = 4;
  BoundedProblem p = generate(spec).problem.interface();
  SolverConfig config;
  config.max_iters_per_mu = 1;  // force the cap at some mu
  RunTrace trace = solve(p, config, Algorithm::ApproxComp);
  CHECK(trace.outcome == Outcome::Converged);
  CHECK(trace.fallback_count >= 1);
  bool saw_fallback = false, saw_resume_after = false;
  for (std::size_t k = 0; k < trace.records.size(); ++k) {
    if (trace.records[k].fallback) saw_fallback = true;
    else if (saw_fallback) saw_resume_after = true;
  }
  CHECK(saw_fallback);
  CHECK(saw_resume_after);  // later decades still report
}

TEST_CASE("initializer gives up on evaluators Newton cannot settle") {
  // A violently oscillating gradient hidden behind a constant Hessian keeps
  // ||F_mu0|| large no matter where the polish iterations move.
  BoundedProblem p;
  p.n = 1;
  p.lower = Vector::Zero(1);
  p.upper = Vector::Constant(1, kInfinity);
  p.value = [](const Vector& x) { return x[0]; };
  p.gradient = [](const Vector& x) {
    Vector g(1);
    g << 1e8 * std::cos(1e8 * x[0]);
    return g;
  };
  p.hessian = [](const Vector&) {
    SparseMatrix h(1, 1);
    h.coeffRef(0, 0) = 1.0;
    return h;
  };
  CHECK_THROWS_AS(initial_point(p, 100.0), InitFailure);
}

TEST_CASE("nonconvex problems surface as numerical failure") {
  Vector z = Vector::Zero(1), l = Vector::Zero(1), u = Vector::Constant(1, kInfinity);
  QuadraticProblem qp(1, {Triplet(0, 0, -1.0)}, z, 0.0, l, u);
  RunTrace trace = solve_reference(qp.interface(), SolverConfig());
  CHECK(trace.outcome == Outcome::NumericalFailure);
  CHECK(!trace.error.empty());
}

TEST_CASE("newton-like presets match the published rows") {
  SolverConfig row1 = SolverConfig::newton_like_preset(1);
  CHECK(row1.intermediate_dx == DxActiveSource::Schur);
  CHECK_FALSE(row1.intermediate_dlambda);
  CHECK(row1.thresholds.tau_a_exponent == doctest::Approx(0.5));
  SolverConfig row3 = SolverConfig::newton_like_preset(3);
  CHECK(row3.intermediate_dx == DxActiveSource::Comp);
  CHECK(row3.thresholds.tau_a_exponent == doctest::Approx(0.75));
  CHECK(row3.thresholds.tau_i_exponent == doctest::Approx(0.75));
  CHECK_THROWS_AS(SolverConfig::newton_like_preset(4), SolverError);
}

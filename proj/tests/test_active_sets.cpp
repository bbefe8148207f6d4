#include <doctest.h>

#include <algorithm>

#include "ipbox/active_sets.hpp"
#include "ipbox/harness.hpp"
#include "ipbox/ipm.hpp"
#include "oracle.hpp"

using namespace ipbox;

namespace {

bool contains(const std::vector<int>& v, int i) {
  return std::binary_search(v.begin(), v.end(), i);
}

}  // namespace

TEST_CASE("exact partition thresholds") {
  Vector l = Vector::Zero(3), u = Vector::Constant(3, kInfinity);
  Vector x(3), ll(3), lu = Vector::Zero(3);
  x << 1e-12, 1e-12, 0.2;       // first two on the bound, third interior
  ll << 0.3, 1e-8, 0.0;         // second multiplier is degenerate

  auto result = exact_partition(x, ll, lu, l, u);
  CHECK(contains(result.partition.a_l, 0));
  CHECK(contains(result.partition.a_l, 1));
  CHECK_FALSE(contains(result.partition.a_l, 2));
  CHECK(contains(result.partition.i_x, 2));
  REQUIRE(result.degenerate.size() == 1);
  CHECK(result.degenerate[0] == 1);
}

TEST_CASE("active estimation rule") {
  Vector l = Vector::Zero(1), u = Vector::Constant(1, kInfinity);
  EstimationThresholds th{2.0 / 3.0, 0.75};
  Iterate it{Vector(1), Vector(1), Vector(1)};
  it.lambda_u << 0.0;

  // gap below both the multiplier and tau_A = (1e-4)^(2/3) ~ 2.15e-3
  it.x << 1e-6;
  it.lambda_l << 0.5;
  CHECK(contains(estimate_active(it, l, u, 1e-4, th).a_l, 0));

  // multiplier clause: tiny lambda blocks activation
  it.lambda_l << 1e-8;
  CHECK_FALSE(contains(estimate_active(it, l, u, 1e-4, th).a_l, 0));

  // wide gap stays inactive
  it.x << 0.3;
  it.lambda_l << 0.5;
  CHECK_FALSE(contains(estimate_active(it, l, u, 1e-2, th).a_l, 0));
}

TEST_CASE("inactive multiplier estimation rule") {
  Vector l = Vector::Zero(1), u = Vector::Constant(1, kInfinity);
  EstimationThresholds th{2.0 / 3.0, 0.75};
  Iterate it{Vector(1), Vector(1), Vector(1)};
  it.lambda_u << 0.0;

  // lambda below both the gap and tau_I = (1e-6)^(3/4) ~ 3.16e-5
  it.x << 0.4;
  it.lambda_l << 1e-7;
  CHECK(contains(estimate_inactive_multipliers(it, l, u, 1e-6, th).first, 0));

  it.lambda_l << 0.2;
  CHECK_FALSE(contains(estimate_inactive_multipliers(it, l, u, 1e-6, th).first, 0));

  // gap clause: multiplier above the gap is not inactive
  it.x << 1e-9;
  it.lambda_l << 1e-7;
  CHECK_FALSE(contains(estimate_inactive_multipliers(it, l, u, 1e-6, th).first, 0));
}

TEST_CASE("ties classify as not active and not inactive") {
  Vector l = Vector::Zero(1), u = Vector::Constant(1, kInfinity);
  EstimationThresholds th{0.5, 0.5};
  const double mu = 1e-4;  // tau = 1e-2
  Iterate it{Vector(1), Vector(1), Vector(1)};
  it.lambda_u << 0.0;
  it.x << 1e-2;  // gap equals tau exactly
  it.lambda_l << 0.5;
  CHECK_FALSE(contains(estimate_active(it, l, u, mu, th).a_l, 0));
  it.x << 0.4;
  it.lambda_l << 1e-2;  // lambda equals tau exactly
  CHECK_FALSE(contains(estimate_inactive_multipliers(it, l, u, mu, th).first, 0));
}

TEST_CASE("estimated sets partition the indices") {
  GeneratorSpec spec;
  spec.n = 40;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    spec.seed = seed;
    CertifiedProblem cert = generate(spec);
    Iterate it = oracle::random_interior(cert.problem.lower(), cert.problem.upper(),
                                         700 + seed);
    IndexPartition part = estimate_active(it, cert.problem.lower(),
                                          cert.problem.upper(), 1e-3, {});
    std::vector<int> all;
    std::merge(part.a_x.begin(), part.a_x.end(), part.i_x.begin(), part.i_x.end(),
               std::back_inserter(all));
    CHECK(static_cast<int>(all.size()) == spec.n);
    for (int i = 0; i < spec.n; ++i) CHECK(all[i] == i);
    // a_l and a_u are disjoint
    std::vector<int> both;
    std::set_intersection(part.a_l.begin(), part.a_l.end(), part.a_u.begin(),
                          part.a_u.end(), std::back_inserter(both));
    CHECK(both.empty());
  }
}

TEST_CASE("shrinking tau_A never adds active indices") {
  GeneratorSpec spec;
  spec.n = 60;
  spec.seed = 17;
  CertifiedProblem cert = generate(spec);
  Iterate it = oracle::random_interior(cert.problem.lower(), cert.problem.upper(), 23);
  // Pull a few coordinates near their bounds so the sets are nonempty.
  for (int i : cert.partition_star.a_l)
    it.x[i] = cert.problem.lower()[i] + 1e-4 * (1.0 + i % 3);
  const double mu = 1e-3;  // mu < 1: larger exponent means smaller tau
  IndexPartition wide = estimate_active(it, cert.problem.lower(), cert.problem.upper(),
                                        mu, {0.5, 0.75});
  IndexPartition narrow = estimate_active(it, cert.problem.lower(), cert.problem.upper(),
                                          mu, {0.9, 0.75});
  CHECK(std::includes(wide.a_x.begin(), wide.a_x.end(), narrow.a_x.begin(),
                      narrow.a_x.end()));
}

TEST_CASE("estimation recovers the true active set near the trajectory") {
  // Trajectory-near iterates at mu <= 1e-6 on generator problems.
  int hits = 0;
  const int trials = 30;
  for (int seed = 0; seed < trials; ++seed) {
    GeneratorSpec spec;
    spec.n = 30;
    spec.seed = 1000 + seed;
    CertifiedProblem cert = generate(spec);
    BoundedProblem p = cert.problem.interface();

    SolverConfig config;
    Iterate it = initial_point(p, config.mu0);
    double mu = config.mu0;
    bool ok = true;
    while (mu > 1e-6 * 1.0000001) {
      mu = std::max(config.sigma * mu, 1e-6);
      for (int k = 0; k < 50 && residual(p, it, mu).norm >= mu; ++k)
        it = apply_step(it, newton_direction(p, it, mu), p.lower, p.upper).first;
      if (residual(p, it, mu).norm >= mu) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    IndexPartition est = estimate_active(it, p.lower, p.upper, mu, {2.0 / 3.0, 0.75});
    if (est.a_l == cert.partition_star.a_l && est.a_u == cert.partition_star.a_u) ++hits;
  }
  CHECK(hits >= trials * 95 / 100);
}

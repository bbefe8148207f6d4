#include <doctest.h>

#include "ipbox/active_sets.hpp"
#include "ipbox/harness.hpp"
#include "ipbox/residual.hpp"
#include "oracle.hpp"

using namespace ipbox;

namespace {

QuadraticProblem lower_only_quadratic() {
  // f = x^2/2, l = 0, u = +inf
  Vector z(1), l(1), u(1);
  z << 0.0;
  l << 0.0;
  u << kInfinity;
  return QuadraticProblem(1, {Triplet(0, 0, 1.0)}, z, 0.0, l, u);
}

Iterate point(std::initializer_list<double> x, std::initializer_list<double> ll,
              std::initializer_list<double> lu) {
  Iterate it;
  it.x = Vector(x.size());
  it.lambda_l = Vector(x.size());
  it.lambda_u = Vector(x.size());
  int i = 0;
  for (double v : x) it.x[i++] = v;
  i = 0;
  for (double v : ll) it.lambda_l[i++] = v;
  i = 0;
  for (double v : lu) it.lambda_u[i++] = v;
  return it;
}

}  // namespace

TEST_CASE("1-D residual blocks") {
  BoundedProblem p = lower_only_quadratic().interface();
  Residual r = residual(p, point({1.0}, {1.0}, {0.0}), 0.1);
  CHECK(r.stationarity[0] == doctest::Approx(0.0));
  CHECK(r.comp_lower[0] == doctest::Approx(0.9));
  CHECK(r.comp_upper.size() == 0);
  CHECK(r.norm == doctest::Approx(0.9));
}

TEST_CASE("residual vanishes on the barrier trajectory of a diagonal QP") {
  Vector c(3), l(3), u(3);
  c << -1.0, 0.5, -2.0;
  l << 0.0, -1.0, 0.0;
  u << kInfinity, 2.0, 5.0;
  QuadraticProblem qp(3, {Triplet(0, 0, 2.0), Triplet(1, 1, 1.0), Triplet(2, 2, 3.0)}, c,
                      0.0, l, u);
  for (double mu : {1.0, 1e-3, 1e-6}) {
    Iterate it = oracle::diagonal_trajectory(qp, mu);
    CHECK(residual(qp.interface(), it, mu).norm < 1e-10 * (1.0 + mu));
  }
}

TEST_CASE("two-variable lower-bounded QP residual") {
  // H = diag(2,2), c = (-1,-1), l = 0
  Vector c(2), l(2), u(2);
  c << -1.0, -1.0;
  l << 0.0, 0.0;
  u << kInfinity, kInfinity;
  QuadraticProblem qp(2, {Triplet(0, 0, 2.0), Triplet(1, 1, 2.0)}, c, 0.0, l, u);
  Residual r = residual(qp.interface(), point({0.3, 0.3}, {0.4, 0.4}, {0.0, 0.0}), 0.1);
  CHECK(r.stationarity[0] == doctest::Approx(-0.8));
  CHECK(r.stationarity[1] == doctest::Approx(-0.8));
  CHECK(r.comp_lower[0] == doctest::Approx(0.02));
  CHECK(r.norm == doctest::Approx(std::sqrt(2 * 0.64 + 2 * 0.0004)));
}

TEST_CASE("residual rejects non-interior points") {
  BoundedProblem p = lower_only_quadratic().interface();
  CHECK_THROWS_AS(residual(p, point({0.0}, {1.0}, {0.0}), 0.1), NonInterior);
  CHECK_THROWS_AS(residual(p, point({-0.5}, {1.0}, {0.0}), 0.1), NonInterior);
}

TEST_CASE("mu = 0 is allowed for the termination measure") {
  BoundedProblem p = lower_only_quadratic().interface();
  Residual r = residual(p, point({1.0}, {1.0}, {0.0}), 0.0);
  CHECK(r.comp_lower[0] == doctest::Approx(1.0));
}

TEST_CASE("norm is Lipschitz in mu with constant sqrt(#rows)") {
  GeneratorSpec spec;
  spec.n = 10;
  spec.seed = 5;
  CertifiedProblem cert = generate(spec);
  BoundedProblem p = cert.problem.interface();
  Iterate it = oracle::random_interior(p.lower, p.upper, 42);
  double rows = 0;
  for (int i = 0; i < p.n; ++i) {
    rows += is_finite(p.lower[i]) ? 1 : 0;
    rows += is_finite(p.upper[i]) ? 1 : 0;
  }
  for (auto [a, b] : std::vector<std::pair<double, double>>{
           {1.0, 0.1}, {0.3, 0.29}, {1e-4, 1e-6}, {2.0, 0.0}}) {
    double na = residual(p, it, a).norm, nb = residual(p, it, b).norm;
    CHECK(std::abs(na - nb) <= std::sqrt(rows) * std::abs(a - b) + 1e-12);
  }
}

TEST_CASE("1-D Jacobian blocks") {
  BoundedProblem p = lower_only_quadratic().interface();
  JacobianBlocks j = jacobian(p, point({1.0}, {1.0}, {0.0}));
  Matrix d = j.dense();
  REQUIRE(d.rows() == 2);
  CHECK(d(0, 0) == doctest::Approx(1.0));
  CHECK(d(0, 1) == doctest::Approx(-1.0));
  CHECK(d(1, 0) == doctest::Approx(1.0));
  CHECK(d(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("free variables contribute only Hessian rows") {
  Vector c(2), l(2), u(2);
  c << 0.0, 0.0;
  l << 0.0, -kInfinity;
  u << kInfinity, kInfinity;
  QuadraticProblem qp(2, {Triplet(0, 0, 1.0), Triplet(1, 0, 0.5), Triplet(1, 1, 2.0)}, c,
                      0.0, l, u);
  JacobianBlocks j = jacobian(qp.interface(), point({1.0, 3.0}, {0.7, 0.0}, {0.0, 0.0}));
  CHECK(j.rows() == 3);  // one multiplier row only
  Matrix d = j.dense();
  CHECK(d(1, 2) == doctest::Approx(0.0));  // free column has no -I entry
  CHECK(d(0, 2) == doctest::Approx(-1.0));
}

TEST_CASE("full block assembly matches the independent oracle") {
  Vector c(2), l(2), u(2);
  c << -1.0, -1.0;
  l << 0.0, 0.0;
  u << 2.0, kInfinity;
  QuadraticProblem qp(2, {Triplet(0, 0, 2.0), Triplet(1, 0, 0.3), Triplet(1, 1, 2.0)}, c,
                      0.0, l, u);
  BoundedProblem p = qp.interface();
  Iterate it = point({0.3, 0.7}, {0.4, 0.2}, {0.5, 0.0});
  Matrix ours = jacobian(p, it).dense();
  Matrix theirs = oracle::dense_jacobian(p, it);
  REQUIRE(ours.rows() == theirs.rows());
  CHECK((ours - theirs).lpNorm<Eigen::Infinity>() == 0.0);

  // apply() agrees with the dense product
  Vector d = Vector::LinSpaced(ours.rows(), -1.0, 1.0);
  CHECK((jacobian(p, it).apply(d) - ours * d).lpNorm<Eigen::Infinity>() < 1e-14);
}

TEST_CASE("Jacobian matches directional differences of the residual map") {
  GeneratorSpec spec;
  spec.n = 12;
  spec.seed = 9;
  BoundedProblem p = generate(spec).problem.interface();
  const double mu = 0.37;
  for (std::uint64_t s = 0; s < 3; ++s) {
    Iterate it = oracle::random_interior(p.lower, p.upper, 300 + s);
    JacobianBlocks j = jacobian(p, it);
    Vector dir = Vector::Zero(j.rows());
    std::mt19937_64 rng(900 + s);
    for (int k = 0; k < dir.size(); ++k)
      dir[k] = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
    dir *= 1e-6 / dir.norm();

    Iterate moved = it;
    moved.x += dir.head(p.n);
    int at = p.n;
    for (int i = 0; i < p.n; ++i)
      if (is_finite(p.lower[i])) moved.lambda_l[i] += dir[at++];
    for (int i = 0; i < p.n; ++i)
      if (is_finite(p.upper[i])) moved.lambda_u[i] += dir[at++];

    Vector diff = residual(p, moved, mu).stacked() - residual(p, it, mu).stacked();
    Vector lin = j.apply(dir);
    CHECK((diff - lin).norm() <= 1e-5 * (1.0 + lin.norm()));
  }
}

TEST_CASE("component order diagnostics") {
  Vector l(2), u(2);
  l << 0.0, 0.0;
  u << kInfinity, kInfinity;
  IndexPartition part = IndexPartition::from_active({0}, {}, l, u);

  const double mu = 1e-6;
  Iterate it = Iterate{Vector(2), Vector(2), Vector(2)};
  it.x << 2.0 * mu, 0.4;        // index 0 active-like, index 1 inactive
  it.lambda_l << 0.8, 0.5;      // index 1 multiplier is Theta(1): flagged
  it.lambda_u << 0.0, 0.0;

  auto rows = component_orders(it, l, u, part, mu);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].index == 0);
  CHECK(rows[0].active);
  CHECK(rows[0].gap_ratio == doctest::Approx(2.0));
  CHECK_FALSE(rows[0].gap_violation);
  CHECK(rows[1].index == 1);
  CHECK_FALSE(rows[1].active);
  CHECK(rows[1].multiplier_ratio == doctest::Approx(0.5 / mu));
  CHECK(rows[1].multiplier_violation);
}

TEST_CASE("diagnostics are clean on a diagonal QP trajectory") {
  Vector c(3), l(3), u(3);
  c << -1.0, 0.5, -2.0;
  l << 0.0, -1.0, 0.0;
  u << kInfinity, 2.0, 5.0;
  QuadraticProblem qp(3, {Triplet(0, 0, 2.0), Triplet(1, 1, 1.0), Triplet(2, 2, 3.0)}, c,
                      0.0, l, u);
  // Minimizers: x = (0.5, -0.5, 2/3), all interior, so every index is inactive.
  Vector ll = Vector::Zero(3), lu = Vector::Zero(3);
  auto part = exact_partition(Vector(qp.hessian().diagonal().cwiseInverse().cwiseProduct(-c)),
                              ll, lu, l, u).partition;
  double mu = 1e-8;
  Iterate it = oracle::diagonal_trajectory(qp, mu);
  for (const auto& row : component_orders(it, l, u, part, mu)) {
    CHECK_FALSE(row.gap_violation);
    CHECK_FALSE(row.multiplier_violation);
  }
}

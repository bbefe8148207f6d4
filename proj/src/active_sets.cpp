#include "ipbox/active_sets.hpp"

#include <algorithm>
#include <cmath>

namespace ipbox {

namespace {

std::vector<int> complement_over_finite(const std::vector<int>& active, const Vector& bound) {
  std::vector<int> out;
  std::size_t k = 0;
  for (int i = 0; i < bound.size(); ++i) {
    while (k < active.size() && active[k] < i) ++k;
    bool in_active = k < active.size() && active[k] == i;
    if (!in_active && is_finite(bound[i])) out.push_back(i);
  }
  return out;
}

std::vector<int> sorted_union(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

IndexPartition IndexPartition::from_active(std::vector<int> a_l, std::vector<int> a_u,
                                           const Vector& lower, const Vector& upper) {
  IndexPartition p;
  std::sort(a_l.begin(), a_l.end());
  std::sort(a_u.begin(), a_u.end());
  p.a_l = std::move(a_l);
  p.a_u = std::move(a_u);
  p.a_x = sorted_union(p.a_l, p.a_u);
  p.i_l = complement_over_finite(p.a_l, lower);
  p.i_u = complement_over_finite(p.a_u, upper);
  std::size_t k = 0;
  for (int i = 0; i < lower.size(); ++i) {
    while (k < p.a_x.size() && p.a_x[k] < i) ++k;
    if (!(k < p.a_x.size() && p.a_x[k] == i)) p.i_x.push_back(i);
  }
  return p;
}

ExactPartitionResult exact_partition(const Vector& x_star, const Vector& lambda_l_star,
                                     const Vector& lambda_u_star, const Vector& lower,
                                     const Vector& upper, double tol_active,
                                     double tol_degenerate) {
  std::vector<int> a_l, a_u, degenerate;
  for (int i = 0; i < x_star.size(); ++i) {
    if (is_finite(lower[i]) && x_star[i] - lower[i] < tol_active) {
      a_l.push_back(i);
      if (lambda_l_star[i] < tol_degenerate) degenerate.push_back(i);
    } else if (is_finite(upper[i]) && upper[i] - x_star[i] < tol_active) {
      a_u.push_back(i);
      if (lambda_u_star[i] < tol_degenerate) degenerate.push_back(i);
    }
  }
  return {IndexPartition::from_active(std::move(a_l), std::move(a_u), lower, upper),
          std::move(degenerate)};
}

IndexPartition estimate_active(const Iterate& iterate, const Vector& lower,
                               const Vector& upper, double mu,
                               const EstimationThresholds& thresholds) {
  if (!(mu > 0.0)) throw SolverError("active-set estimation needs mu > 0");
  const double tau_a = std::pow(mu, thresholds.tau_a_exponent);
  std::vector<int> a_l, a_u;
  for (int i = 0; i < iterate.x.size(); ++i) {
    double gap_l = is_finite(lower[i]) ? iterate.x[i] - lower[i] : kInfinity;
    double gap_u = is_finite(upper[i]) ? upper[i] - iterate.x[i] : kInfinity;
    bool hit_l = gap_l < std::min(iterate.lambda_l[i], tau_a);
    bool hit_u = gap_u < std::min(iterate.lambda_u[i], tau_a);
    if (hit_l && hit_u) {  // large mu only; the nearer bound wins, ties to lower
      if (gap_l <= gap_u) hit_u = false;
      else hit_l = false;
    }
    if (hit_l) a_l.push_back(i);
    if (hit_u) a_u.push_back(i);
  }
  return IndexPartition::from_active(std::move(a_l), std::move(a_u), lower, upper);
}

std::pair<std::vector<int>, std::vector<int>> estimate_inactive_multipliers(
    const Iterate& iterate, const Vector& lower, const Vector& upper, double mu,
    const EstimationThresholds& thresholds) {
  if (!(mu > 0.0)) throw SolverError("multiplier estimation needs mu > 0");
  const double tau_i = std::pow(mu, thresholds.tau_i_exponent);
  std::vector<int> i_l, i_u;
  for (int i = 0; i < iterate.x.size(); ++i) {
    if (is_finite(lower[i]) &&
        iterate.lambda_l[i] < std::min(iterate.x[i] - lower[i], tau_i))
      i_l.push_back(i);
    if (is_finite(upper[i]) &&
        iterate.lambda_u[i] < std::min(upper[i] - iterate.x[i], tau_i))
      i_u.push_back(i);
  }
  return {std::move(i_l), std::move(i_u)};
}

}  // namespace ipbox

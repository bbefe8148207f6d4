#include "ipbox/approx.hpp"

#include <algorithm>

namespace ipbox {

namespace {

// index -> position within a sorted list, -1 elsewhere
std::vector<int> position_map(const std::vector<int>& sorted, int n) {
  std::vector<int> map(n, -1);
  for (std::size_t k = 0; k < sorted.size(); ++k) map[sorted[k]] = static_cast<int>(k);
  return map;
}

Vector scatter_full_dx(const IndexPartition& partition, const Vector& dx_active,
                       const Vector& dx_inactive, int n) {
  Vector full = Vector::Zero(n);
  for (std::size_t k = 0; k < partition.a_x.size(); ++k)
    full[partition.a_x[k]] = dx_active[k];
  for (std::size_t k = 0; k < partition.i_x.size(); ++k)
    full[partition.i_x[k]] = dx_inactive[k];
  return full;
}

}  // namespace

Vector dx_schur_partial(const BoundedProblem& problem, const Iterate& iterate,
                        double mu_plus, const std::vector<int>& indices) {
  Vector g = problem.gradient(iterate.x);
  Vector hdiag = problem.hessian(iterate.x).diagonal();
  Vector out(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    int i = indices[k];
    double den = hdiag[i];
    double num = g[i];
    if (is_finite(problem.lower[i])) {
      double gap = iterate.x[i] - problem.lower[i];
      if (!(gap > 0.0)) throw NonInterior(i);
      den += iterate.lambda_l[i] / gap;
      num -= mu_plus / gap;
    }
    if (is_finite(problem.upper[i])) {
      double gap = problem.upper[i] - iterate.x[i];
      if (!(gap > 0.0)) throw NonInterior(i);
      den += iterate.lambda_u[i] / gap;
      num += mu_plus / gap;
    }
    if (std::abs(den) < 1e-14 * (1.0 + std::abs(hdiag[i]))) throw ZeroDenominator(i);
    out[k] = -num / den;
  }
  return out;
}

Vector dx_comp_partial(const Iterate& iterate, const Vector& lower, const Vector& upper,
                       double mu_plus, const IndexPartition& partition) {
  const int n = static_cast<int>(iterate.x.size());
  std::vector<int> in_a_l = position_map(partition.a_l, n);
  Vector out(partition.a_x.size());
  for (std::size_t k = 0; k < partition.a_x.size(); ++k) {
    int i = partition.a_x[k];
    if (in_a_l[i] >= 0)
      out[k] = -(iterate.x[i] - lower[i]) + mu_plus / iterate.lambda_l[i];
    else
      out[k] = (upper[i] - iterate.x[i]) - mu_plus / iterate.lambda_u[i];
  }
  return out;
}

MultiplierDeltas dlambda_comp_partial(const Iterate& iterate, const Vector& lower,
                                      const Vector& upper, double mu_plus,
                                      const IndexPartition& partition) {
  MultiplierDeltas d;
  d.lower.resize(partition.i_l.size());
  for (std::size_t k = 0; k < partition.i_l.size(); ++k) {
    int i = partition.i_l[k];
    double gap = iterate.x[i] - lower[i];
    if (!(gap > 0.0)) throw NonInterior(i);
    d.lower[k] = -iterate.lambda_l[i] + mu_plus / gap;
  }
  d.upper.resize(partition.i_u.size());
  for (std::size_t k = 0; k < partition.i_u.size(); ++k) {
    int i = partition.i_u[k];
    double gap = upper[i] - iterate.x[i];
    if (!(gap > 0.0)) throw NonInterior(i);
    d.upper[k] = -iterate.lambda_u[i] + mu_plus / gap;
  }
  return d;
}

Vector reduced_schur_solve(const BoundedProblem& problem, const Iterate& iterate,
                           double mu_plus, const IndexPartition& partition,
                           const Vector& dx_active) {
  const int n = problem.n;
  const int m = static_cast<int>(partition.i_x.size());
  if (dx_active.size() != static_cast<Eigen::Index>(partition.a_x.size()))
    throw SolverError("dx_active must align with the active set");
  if (m == 0) return Vector();

  SparseMatrix hess = problem.hessian(iterate.x);
  Vector g = problem.gradient(iterate.x);
  std::vector<int> in_i_x = position_map(partition.i_x, n);
  std::vector<int> in_i_l = position_map(partition.i_l, n);
  std::vector<int> in_i_u = position_map(partition.i_u, n);

  std::vector<Triplet> sub;
  for (int col = 0; col < hess.outerSize(); ++col) {
    if (in_i_x[col] < 0) continue;
    for (SparseMatrix::InnerIterator it(hess, col); it; ++it) {
      int row = static_cast<int>(it.row());
      if (in_i_x[row] >= 0) sub.emplace_back(in_i_x[row], in_i_x[col], it.value());
    }
  }
  SparseMatrix h_ii(m, m);
  h_ii.setFromTriplets(sub.begin(), sub.end());

  // H_{I_x A_x} dx_A via a full-size product (zeros off the active set).
  Vector w = Vector::Zero(n);
  for (std::size_t k = 0; k < partition.a_x.size(); ++k)
    w[partition.a_x[k]] = dx_active[k];
  Vector hw = hess * w;

  // Cross terms Lambda_{I A} dx_A never reach i_x rows: i in i_x is not in a_x.
  Vector shift = Vector::Zero(m), rhs(m);
  for (int k = 0; k < m; ++k) {
    int i = partition.i_x[k];
    double r = -g[i] - hw[i];
    if (in_i_l[i] >= 0) {
      double gap = iterate.x[i] - problem.lower[i];
      if (!(gap > 0.0)) throw NonInterior(i);
      shift[k] += iterate.lambda_l[i] / gap;
      r += mu_plus / gap;
    }
    if (in_i_u[i] >= 0) {
      double gap = problem.upper[i] - iterate.x[i];
      if (!(gap > 0.0)) throw NonInterior(i);
      shift[k] += iterate.lambda_u[i] / gap;
      r -= mu_plus / gap;
    }
    rhs[k] = r;
  }
  return detail::solve_shifted_spd(h_ii, shift, rhs, true);
}

MultiplierDeltas recover_inactive_multipliers(const Iterate& iterate, const Vector& lower,
                                              const Vector& upper, double mu_plus,
                                              const IndexPartition& partition,
                                              const Vector& dx_active,
                                              const Vector& dx_inactive) {
  const int n = static_cast<int>(iterate.x.size());
  Vector dx = scatter_full_dx(partition, dx_active, dx_inactive, n);
  MultiplierDeltas d;
  d.lower.resize(partition.i_l.size());
  for (std::size_t k = 0; k < partition.i_l.size(); ++k) {
    int i = partition.i_l[k];
    double gap = iterate.x[i] - lower[i];
    if (!(gap > 0.0)) throw NonInterior(i);
    d.lower[k] = -iterate.lambda_l[i] + (mu_plus - iterate.lambda_l[i] * dx[i]) / gap;
  }
  d.upper.resize(partition.i_u.size());
  for (std::size_t k = 0; k < partition.i_u.size(); ++k) {
    int i = partition.i_u[k];
    double gap = upper[i] - iterate.x[i];
    if (!(gap > 0.0)) throw NonInterior(i);
    d.upper[k] = -iterate.lambda_u[i] + (mu_plus + iterate.lambda_u[i] * dx[i]) / gap;
  }
  return d;
}

MultiplierDeltas recover_active_multipliers(const BoundedProblem& problem,
                                            const Iterate& iterate, double mu_plus,
                                            const IndexPartition& partition,
                                            const Vector& dx_active,
                                            const Vector& dx_inactive,
                                            const MultiplierDeltas& dlambda_inactive,
                                            DlActiveSource mode) {
  const int n = problem.n;
  Vector dx = scatter_full_dx(partition, dx_active, dx_inactive, n);
  Vector hdx = problem.hessian(iterate.x) * dx;
  Vector g = problem.gradient(iterate.x);
  std::vector<int> in_i_l = position_map(partition.i_l, n);
  std::vector<int> in_i_u = position_map(partition.i_u, n);

  // Stationarity-row residual with every non-active unknown substituted.
  auto block_row = [&](int i) {
    double r = g[i] - iterate.lambda_l[i] + iterate.lambda_u[i] + hdx[i];
    if (in_i_l[i] >= 0) r -= dlambda_inactive.lower[in_i_l[i]];
    if (in_i_u[i] >= 0) r += dlambda_inactive.upper[in_i_u[i]];
    return r;
  };

  MultiplierDeltas d;
  d.lower.resize(partition.a_l.size());
  for (std::size_t k = 0; k < partition.a_l.size(); ++k) {
    int i = partition.a_l[k];
    double r = block_row(i);
    if (mode == DlActiveSource::BlockRow) {
      d.lower[k] = r;
    } else {
      double gap = iterate.x[i] - problem.lower[i];
      double comp = iterate.lambda_l[i] * gap - mu_plus + iterate.lambda_l[i] * dx[i];
      d.lower[k] = (r - gap * comp) / (1.0 + gap * gap);
    }
  }
  d.upper.resize(partition.a_u.size());
  for (std::size_t k = 0; k < partition.a_u.size(); ++k) {
    int i = partition.a_u[k];
    double r = block_row(i);
    if (mode == DlActiveSource::BlockRow) {
      d.upper[k] = -r;
    } else {
      double gap = problem.upper[i] - iterate.x[i];
      double comp = iterate.lambda_u[i] * gap - mu_plus - iterate.lambda_u[i] * dx[i];
      d.upper[k] = -(r + gap * comp) / (1.0 + gap * gap);
    }
  }
  return d;
}

std::vector<ErrorTermFactors> error_term_factors(const BoundedProblem& problem,
                                                 const Iterate& iterate) {
  Vector hdiag = problem.hessian(iterate.x).diagonal();
  std::vector<ErrorTermFactors> out(problem.n);
  for (int i = 0; i < problem.n; ++i) {
    ErrorTermFactors& f = out[i];
    f.index = i;
    double den = hdiag[i];
    if (is_finite(problem.lower[i])) {
      double gap = iterate.x[i] - problem.lower[i];
      if (!(gap > 0.0)) throw NonInterior(i);
      den += iterate.lambda_l[i] / gap;
      f.comp_dx_lower = gap / iterate.lambda_l[i];
      f.comp_dl_lower = iterate.lambda_l[i] / gap;
    }
    if (is_finite(problem.upper[i])) {
      double gap = problem.upper[i] - iterate.x[i];
      if (!(gap > 0.0)) throw NonInterior(i);
      den += iterate.lambda_u[i] / gap;
      f.comp_dx_upper = gap / iterate.lambda_u[i];
      f.comp_dl_upper = iterate.lambda_u[i] / gap;
    }
    f.schur = den != 0.0 ? 1.0 / den : kInfinity;
  }
  return out;
}

Direction partial_step_direction(const BoundedProblem& problem, const Iterate& iterate,
                                 double mu_plus, const IndexPartition& partition,
                                 DxActiveSource dx_source, bool include_dlambda) {
  const int n = problem.n;
  Direction d = Direction::zero(n);

  Vector active = dx_source == DxActiveSource::Schur
                      ? dx_schur_partial(problem, iterate, mu_plus, partition.a_x)
                      : dx_comp_partial(iterate, problem.lower, problem.upper, mu_plus,
                                        partition);
  Provenance tag = dx_source == DxActiveSource::Schur ? Provenance::SchurPartial
                                                      : Provenance::CompPartial;
  for (std::size_t k = 0; k < partition.a_x.size(); ++k) {
    d.dx[partition.a_x[k]] = active[k];
    d.x_source[partition.a_x[k]] = tag;
  }

  if (include_dlambda) {
    std::vector<int> in_a_x = position_map(partition.a_x, n);
    MultiplierDeltas comp =
        dlambda_comp_partial(iterate, problem.lower, problem.upper, mu_plus, partition);
    for (std::size_t k = 0; k < partition.i_l.size(); ++k) {
      int i = partition.i_l[k];
      if (in_a_x[i] >= 0) continue;  // zero on the active estimate
      d.dlambda_l[i] = comp.lower[k];
      d.lambda_l_source[i] = Provenance::CompPartial;
    }
    for (std::size_t k = 0; k < partition.i_u.size(); ++k) {
      int i = partition.i_u[k];
      if (in_a_x[i] >= 0) continue;
      d.dlambda_u[i] = comp.upper[k];
      d.lambda_u_source[i] = Provenance::CompPartial;
    }
  }
  return d;
}

Direction full_approximate_direction(const BoundedProblem& problem,
                                     const Iterate& iterate, double mu_plus,
                                     const IndexPartition& partition,
                                     const ApproxVariant& variant,
                                     const std::vector<DxActiveSource>* per_index_dx) {
  const int n = problem.n;
  if (per_index_dx && per_index_dx->size() != partition.a_x.size())
    throw SolverError("per-index source list must align with the active set");

  const std::size_t na = partition.a_x.size();
  bool need_schur = false, need_comp = false;
  for (std::size_t k = 0; k < na; ++k) {
    DxActiveSource src = per_index_dx ? (*per_index_dx)[k] : variant.dx_active;
    (src == DxActiveSource::Schur ? need_schur : need_comp) = true;
  }
  Vector schur_values, comp_values;
  if (need_schur)
    schur_values = dx_schur_partial(problem, iterate, mu_plus, partition.a_x);
  if (need_comp)
    comp_values =
        dx_comp_partial(iterate, problem.lower, problem.upper, mu_plus, partition);

  Vector dx_active(na);
  std::vector<Provenance> active_tag(na);
  for (std::size_t k = 0; k < na; ++k) {
    DxActiveSource src = per_index_dx ? (*per_index_dx)[k] : variant.dx_active;
    dx_active[k] = src == DxActiveSource::Schur ? schur_values[k] : comp_values[k];
    active_tag[k] = src == DxActiveSource::Schur ? Provenance::SchurPartial
                                                 : Provenance::CompPartial;
  }

  Vector dx_inactive = reduced_schur_solve(problem, iterate, mu_plus, partition, dx_active);
  // The active recovery rows are written in terms of the ls inactive
  // recoveries, regardless of which inactive source the direction reports.
  MultiplierDeltas inactive_ls = recover_inactive_multipliers(
      iterate, problem.lower, problem.upper, mu_plus, partition, dx_active, dx_inactive);
  MultiplierDeltas active = recover_active_multipliers(
      problem, iterate, mu_plus, partition, dx_active, dx_inactive, inactive_ls,
      variant.dlambda_active);
  MultiplierDeltas inactive =
      variant.dlambda_inactive == DlInactiveSource::Comp
          ? dlambda_comp_partial(iterate, problem.lower, problem.upper, mu_plus, partition)
          : inactive_ls;

  Direction d = Direction::zero(n);
  for (std::size_t k = 0; k < na; ++k) {
    d.dx[partition.a_x[k]] = dx_active[k];
    d.x_source[partition.a_x[k]] = active_tag[k];
  }
  for (std::size_t k = 0; k < partition.i_x.size(); ++k) {
    d.dx[partition.i_x[k]] = dx_inactive[k];
    d.x_source[partition.i_x[k]] = Provenance::ReducedSolve;
  }
  Provenance active_lambda_tag = variant.dlambda_active == DlActiveSource::BlockRow
                                     ? Provenance::ActiveBlockRow
                                     : Provenance::ReducedSolve;
  Provenance inactive_lambda_tag = variant.dlambda_inactive == DlInactiveSource::Comp
                                       ? Provenance::CompPartial
                                       : Provenance::ReducedSolve;
  for (std::size_t k = 0; k < partition.a_l.size(); ++k) {
    d.dlambda_l[partition.a_l[k]] = active.lower[k];
    d.lambda_l_source[partition.a_l[k]] = active_lambda_tag;
  }
  for (std::size_t k = 0; k < partition.a_u.size(); ++k) {
    d.dlambda_u[partition.a_u[k]] = active.upper[k];
    d.lambda_u_source[partition.a_u[k]] = active_lambda_tag;
  }
  for (std::size_t k = 0; k < partition.i_l.size(); ++k) {
    d.dlambda_l[partition.i_l[k]] = inactive.lower[k];
    d.lambda_l_source[partition.i_l[k]] = inactive_lambda_tag;
  }
  for (std::size_t k = 0; k < partition.i_u.size(); ++k) {
    d.dlambda_u[partition.i_u[k]] = inactive.upper[k];
    d.lambda_u_source[partition.i_u[k]] = inactive_lambda_tag;
  }
  return d;
}

}  // namespace ipbox

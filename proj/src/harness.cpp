#include "ipbox/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>

namespace ipbox {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace

CertifiedProblem generate(const GeneratorSpec& spec) {
  if (spec.n <= 0 || spec.frac_inactive < 0.0 || spec.frac_inactive > 1.0 ||
      spec.density <= 0.0 || spec.density > 1.0 || spec.diag_shift <= 0.0 ||
      spec.magnitude <= 0.0)
    throw SolverError("invalid generator spec");

  std::mt19937_64 rng(spec.seed);
  const int n = spec.n;
  const double m = spec.magnitude;

  for (int attempt = 0; attempt < 10; ++attempt) {
    // Sparse symmetric S with uniform [-1,1] off-diagonal entries; the
    // diagonal-dominance diagonal plus diag_shift makes H positive definite.
    std::vector<Triplet> tril;
    Vector rowsum = Vector::Zero(n);
    for (int i = 1; i < n; ++i) {
      for (int j = 0; j < i; ++j) {
        if (uniform(rng, 0.0, 1.0) >= spec.density) continue;
        double v = uniform(rng, -1.0, 1.0);
        tril.emplace_back(i, j, v);
        rowsum[i] += std::abs(v);
        rowsum[j] += std::abs(v);
      }
    }
    for (int i = 0; i < n; ++i) tril.emplace_back(i, i, rowsum[i] + spec.diag_shift);

    // Bound classes, activity and the certified pair.
    Vector lower(n), upper(n), x_star(n);
    Vector lambda_l = Vector::Zero(n), lambda_u = Vector::Zero(n);
    std::vector<int> a_l, a_u;
    for (int i = 0; i < n; ++i) {
      bool inactive = uniform(rng, 0.0, 1.0) < spec.frac_inactive;
      BoundClass cls = BoundClass::TwoSided;
      switch (spec.bound_style) {
        case BoundStyle::LowerOnly: cls = BoundClass::LowerOnly; break;
        case BoundStyle::TwoSided: cls = BoundClass::TwoSided; break;
        case BoundStyle::Mixed: {
          // Free variables can never be active, so only inactive indices
          // may draw the free class; activity keeps its binomial law.
          int pick = inactive ? static_cast<int>(uniform(rng, 0.0, 4.0))
                              : static_cast<int>(uniform(rng, 0.0, 3.0));
          pick = std::min(pick, inactive ? 3 : 2);
          cls = static_cast<BoundClass>(pick);
          break;
        }
      }
      switch (cls) {
        case BoundClass::LowerOnly:
          lower[i] = m * uniform(rng, -1.0, 1.0);
          upper[i] = kInfinity;
          break;
        case BoundClass::UpperOnly:
          lower[i] = -kInfinity;
          upper[i] = m * uniform(rng, -1.0, 1.0);
          break;
        case BoundClass::TwoSided:
          lower[i] = m * uniform(rng, -2.0, 0.0);
          upper[i] = lower[i] + m * uniform(rng, 1.0, 2.0);
          break;
        case BoundClass::Free:
          lower[i] = -kInfinity;
          upper[i] = kInfinity;
          break;
      }
      if (!inactive) {
        bool at_lower = cls == BoundClass::LowerOnly ||
                        (cls == BoundClass::TwoSided && uniform(rng, 0.0, 1.0) < 0.5);
        if (at_lower) {
          x_star[i] = lower[i];
          lambda_l[i] = m * uniform(rng, 0.5, 1.5);
          a_l.push_back(i);
        } else {
          x_star[i] = upper[i];
          lambda_u[i] = m * uniform(rng, 0.5, 1.5);
          a_u.push_back(i);
        }
      } else {
        switch (cls) {
          case BoundClass::LowerOnly: x_star[i] = lower[i] + m * uniform(rng, 0.5, 1.5); break;
          case BoundClass::UpperOnly: x_star[i] = upper[i] - m * uniform(rng, 0.5, 1.5); break;
          case BoundClass::TwoSided:
            x_star[i] = lower[i] + (upper[i] - lower[i]) * uniform(rng, 0.3, 0.7);
            break;
          case BoundClass::Free: x_star[i] = m * uniform(rng, -1.0, 1.0); break;
        }
      }
    }

    // c forces stationarity at (x*, lambda*); complementarity holds exactly
    // because active gaps and inactive multipliers are exact zeros.
    QuadraticProblem with_zero_c(n, tril, Vector::Zero(n), 0.0, lower, upper);
    Vector c = -(with_zero_c.hessian() * x_star) + lambda_l - lambda_u;
    CertifiedProblem out;
    out.problem = QuadraticProblem(n, tril, std::move(c), 0.0, lower, upper);
    out.x_star = std::move(x_star);
    out.lambda_l_star = std::move(lambda_l);
    out.lambda_u_star = std::move(lambda_u);
    out.partition_star = IndexPartition::from_active(std::move(a_l), std::move(a_u),
                                                     out.problem.lower(),
                                                     out.problem.upper());

    // Certification gate.
    Vector stationarity = out.problem.gradient(out.x_star) - out.lambda_l_star +
                          out.lambda_u_star;
    if (stationarity.norm() > 1e-12) continue;
    double margin = kInfinity;
    for (int i : out.partition_star.a_l) margin = std::min(margin, out.lambda_l_star[i]);
    for (int i : out.partition_star.a_u) margin = std::min(margin, out.lambda_u_star[i]);
    for (int i : out.partition_star.i_l)
      margin = std::min(margin, out.x_star[i] - lower[i]);
    for (int i : out.partition_star.i_u)
      margin = std::min(margin, upper[i] - out.x_star[i]);
    if (margin < 0.1 * m) continue;
    Eigen::LLT<Matrix> llt(Matrix(out.problem.hessian()));
    if (llt.info() != Eigen::Success) continue;
    return out;
  }
  throw GenerationFailure();
}

namespace {

// Newton iterations at fixed mu until ||F_mu|| < mu.
void settle_at(const BoundedProblem& problem, Iterate& it, double mu,
               const SolverConfig& config) {
  for (int k = 0; k < config.max_iters_per_mu; ++k) {
    if (residual(problem, it, mu).norm < mu) return;
    Direction d = newton_direction(problem, it, mu);
    it = apply_step(it, d, problem.lower, problem.upper, config.boundary_fraction).first;
  }
  if (residual(problem, it, mu).norm < mu) return;
  throw SolverError("sweep could not reach ||F_mu|| < mu at mu = " + std::to_string(mu));
}

Vector gather(const Vector& full, const std::vector<int>& indices) {
  Vector out(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) out[k] = full[indices[k]];
  return out;
}

double stacked_norm(const Vector& a, const Vector& b) {
  return std::sqrt(a.squaredNorm() + b.squaredNorm());
}

}  // namespace

std::vector<ErrorRecord> error_sweep(const CertifiedProblem& certified,
                                     const std::vector<double>& mu_list,
                                     const SolverConfig& config) {
  for (std::size_t k = 1; k < mu_list.size(); ++k)
    if (!(mu_list[k] < mu_list[k - 1]))
      throw SolverError("mu_list must be strictly decreasing");

  BoundedProblem problem = certified.problem.interface();
  const IndexPartition& partition = certified.partition_star;
  Iterate it = initial_point(problem, config.mu0);
  double mu_level = config.mu0;

  std::vector<ErrorRecord> records;
  records.reserve(mu_list.size());
  for (double mu : mu_list) {
    // Walk the sigma ladder down to mu, keeping ||F|| < mu at every rung.
    while (mu_level > mu) {
      mu_level = std::max(config.sigma * mu_level, mu);
      settle_at(problem, it, mu_level, config);
    }
    settle_at(problem, it, mu, config);

    const double mu_plus = config.sigma * mu;
    Direction newton = newton_direction(problem, it, mu_plus);

    Vector dn_active = gather(newton.dx, partition.a_x);
    Vector dn_inactive = gather(newton.dx, partition.i_x);
    Vector dn_dl_al = gather(newton.dlambda_l, partition.a_l);
    Vector dn_dl_au = gather(newton.dlambda_u, partition.a_u);
    Vector dn_dl_il = gather(newton.dlambda_l, partition.i_l);
    Vector dn_dl_iu = gather(newton.dlambda_u, partition.i_u);

    ErrorRecord rec;
    rec.mu = mu;

    Vector dx_s = dx_schur_partial(problem, it, mu_plus, partition.a_x);
    Vector dx_c =
        dx_comp_partial(it, problem.lower, problem.upper, mu_plus, partition);
    rec.err_dxA_S = (dx_s - dn_active).norm();
    rec.err_dxA_C = (dx_c - dn_active).norm();

    // The Schur-based values seed every equation that needs an initial
    // approximation of the active primal step.
    Vector dx_ls = reduced_schur_solve(problem, it, mu_plus, partition, dx_s);
    rec.err_dxI_ls = (dx_ls - dn_inactive).norm();

    MultiplierDeltas inact_ls = recover_inactive_multipliers(
        it, problem.lower, problem.upper, mu_plus, partition, dx_s, dx_ls);
    rec.err_dlI_ls = stacked_norm(inact_ls.lower - dn_dl_il, inact_ls.upper - dn_dl_iu);

    MultiplierDeltas inact_c =
        dlambda_comp_partial(it, problem.lower, problem.upper, mu_plus, partition);
    rec.err_dlI_C = stacked_norm(inact_c.lower - dn_dl_il, inact_c.upper - dn_dl_iu);

    MultiplierDeltas act_ls = recover_active_multipliers(
        problem, it, mu_plus, partition, dx_s, dx_ls, inact_ls,
        DlActiveSource::LeastSquares);
    MultiplierDeltas act_b = recover_active_multipliers(
        problem, it, mu_plus, partition, dx_s, dx_ls, inact_ls, DlActiveSource::BlockRow);
    rec.err_dlA_ls = stacked_norm(act_ls.lower - dn_dl_al, act_ls.upper - dn_dl_au);
    rec.err_dlA_b = stacked_norm(act_b.lower - dn_dl_al, act_b.upper - dn_dl_au);

    ApproxVariant schur_variant, comp_variant;
    comp_variant.dx_active = DxActiveSource::Comp;
    Direction full_s =
        full_approximate_direction(problem, it, mu_plus, partition, schur_variant);
    Direction full_c =
        full_approximate_direction(problem, it, mu_plus, partition, comp_variant);
    rec.err_total = (full_s.stacked(problem.lower, problem.upper) -
                     newton.stacked(problem.lower, problem.upper))
                        .norm();

    rec.F_z = residual(problem, it, mu_plus).norm;
    auto progress = [&](const Direction& d) {
      Iterate stepped =
          apply_step(it, d, problem.lower, problem.upper, config.boundary_fraction).first;
      return residual(problem, stepped, mu_plus).norm;
    };
    rec.F_zN = progress(newton);
    rec.F_zS = progress(full_s);
    rec.F_zC = progress(full_c);

    records.push_back(rec);
  }
  return records;
}

std::vector<TableRow> iteration_table(
    const std::vector<std::pair<std::string, BoundedProblem>>& problems,
    const std::vector<Algorithm>& algorithms, const std::vector<double>& mu_checkpoints,
    const SolverConfig& config) {
  std::vector<TableRow> rows;
  for (const auto& [name, problem] : problems) {
    for (Algorithm alg : algorithms) {
      RunTrace trace = solve(problem, config, alg);
      for (double checkpoint : mu_checkpoints) {
        TableRow row;
        row.problem = name;
        row.algorithm = algorithm_name(alg);
        row.mu_decade = checkpoint;
        row.has_inactive = alg != Algorithm::Newton;
        double inactive_sum = 0.0;
        int inactive_n = 0;
        for (const IterationRecord& rec : trace.records) {
          if (std::abs(rec.mu - checkpoint) > 1e-9 * checkpoint) continue;
          ++row.iters;
          row.fallback = row.fallback || rec.fallback;
          if (rec.inactive_count >= 0) {
            inactive_sum += rec.inactive_count;
            ++inactive_n;
          }
        }
        row.mean_inactive = inactive_n > 0 ? inactive_sum / inactive_n : 0.0;
        row.has_inactive = row.has_inactive && inactive_n > 0;
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

double record_field(const ErrorRecord& r, const std::string& field) {
  if (field == "mu") return r.mu;
  if (field == "err_dxA_S") return r.err_dxA_S;
  if (field == "err_dxA_C") return r.err_dxA_C;
  if (field == "err_dxI_ls") return r.err_dxI_ls;
  if (field == "err_dlA_ls") return r.err_dlA_ls;
  if (field == "err_dlA_b") return r.err_dlA_b;
  if (field == "err_dlI_ls") return r.err_dlI_ls;
  if (field == "err_dlI_C") return r.err_dlI_C;
  if (field == "err_total") return r.err_total;
  if (field == "F_z") return r.F_z;
  if (field == "F_zS") return r.F_zS;
  if (field == "F_zC") return r.F_zC;
  if (field == "F_zN") return r.F_zN;
  throw SolverError("unknown sweep field '" + field + "'");
}

double fit_slope(const std::vector<ErrorRecord>& records, const std::string& field,
                 double mu_lo, double mu_hi) {
  std::vector<double> xs, ys;
  for (const ErrorRecord& r : records) {
    if (r.mu < mu_lo || r.mu > mu_hi) continue;
    double value = record_field(r, field);
    if (value > 0.0) {
      xs.push_back(std::log(r.mu));
      ys.push_back(std::log(value));
    }
  }
  if (xs.size() < 3) throw InsufficientData();
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= xs.size();
  my /= ys.size();
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
  }
  if (sxx == 0.0) throw InsufficientData();
  return sxy / sxx;
}

namespace {

const char* const kSweepFields[] = {"err_dxA_S", "err_dxA_C", "err_dxI_ls", "err_dlA_ls",
                                    "err_dlA_b", "err_dlI_ls", "err_dlI_C", "err_total",
                                    "F_z",       "F_zS",       "F_zC",      "F_zN"};

void set_field(ErrorRecord& r, const std::string& field, double value) {
  if (field == "err_dxA_S") r.err_dxA_S = value;
  else if (field == "err_dxA_C") r.err_dxA_C = value;
  else if (field == "err_dxI_ls") r.err_dxI_ls = value;
  else if (field == "err_dlA_ls") r.err_dlA_ls = value;
  else if (field == "err_dlA_b") r.err_dlA_b = value;
  else if (field == "err_dlI_ls") r.err_dlI_ls = value;
  else if (field == "err_dlI_C") r.err_dlI_C = value;
  else if (field == "err_total") r.err_total = value;
  else if (field == "F_z") r.F_z = value;
  else if (field == "F_zS") r.F_zS = value;
  else if (field == "F_zC") r.F_zC = value;
  else if (field == "F_zN") r.F_zN = value;
}

std::vector<ErrorRecord> aggregate(const std::vector<std::vector<ErrorRecord>>& sweeps,
                                   bool stddev) {
  if (sweeps.empty()) return {};
  const std::size_t rows = sweeps.front().size();
  for (const auto& sweep : sweeps)
    if (sweep.size() != rows) throw SolverError("sweeps must share the mu list");
  std::vector<ErrorRecord> out(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    out[r].mu = sweeps.front()[r].mu;
    for (const char* field : kSweepFields) {
      double mean = 0.0;
      for (const auto& sweep : sweeps) mean += record_field(sweep[r], field);
      mean /= sweeps.size();
      if (!stddev) {
        set_field(out[r], field, mean);
      } else {
        double ss = 0.0;
        for (const auto& sweep : sweeps) {
          double d = record_field(sweep[r], field) - mean;
          ss += d * d;
        }
        set_field(out[r], field,
                  sweeps.size() > 1 ? std::sqrt(ss / (sweeps.size() - 1)) : 0.0);
      }
    }
  }
  return out;
}

}  // namespace

std::vector<ErrorRecord> mean_records(const std::vector<std::vector<ErrorRecord>>& sweeps) {
  return aggregate(sweeps, false);
}

std::vector<ErrorRecord> stddev_records(const std::vector<std::vector<ErrorRecord>>& sweeps) {
  return aggregate(sweeps, true);
}

std::string export_csv(const std::vector<ErrorRecord>& records, const std::string& comment) {
  std::string out;
  if (!comment.empty()) {
    std::size_t start = 0;
    while (start <= comment.size()) {
      std::size_t end = comment.find('\n', start);
      if (end == std::string::npos) end = comment.size();
      out += "# " + comment.substr(start, end - start) + "\n";
      start = end + 1;
    }
  }
  out +=
      "mu,err_dxA_S,err_dxA_C,err_dxI_ls,err_dlA_ls,err_dlA_b,err_dlI_ls,err_dlI_C,"
      "err_total,F_z,F_zS,F_zC,F_zN\n";
  for (const ErrorRecord& r : records) {
    out += fmt17(r.mu);
    for (const char* field : kSweepFields) out += "," + fmt17(record_field(r, field));
    out += "\n";
  }
  return out;
}

std::string export_csv(const std::vector<TableRow>& rows, const std::string& comment) {
  std::string out;
  if (!comment.empty()) {
    std::size_t start = 0;
    while (start <= comment.size()) {
      std::size_t end = comment.find('\n', start);
      if (end == std::string::npos) end = comment.size();
      out += "# " + comment.substr(start, end - start) + "\n";
      start = end + 1;
    }
  }
  out += "problem,algorithm,mu_decade,iters,mean_Ix,fallback\n";
  char buf[64];
  for (const TableRow& r : rows) {
    out += r.problem + "," + r.algorithm + "," + fmt17(r.mu_decade) + ",";
    std::snprintf(buf, sizeof(buf), "%d", r.iters);
    out += buf;
    out += ",";
    if (r.has_inactive) {
      std::snprintf(buf, sizeof(buf), "%.2f", r.mean_inactive);
      out += buf;
    }
    out += ",";
    out += r.fallback ? "-" : "";
    out += "\n";
  }
  return out;
}

namespace {

struct Series {
  const char* field;
  const char* color;
};

constexpr Series kErrorSeries[] = {
    {"err_dxA_S", "#1f77b4"},  {"err_dxA_C", "#ff7f0e"}, {"err_dxI_ls", "#2ca02c"},
    {"err_dlA_ls", "#d62728"}, {"err_dlA_b", "#9467bd"}, {"err_dlI_ls", "#8c564b"},
    {"err_dlI_C", "#e377c2"},  {"err_total", "#17becf"},
};
constexpr Series kProgressSeries[] = {
    {"F_z", "#7f7f7f"}, {"F_zS", "#1f77b4"}, {"F_zC", "#ff7f0e"}, {"F_zN", "#2ca02c"}};

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

void draw_panel(std::string& svg, double x0, const std::vector<ErrorRecord>& mean,
                const std::vector<ErrorRecord>* stddev, const Series* series,
                std::size_t n_series, const char* title) {
  constexpr double kW = 640.0, kH = 480.0;
  constexpr double kLeft = 70.0, kRight = 20.0, kTop = 40.0, kBottom = 50.0;

  double lo_x = kInfinity, hi_x = -kInfinity, lo_y = kInfinity, hi_y = -kInfinity;
  for (const ErrorRecord& r : mean) {
    lo_x = std::min(lo_x, std::log10(r.mu));
    hi_x = std::max(hi_x, std::log10(r.mu));
    for (std::size_t s = 0; s < n_series; ++s) {
      double v = record_field(r, series[s].field);
      if (v > 0.0) {
        lo_y = std::min(lo_y, std::log10(v));
        hi_y = std::max(hi_y, std::log10(v));
      }
    }
  }
  if (!is_finite(lo_y)) {
    lo_y = -1.0;
    hi_y = 1.0;
  }
  lo_y = std::floor(lo_y) - 1.0;
  hi_y = std::ceil(hi_y) + 1.0;
  if (hi_x <= lo_x) hi_x = lo_x + 1.0;

  auto px = [&](double logmu) {
    return x0 + kLeft + (logmu - lo_x) / (hi_x - lo_x) * (kW - kLeft - kRight);
  };
  auto py = [&](double logv) {
    return kH - kBottom - (logv - lo_y) / (hi_y - lo_y) * (kH - kTop - kBottom);
  };

  svg += "<rect x=\"" + fmt2(x0 + kLeft) + "\" y=\"" + fmt2(kTop) + "\" width=\"" +
         fmt2(kW - kLeft - kRight) + "\" height=\"" + fmt2(kH - kTop - kBottom) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  svg += "<text x=\"" + fmt2(x0 + kW / 2) + "\" y=\"24\" font-size=\"16\" "
         "text-anchor=\"middle\" font-family=\"sans-serif\">" + std::string(title) +
         "</text>\n";

  for (double d = std::ceil(lo_x); d <= hi_x + 1e-9; d += 1.0) {
    svg += "<line x1=\"" + fmt2(px(d)) + "\" y1=\"" + fmt2(kH - kBottom) + "\" x2=\"" +
           fmt2(px(d)) + "\" y2=\"" + fmt2(kH - kBottom + 6) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt2(px(d)) + "\" y=\"" + fmt2(kH - kBottom + 22) +
           "\" font-size=\"12\" text-anchor=\"middle\" font-family=\"sans-serif\">1e" +
           std::to_string(static_cast<int>(d)) + "</text>\n";
  }
  for (double d = std::ceil(lo_y); d <= hi_y + 1e-9; d += 2.0) {
    svg += "<line x1=\"" + fmt2(x0 + kLeft - 6) + "\" y1=\"" + fmt2(py(d)) + "\" x2=\"" +
           fmt2(x0 + kLeft) + "\" y2=\"" + fmt2(py(d)) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt2(x0 + kLeft - 10) + "\" y=\"" + fmt2(py(d) + 4) +
           "\" font-size=\"12\" text-anchor=\"end\" font-family=\"sans-serif\">1e" +
           std::to_string(static_cast<int>(d)) + "</text>\n";
  }
  svg += "<text x=\"" + fmt2(x0 + kW / 2) + "\" y=\"" + fmt2(kH - 10) +
         "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\">mu</text>\n";

  for (std::size_t s = 0; s < n_series; ++s) {
    std::string points;
    for (const ErrorRecord& r : mean) {
      double v = record_field(r, series[s].field);
      if (v <= 0.0) continue;
      points += fmt2(px(std::log10(r.mu))) + "," + fmt2(py(std::log10(v))) + " ";
    }
    if (!points.empty())
      svg += "<polyline points=\"" + points + "\" fill=\"none\" stroke=\"" +
             series[s].color + "\" stroke-width=\"1.5\"/>\n";
    for (const ErrorRecord& r : mean) {
      double v = record_field(r, series[s].field);
      if (v <= 0.0) continue;
      double cx = px(std::log10(r.mu)), cy = py(std::log10(v));
      svg += "<circle cx=\"" + fmt2(cx) + "\" cy=\"" + fmt2(cy) +
             "\" r=\"2.5\" fill=\"" + series[s].color + "\"/>\n";
    }
    if (stddev) {
      for (std::size_t r = 0; r < mean.size(); ++r) {
        double v = record_field(mean[r], series[s].field);
        double sd = record_field((*stddev)[r], series[s].field);
        if (v <= 0.0 || sd <= 0.0) continue;
        double top = v + sd;
        double bottom = std::max(v - sd, 1e-300);
        double cx = px(std::log10(mean[r].mu));
        svg += "<line x1=\"" + fmt2(cx) + "\" y1=\"" + fmt2(py(std::log10(bottom))) +
               "\" x2=\"" + fmt2(cx) + "\" y2=\"" + fmt2(py(std::log10(top))) +
               "\" stroke=\"" + series[s].color + "\" stroke-width=\"1\"/>\n";
      }
    }
    double ly = kTop + 16.0 + 14.0 * s;
    svg += "<line x1=\"" + fmt2(x0 + kLeft + 8) + "\" y1=\"" + fmt2(ly - 4) + "\" x2=\"" +
           fmt2(x0 + kLeft + 28) + "\" y2=\"" + fmt2(ly - 4) + "\" stroke=\"" +
           series[s].color + "\" stroke-width=\"1.5\"/>\n";
    svg += "<text x=\"" + fmt2(x0 + kLeft + 34) + "\" y=\"" + fmt2(ly) +
           "\" font-size=\"11\" font-family=\"sans-serif\">" +
           std::string(series[s].field) + "</text>\n";
  }
}

}  // namespace

std::string export_svg(const std::vector<ErrorRecord>& mean,
                       const std::vector<ErrorRecord>* stddev,
                       const std::string& comment) {
  std::string svg =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1280\" height=\"480\" "
      "viewBox=\"0 0 1280 480\">\n";
  if (!comment.empty()) {
    std::string safe = comment;
    std::size_t at = 0;
    while ((at = safe.find("--", at)) != std::string::npos) safe.replace(at, 2, "- ");
    svg += "<!-- " + safe + " -->\n";
  }
  svg += "<rect width=\"1280\" height=\"480\" fill=\"white\"/>\n";
  draw_panel(svg, 0.0, mean, stddev, kErrorSeries, std::size(kErrorSeries),
             "approximation error vs Newton");
  draw_panel(svg, 640.0, mean, stddev, kProgressSeries, std::size(kProgressSeries),
             "progress measure ||F_mu+||");
  svg += "</svg>\n";
  return svg;
}

}  // namespace ipbox

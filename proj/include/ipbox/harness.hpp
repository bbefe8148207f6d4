#ifndef IPBOX_HARNESS_HPP_
#define IPBOX_HARNESS_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ipbox/active_sets.hpp"
#include "ipbox/ipm.hpp"
#include "ipbox/problem.hpp"

namespace ipbox {

enum class BoundStyle : unsigned char { LowerOnly, TwoSided, Mixed };

struct GeneratorSpec {
  int n = 50;
  double frac_inactive = 0.75;  // probability a variable is inactive at x*
  double density = 0.4;         // off-diagonal fill fraction of the Hessian
  BoundStyle bound_style = BoundStyle::Mixed;
  double magnitude = 0.1;       // scale of the Theta(1) gaps and multipliers
  double diag_shift = 1.0;      // positive definiteness margin
  std::uint64_t seed = 0;
};

/// A generated problem with its certified KKT pair and true partition.
/// Generation refuses to hand out problems whose KKT residual exceeds 1e-12
/// or whose strict complementarity margin falls below 0.1 * magnitude.
struct CertifiedProblem {
  QuadraticProblem problem;
  Vector x_star, lambda_l_star, lambda_u_star;
  IndexPartition partition_star;
};

CertifiedProblem generate(const GeneratorSpec& spec);

/// One row of the error-sweep experiment: the iterate satisfied
/// ||F_mu|| < mu, directions target mu+ = sigma mu, and every family is
/// compared against the exact Newton direction under the true partition.
struct ErrorRecord {
  double mu = 0.0;
  double err_dxA_S = 0.0, err_dxA_C = 0.0, err_dxI_ls = 0.0;
  double err_dlA_ls = 0.0, err_dlA_b = 0.0, err_dlI_ls = 0.0, err_dlI_C = 0.0;
  double err_total = 0.0;
  double F_z = 0.0, F_zS = 0.0, F_zC = 0.0, F_zN = 0.0;
};

/// Walks mu down the sigma-ladder with Newton iterations, emitting one
/// record per entry of the decreasing mu_list.
std::vector<ErrorRecord> error_sweep(const CertifiedProblem& certified,
                                     const std::vector<double>& mu_list,
                                     const SolverConfig& config);

/// Iteration-count table rows per (problem, algorithm, mu decade).
struct TableRow {
  std::string problem;
  std::string algorithm;
  double mu_decade = 0.0;
  int iters = 0;
  double mean_inactive = 0.0;  // mean |i_x| estimate at that decade
  bool has_inactive = false;   // false for the reference method
  bool fallback = false;       // the 50-iteration cap was hit at that decade
};

std::vector<TableRow> iteration_table(
    const std::vector<std::pair<std::string, BoundedProblem>>& problems,
    const std::vector<Algorithm>& algorithms, const std::vector<double>& mu_checkpoints,
    const SolverConfig& config);

/// Value of a sweep CSV column on one record.
double record_field(const ErrorRecord& record, const std::string& field);

/// Least-squares slope of log(field) vs log(mu) over records with
/// mu in [mu_lo, mu_hi]. Throws InsufficientData below 3 positive points.
double fit_slope(const std::vector<ErrorRecord>& records, const std::string& field,
                 double mu_lo, double mu_hi);

/// Pointwise mean / sample standard deviation across equally shaped sweeps.
std::vector<ErrorRecord> mean_records(const std::vector<std::vector<ErrorRecord>>& sweeps);
std::vector<ErrorRecord> stddev_records(const std::vector<std::vector<ErrorRecord>>& sweeps);

/// CSV with the published sweep schema; `comment` lines are embedded with a
/// leading '#'. Byte-deterministic for fixed input.
std::string export_csv(const std::vector<ErrorRecord>& records, const std::string& comment);
std::string export_csv(const std::vector<TableRow>& rows, const std::string& comment);

/// Two-panel 640x480 log-log SVG (errors, progress) with legend and optional
/// one-standard-deviation bars; `comment` lands in an XML comment header.
/// Byte-deterministic for fixed input.
std::string export_svg(const std::vector<ErrorRecord>& mean,
                       const std::vector<ErrorRecord>* stddev = nullptr,
                       const std::string& comment = "");

}  // namespace ipbox

#endif  // IPBOX_HARNESS_HPP_

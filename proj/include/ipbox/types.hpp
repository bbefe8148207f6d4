#ifndef IPBOX_TYPES_HPP_
#define IPBOX_TYPES_HPP_

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace ipbox {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline bool is_finite(double v) { return std::isfinite(v); }

/// Per-index bound structure, derived from the finiteness of l_i and u_i.
enum class BoundClass : unsigned char { LowerOnly, UpperOnly, TwoSided, Free };

class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

class CrossedBounds : public SolverError {
 public:
  int index;
  explicit CrossedBounds(int i)
      : SolverError("crossed bounds at index " + std::to_string(i)), index(i) {}
};

class AsymmetricHessian : public SolverError {
 public:
  int row, col;
  double delta;
  AsymmetricHessian(int i, int j, double d)
      : SolverError("asymmetric Hessian at (" + std::to_string(i) + "," +
                    std::to_string(j) + "), |H_ij - H_ji| = " + std::to_string(d)),
        row(i), col(j), delta(d) {}
};

class NonInterior : public SolverError {
 public:
  int index;
  explicit NonInterior(int i)
      : SolverError("iterate not strictly interior at index " + std::to_string(i)),
        index(i) {}
};

class IndefiniteSystem : public SolverError {
 public:
  IndefiniteSystem() : SolverError("condensed system factorization failed") {}
  explicit IndefiniteSystem(const std::string& what) : SolverError(what) {}
};

class IndefiniteReduced : public SolverError {
 public:
  IndefiniteReduced() : SolverError("reduced system factorization failed") {}
};

class ZeroDenominator : public SolverError {
 public:
  int index;
  explicit ZeroDenominator(int i)
      : SolverError("vanishing denominator at index " + std::to_string(i)), index(i) {}
};

class DegenerateStep : public SolverError {
 public:
  int index;
  explicit DegenerateStep(int i)
      : SolverError("step collapses interiority margin at index " + std::to_string(i)),
        index(i) {}
};

class InitFailure : public SolverError {
 public:
  InitFailure() : SolverError("could not produce an initial point with ||F_mu0|| < mu0") {}
};

class GenerationFailure : public SolverError {
 public:
  GenerationFailure() : SolverError("positive definite enforcement failed") {}
};

class InsufficientData : public SolverError {
 public:
  InsufficientData() : SolverError("not enough positive data points for a slope fit") {}
};

class ParseError : public SolverError {
 public:
  int line;
  ParseError(int line_number, const std::string& what)
      : SolverError("line " + std::to_string(line_number) + ": " + what),
        line(line_number) {}
};

}  // namespace ipbox

#endif  // IPBOX_TYPES_HPP_

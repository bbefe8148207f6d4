#ifndef IPBOX_PROBLEM_HPP_
#define IPBOX_PROBLEM_HPP_

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ipbox/types.hpp"

namespace ipbox {

/// A bound-constrained problem: minimize f(x) subject to l <= x <= u,
/// with extended-real bounds. The evaluator callbacks must be deterministic
/// and reentrant; problem values are immutable once constructed.
struct BoundedProblem {
  int n = 0;
  Vector lower;  // entries may be -inf
  Vector upper;  // entries may be +inf
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  std::function<SparseMatrix(const Vector&)> hessian;
};

/// Convex quadratic specialization f(x) = 1/2 x'Hx + c'x + constant with
/// sparse symmetric H held as a canonical lower triangle.
class QuadraticProblem {
 public:
  QuadraticProblem() = default;

  /// Triplets may address either triangle; duplicates are summed per entry,
  /// and conflicting mirror entries raise AsymmetricHessian.
  QuadraticProblem(int n, const std::vector<Triplet>& hessian_triplets,
                   Vector linear, double constant, Vector lower, Vector upper);

  int dimension() const { return data_->n; }
  const SparseMatrix& hessian() const { return data_->hessian; }
  const std::vector<Triplet>& lower_triplets() const { return data_->tril; }
  const Vector& linear() const { return data_->linear; }
  double constant_term() const { return data_->constant; }
  const Vector& lower() const { return data_->lower; }
  const Vector& upper() const { return data_->upper; }

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;

  /// Evaluator view sharing this problem's (immutable) data.
  BoundedProblem interface() const;

 private:
  struct Data {
    int n = 0;
    std::vector<Triplet> tril;  // sorted (row, col), row >= col, duplicates summed
    SparseMatrix hessian;       // assembled full symmetric matrix
    Vector linear;
    double constant = 0.0;
    Vector lower, upper;
  };
  std::shared_ptr<const Data> data_;
};

/// Checks l < u componentwise and probes Hessian symmetry at one interior
/// point. Throws CrossedBounds or AsymmetricHessian.
void validate(const BoundedProblem& problem);

/// Per-index bound tags; requires a validated problem.
std::vector<BoundClass> bound_classes(const BoundedProblem& problem);
std::vector<BoundClass> bound_classes(const Vector& lower, const Vector& upper);

/// Parses the line-oriented problem file format (see README for the grammar).
/// Throws ParseError with a 1-based line number.
QuadraticProblem parse_problem(const std::string& text);

/// Canonical text form; parse_problem(serialize_problem(p)) reproduces p.
std::string serialize_problem(const QuadraticProblem& problem);

}  // namespace ipbox

#endif  // IPBOX_PROBLEM_HPP_

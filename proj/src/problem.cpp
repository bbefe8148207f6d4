#include "ipbox/problem.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

namespace ipbox {

namespace {

// 17 significant digits: round-trips any double exactly.
std::string format_value(double v) {
  if (v == kInfinity) return "inf";
  if (v == -kInfinity) return "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

constexpr double kSymmetryTol = 1e-12;

}  // namespace

QuadraticProblem::QuadraticProblem(int n, const std::vector<Triplet>& hessian_triplets,
                                   Vector linear, double constant, Vector lower,
                                   Vector upper) {
  auto data = std::make_shared<Data>();
  data->n = n;
  data->linear = std::move(linear);
  data->constant = constant;
  data->lower = std::move(lower);
  data->upper = std::move(upper);
  if (data->linear.size() != n || data->lower.size() != n || data->upper.size() != n)
    throw SolverError("vector length does not match the problem dimension");

  // Sum duplicates per ordered position, then fold to the lower triangle.
  // Conflicting mirror entries are an error rather than something to average.
  std::map<std::pair<int, int>, double> entries;
  for (const Triplet& t : hessian_triplets) {
    if (t.row() < 0 || t.row() >= n || t.col() < 0 || t.col() >= n)
      throw SolverError("Hessian triplet index out of range");
    entries[{t.row(), t.col()}] += t.value();
  }
  std::map<std::pair<int, int>, double> tril;
  for (const auto& [pos, value] : entries) {
    auto [i, j] = pos;
    if (i < j) continue;
    tril[{i, j}] = value;
    if (i != j) {
      auto mirror = entries.find({j, i});
      if (mirror != entries.end()) {
        double delta = std::abs(value - mirror->second);
        if (delta > kSymmetryTol * std::max({1.0, std::abs(value), std::abs(mirror->second)}))
          throw AsymmetricHessian(j, i, delta);
      }
    }
  }
  for (const auto& [pos, value] : entries) {
    auto [i, j] = pos;
    if (i < j && tril.find({j, i}) == tril.end()) tril[{j, i}] = value;
  }

  data->tril.reserve(tril.size());
  std::vector<Triplet> full;
  full.reserve(2 * tril.size());
  for (const auto& [pos, value] : tril) {
    auto [i, j] = pos;
    data->tril.emplace_back(i, j, value);
    full.emplace_back(i, j, value);
    if (i != j) full.emplace_back(j, i, value);
  }
  data->hessian.resize(n, n);
  data->hessian.setFromTriplets(full.begin(), full.end());
  data->hessian.makeCompressed();
  data_ = std::move(data);
}

double QuadraticProblem::value(const Vector& x) const {
  return 0.5 * x.dot(data_->hessian * x) + data_->linear.dot(x) + data_->constant;
}

Vector QuadraticProblem::gradient(const Vector& x) const {
  return data_->hessian * x + data_->linear;
}

BoundedProblem QuadraticProblem::interface() const {
  BoundedProblem p;
  p.n = data_->n;
  p.lower = data_->lower;
  p.upper = data_->upper;
  auto data = data_;
  p.value = [data](const Vector& x) {
    return 0.5 * x.dot(data->hessian * x) + data->linear.dot(x) + data->constant;
  };
  p.gradient = [data](const Vector& x) -> Vector { return data->hessian * x + data->linear; };
  p.hessian = [data](const Vector&) { return data->hessian; };
  return p;
}

void validate(const BoundedProblem& problem) {
  for (int i = 0; i < problem.n; ++i)
    if (!(problem.lower[i] < problem.upper[i])) throw CrossedBounds(i);

  // Symmetry probe at one interior point.
  Vector x(problem.n);
  for (int i = 0; i < problem.n; ++i) {
    double l = problem.lower[i], u = problem.upper[i];
    if (is_finite(l) && is_finite(u)) x[i] = 0.5 * (l + u);
    else if (is_finite(l)) x[i] = l + 1.0;
    else if (is_finite(u)) x[i] = u - 1.0;
    else x[i] = 0.0;
  }
  Matrix h = Matrix(problem.hessian(x));
  for (int i = 0; i < problem.n; ++i) {
    for (int j = i + 1; j < problem.n; ++j) {
      double delta = std::abs(h(i, j) - h(j, i));
      if (delta > kSymmetryTol * std::max({1.0, std::abs(h(i, j)), std::abs(h(j, i))}))
        throw AsymmetricHessian(i, j, delta);
    }
  }
}

std::vector<BoundClass> bound_classes(const Vector& lower, const Vector& upper) {
  std::vector<BoundClass> classes(lower.size());
  for (int i = 0; i < lower.size(); ++i) {
    bool fl = is_finite(lower[i]), fu = is_finite(upper[i]);
    classes[i] = fl ? (fu ? BoundClass::TwoSided : BoundClass::LowerOnly)
                    : (fu ? BoundClass::UpperOnly : BoundClass::Free);
  }
  return classes;
}

std::vector<BoundClass> bound_classes(const BoundedProblem& problem) {
  return bound_classes(problem.lower, problem.upper);
}

namespace {

struct Tokenizer {
  std::vector<std::pair<std::string, int>> tokens;  // token, 1-based line
  std::size_t pos = 0;

  explicit Tokenizer(const std::string& text) {
    std::istringstream lines(text);
    std::string line;
    int number = 0;
    while (std::getline(lines, line)) {
      ++number;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream words(line);
      std::string word;
      while (words >> word) tokens.emplace_back(word, number);
    }
  }

  bool done() const { return pos >= tokens.size(); }
  int line() const { return done() ? (tokens.empty() ? 1 : tokens.back().second) : tokens[pos].second; }
  std::string next(const char* expectation) {
    if (done()) throw ParseError(line(), std::string("missing ") + expectation);
    return tokens[pos++].first;
  }
  double next_value(const char* expectation) {
    int at = line();
    std::string tok = next(expectation);
    if (tok == "inf") return kInfinity;
    if (tok == "-inf") return -kInfinity;
    try {
      std::size_t used = 0;
      double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw ParseError(at, "expected a number, got '" + tok + "'");
    }
  }
  long next_integer(const char* expectation) {
    int at = line();
    std::string tok = next(expectation);
    try {
      std::size_t used = 0;
      long v = std::stol(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw ParseError(at, "expected an integer, got '" + tok + "'");
    }
  }
};

}  // namespace

QuadraticProblem parse_problem(const std::string& text) {
  Tokenizer in(text);
  if (in.next("'qp' header") != "qp") throw ParseError(in.line(), "expected 'qp <n>' header");
  long n = in.next_integer("dimension");
  if (n <= 0) throw ParseError(in.line(), "dimension must be positive");

  std::vector<Triplet> triplets;
  Vector linear = Vector::Zero(n), lower(n), upper(n);
  lower.setConstant(-kInfinity);
  upper.setConstant(kInfinity);
  bool seen_c = false, seen_l = false, seen_u = false;

  if (in.done() || in.next("'H' section") != "H")
    throw ParseError(in.line(), "expected 'H' section");
  while (!in.done()) {
    std::string tok = in.tokens[in.pos].first;
    if (tok == "c" || tok == "l" || tok == "u") break;
    int at = in.line();
    long i = in.next_integer("row index");
    long j = in.next_integer("column index");
    double v = in.next_value("entry value");
    if (i < 0 || i >= n || j < 0 || j >= n)
      throw ParseError(at, "Hessian index out of range");
    triplets.emplace_back(static_cast<int>(i), static_cast<int>(j), v);
  }
  while (!in.done()) {
    std::string section = in.next("section name");
    Vector* target = nullptr;
    if (section == "c") { target = &linear; seen_c = true; }
    else if (section == "l") { target = &lower; seen_l = true; }
    else if (section == "u") { target = &upper; seen_u = true; }
    else throw ParseError(in.line(), "unknown section '" + section + "'");
    for (long k = 0; k < n; ++k) (*target)[k] = in.next_value("vector entry");
  }
  if (!seen_c) throw ParseError(in.line(), "missing 'c' section");
  if (!seen_l) throw ParseError(in.line(), "missing 'l' section");
  if (!seen_u) throw ParseError(in.line(), "missing 'u' section");

  return QuadraticProblem(static_cast<int>(n), triplets, std::move(linear), 0.0,
                          std::move(lower), std::move(upper));
}

std::string serialize_problem(const QuadraticProblem& problem) {
  std::string out;
  out += "qp " + std::to_string(problem.dimension()) + "\n";
  out += "H\n";
  for (const Triplet& t : problem.lower_triplets())
    out += std::to_string(t.row()) + " " + std::to_string(t.col()) + " " +
           format_value(t.value()) + "\n";
  auto section = [&out](const char* name, const Vector& v) {
    out += name;
    out += "\n";
    for (int i = 0; i < v.size(); ++i) out += format_value(v[i]) + "\n";
  };
  section("c", problem.linear());
  section("l", problem.lower());
  section("u", problem.upper());
  return out;
}

}  // namespace ipbox

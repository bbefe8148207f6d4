// Command-line frontend: solve problem files, run the error-sweep and
// iteration-table experiments, and generate random problems.

#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "ipbox/harness.hpp"
#include "ipbox/ipm.hpp"
#include "ipbox/problem.hpp"

namespace {

using namespace ipbox;

constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;
constexpr int kExitIo = 3;

struct CliOptions {
  SolverConfig config;
  GeneratorSpec gen;
  std::string alg = "newton";
  std::string bound_style = "mixed";
  std::string mus;
  std::string seeds = "1";
  std::string out_dir = ".";
  std::string input_file;
  std::string output_file;
  std::string algs = "newton,aNS,aNC,intermediate,higher";
  int jobs = 1;
  int row = 0;
  bool no_fallback = false;
  bool tau_a_set = false, tau_i_set = false;
};

Algorithm parse_algorithm(const std::string& name) {
  if (name == "newton") return Algorithm::Newton;
  if (name == "aNS") return Algorithm::ApproxSchur;
  if (name == "aNC") return Algorithm::ApproxComp;
  if (name == "intermediate") return Algorithm::Intermediate;
  if (name == "higher") return Algorithm::HigherOrder;
  throw CLI::ValidationError("--alg", "unknown algorithm '" + name + "'");
}

BoundStyle parse_bound_style(const std::string& name) {
  if (name == "lower") return BoundStyle::LowerOnly;
  if (name == "two") return BoundStyle::TwoSided;
  if (name == "mixed") return BoundStyle::Mixed;
  throw CLI::ValidationError("--bound-style", "unknown style '" + name + "'");
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  if (text.find(',') == std::string::npos) {
    long count = std::stol(text);
    if (count <= 0) throw CLI::ValidationError("--seeds", "seed count must be positive");
    for (long s = 0; s < count; ++s) seeds.push_back(static_cast<std::uint64_t>(s));
    return seeds;
  }
  std::stringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) seeds.push_back(std::stoull(tok));
  if (seeds.empty()) throw CLI::ValidationError("--seeds", "empty seed list");
  return seeds;
}

// "A:B" expands to the sigma-geometric ladder from A down to B; a comma list
// is taken verbatim.
std::vector<double> parse_mus(const std::string& text, double sigma) {
  std::vector<double> mus;
  auto colon = text.find(':');
  if (colon != std::string::npos) {
    double hi = std::stod(text.substr(0, colon));
    double lo = std::stod(text.substr(colon + 1));
    if (!(hi > 0.0) || !(lo > 0.0) || lo > hi)
      throw CLI::ValidationError("--mus", "need A >= B > 0 in A:B");
    for (double mu = hi; mu >= lo * (1.0 - 1e-9); mu *= sigma) mus.push_back(mu);
    return mus;
  }
  std::stringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) mus.push_back(std::stod(tok));
  if (mus.empty()) throw CLI::ValidationError("--mus", "empty mu list");
  return mus;
}

std::string fmtg(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string describe_config(const SolverConfig& c) {
  std::string s;
  s += "mu0=" + fmtg(c.mu0) + " sigma=" + fmtg(c.sigma) + " epsilon=" + fmtg(c.epsilon);
  s += " boundary_fraction=" + fmtg(c.boundary_fraction);
  s += " max_iters_per_mu=" + std::to_string(c.max_iters_per_mu);
  s += " mu_min=" + fmtg(c.mu_min);
  s += " tau_a_exponent=" + fmtg(c.thresholds.tau_a_exponent);
  s += " tau_i_exponent=" + fmtg(c.thresholds.tau_i_exponent);
  s += std::string(" per_algorithm_thresholds=") + (c.per_algorithm_thresholds ? "1" : "0");
  s += std::string(" newton_fallback=") + (c.newton_fallback ? "1" : "0");
  s += std::string(" dl_active=") +
       (c.variant.dlambda_active == DlActiveSource::LeastSquares ? "ls" : "b");
  s += std::string(" dl_inactive=") +
       (c.variant.dlambda_inactive == DlInactiveSource::LeastSquares ? "ls" : "C");
  s += std::string(" intermediate_dx=") +
       (c.intermediate_dx == DxActiveSource::Schur ? "S" : "C");
  s += std::string(" intermediate_dlambda=") + (c.intermediate_dlambda ? "1" : "0");
  return s;
}

std::string describe_generator(const GeneratorSpec& g, const std::string& bound_style) {
  std::string s;
  s += "n=" + std::to_string(g.n) + " frac_inactive=" + fmtg(g.frac_inactive);
  s += " density=" + fmtg(g.density) + " bound_style=" + bound_style;
  s += " magnitude=" + fmtg(g.magnitude) + " diag_shift=" + fmtg(g.diag_shift);
  return s;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot open " + path.string());
  out << content;
  if (!out) throw std::ios_base::failure("cannot write " + path.string());
}

void apply_common(CliOptions& opt) {
  if (opt.row != 0) {
    SolverConfig preset = SolverConfig::newton_like_preset(opt.row);
    opt.config.intermediate_dx = preset.intermediate_dx;
    opt.config.intermediate_dlambda = preset.intermediate_dlambda;
    if (!opt.tau_a_set) opt.config.thresholds.tau_a_exponent = preset.thresholds.tau_a_exponent;
    if (!opt.tau_i_set) opt.config.thresholds.tau_i_exponent = preset.thresholds.tau_i_exponent;
    opt.config.per_algorithm_thresholds = false;
  }
  if (opt.tau_a_set || opt.tau_i_set) opt.config.per_algorithm_thresholds = false;
  if (opt.no_fallback) opt.config.newton_fallback = false;
  opt.gen.bound_style = parse_bound_style(opt.bound_style);
}

// Fans f(seed-index) over a thread pool; results land at their index.
template <typename F>
void for_each_seed(int jobs, std::size_t count, F&& f) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t k = 0; k < count; ++k) f(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next.fetch_add(1); k < count; k = next.fetch_add(1)) f(k);
  };
  std::vector<std::thread> pool;
  int width = std::min<int>(jobs, static_cast<int>(count));
  pool.reserve(width);
  for (int t = 0; t < width; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

int run_solve(CliOptions& opt) {
  apply_common(opt);
  Algorithm alg = parse_algorithm(opt.alg);

  std::ifstream in(opt.input_file, std::ios::binary);
  if (!in) {
    std::fprintf(stderr, "error: cannot open '%s'\n", opt.input_file.c_str());
    return kExitIo;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();

  QuadraticProblem qp = parse_problem(buffer.str());
  BoundedProblem problem = qp.interface();
  validate(problem);

  std::printf("# config: alg=%s %s\n", algorithm_name(alg),
              describe_config(opt.config).c_str());
  std::printf("# problem: %s (n=%d)\n", opt.input_file.c_str(), problem.n);

  RunTrace trace = solve(problem, opt.config, alg);

  std::printf("%5s %12s %12s %12s %8s %8s %6s %-9s %s\n", "iter", "mu", "|F_mu|",
              "|F_0|", "alpha_p", "alpha_d", "|I_x|", "dir", "fb");
  for (const IterationRecord& r : trace.records) {
    char ix[16] = "";
    if (r.inactive_count >= 0) std::snprintf(ix, sizeof(ix), "%d", r.inactive_count);
    std::printf("%5d %12.4e %12.4e %12.4e %8.4f %8.4f %6s %-9s %s\n", r.iteration, r.mu,
                r.f_mu_norm, r.f0_norm, r.alpha_p, r.alpha_d, ix, r.provenance.c_str(),
                r.fallback ? "*" : "");
  }
  std::printf("outcome: %s after %d iterations, fallbacks=%d\n",
              outcome_name(trace.outcome), trace.total_iterations(), trace.fallback_count);
  if (!trace.error.empty()) std::printf("error: %s\n", trace.error.c_str());
  std::printf("final KKT residual ||F_0|| = %.6e\n", trace.final_f0);
  return trace.outcome == Outcome::Converged ? 0 : kExitSolver;
}

int run_sweep(CliOptions& opt) {
  apply_common(opt);
  std::vector<std::uint64_t> seeds = parse_seeds(opt.seeds);
  std::vector<double> mus =
      parse_mus(opt.mus.empty() ? "1e-2:1e-8" : opt.mus, opt.config.sigma);

  std::string seed_text;
  for (std::size_t k = 0; k < seeds.size(); ++k)
    seed_text += (k ? "," : "") + std::to_string(seeds[k]);
  std::string comment = "ipbox sweep\nconfig: " + describe_config(opt.config) +
                        "\ngenerator: " + describe_generator(opt.gen, opt.bound_style) +
                        "\nseeds: " + seed_text;
  std::printf("# %s\n", describe_config(opt.config).c_str());
  std::printf("# generator: %s seeds=%s\n",
              describe_generator(opt.gen, opt.bound_style).c_str(), seed_text.c_str());

  std::vector<std::vector<ErrorRecord>> sweeps(seeds.size());
  std::vector<std::string> failures(seeds.size());
  for_each_seed(opt.jobs, seeds.size(), [&](std::size_t k) {
    try {
      GeneratorSpec gen = opt.gen;
      gen.seed = seeds[k];
      CertifiedProblem certified = generate(gen);
      sweeps[k] = error_sweep(certified, mus, opt.config);
    } catch (const std::exception& e) {
      failures[k] = e.what();
    }
  });
  for (std::size_t k = 0; k < seeds.size(); ++k) {
    if (!failures[k].empty()) {
      std::fprintf(stderr, "error: seed %llu: %s\n",
                   static_cast<unsigned long long>(seeds[k]), failures[k].c_str());
      return kExitSolver;
    }
  }

  std::vector<ErrorRecord> mean = mean_records(sweeps);
  std::vector<ErrorRecord> sd = stddev_records(sweeps);
  std::filesystem::path dir(opt.out_dir);
  std::filesystem::create_directories(dir);
  write_file(dir / "sweep.csv", export_csv(mean, comment));
  write_file(dir / "sweep.svg",
             export_svg(mean, seeds.size() > 1 ? &sd : nullptr, comment));
  std::printf("wrote %s and %s (%zu mu values, %zu seeds)\n",
              (dir / "sweep.csv").c_str(), (dir / "sweep.svg").c_str(), mus.size(),
              seeds.size());
  return 0;
}

int run_table(CliOptions& opt) {
  apply_common(opt);
  std::vector<std::uint64_t> seeds = parse_seeds(opt.seeds);
  std::vector<double> mus = parse_mus(
      opt.mus.empty() ? "1e1,1e0,1e-2,1e-3,1e-5,1e-6,1e-8,1e-9,1e-10" : opt.mus,
      opt.config.sigma);

  std::vector<Algorithm> algorithms;
  {
    std::stringstream in(opt.algs);
    std::string tok;
    while (std::getline(in, tok, ',')) algorithms.push_back(parse_algorithm(tok));
  }

  std::string seed_text;
  for (std::size_t k = 0; k < seeds.size(); ++k)
    seed_text += (k ? "," : "") + std::to_string(seeds[k]);
  std::string comment = "ipbox table\nconfig: " + describe_config(opt.config) +
                        "\ngenerator: " + describe_generator(opt.gen, opt.bound_style) +
                        "\nseeds: " + seed_text;
  std::printf("# %s\n", describe_config(opt.config).c_str());
  std::printf("# generator: %s seeds=%s\n",
              describe_generator(opt.gen, opt.bound_style).c_str(), seed_text.c_str());

  std::vector<std::vector<TableRow>> parts(seeds.size());
  std::vector<std::string> failures(seeds.size());
  for_each_seed(opt.jobs, seeds.size(), [&](std::size_t k) {
    try {
      GeneratorSpec gen = opt.gen;
      gen.seed = seeds[k];
      CertifiedProblem certified = generate(gen);
      std::vector<std::pair<std::string, BoundedProblem>> problems;
      problems.emplace_back("gen" + std::to_string(seeds[k]),
                            certified.problem.interface());
      parts[k] = iteration_table(problems, algorithms, mus, opt.config);
    } catch (const std::exception& e) {
      failures[k] = e.what();
    }
  });
  std::vector<TableRow> rows;
  for (std::size_t k = 0; k < seeds.size(); ++k) {
    if (!failures[k].empty()) {
      std::fprintf(stderr, "error: seed %llu: %s\n",
                   static_cast<unsigned long long>(seeds[k]), failures[k].c_str());
      return kExitSolver;
    }
    rows.insert(rows.end(), parts[k].begin(), parts[k].end());
  }

  std::filesystem::path dir(opt.out_dir);
  std::filesystem::create_directories(dir);
  write_file(dir / "table.csv", export_csv(rows, comment));
  std::printf("wrote %s (%zu rows)\n", (dir / "table.csv").c_str(), rows.size());
  return 0;
}

int run_gen(CliOptions& opt) {
  apply_common(opt);
  CertifiedProblem certified = generate(opt.gen);
  std::string text = "# generator: " + describe_generator(opt.gen, opt.bound_style) +
                     " seed=" + std::to_string(opt.gen.seed) + "\n" +
                     serialize_problem(certified.problem);
  if (opt.output_file.empty() || opt.output_file == "-") {
    std::fputs(text.c_str(), stdout);
  } else {
    write_file(opt.output_file, text);
    std::printf("# generator: %s seed=%llu\nwrote %s (n=%d)\n",
                describe_generator(opt.gen, opt.bound_style).c_str(),
                static_cast<unsigned long long>(opt.gen.seed), opt.output_file.c_str(),
                certified.problem.dimension());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bound-constrained interior-point solver and experiment harness"};
  app.require_subcommand(1);
  CliOptions opt;

  auto add_solver_flags = [&](CLI::App* cmd) {
    cmd->add_option("--mu0", opt.config.mu0, "initial barrier parameter");
    cmd->add_option("--sigma", opt.config.sigma, "mu reduction factor")
        ->check(CLI::Range(1e-6, 0.999999));
    cmd->add_option("--epsilon", opt.config.epsilon, "termination tolerance on ||F_0||");
    cmd->add_option("--boundary-fraction", opt.config.boundary_fraction,
                    "fraction-to-boundary constant")
        ->check(CLI::Range(1e-6, 0.999999));
    cmd->add_option("--max-iters-per-mu", opt.config.max_iters_per_mu,
                    "iteration cap at one mu");
    cmd->add_option("--mu-min", opt.config.mu_min, "mu floor");
    cmd->add_option("--tau-a", opt.config.thresholds.tau_a_exponent,
                    "active-set threshold exponent (tau_A = mu^exp)")
        ->each([&](const std::string&) { opt.tau_a_set = true; });
    cmd->add_option("--tau-i", opt.config.thresholds.tau_i_exponent,
                    "inactive-multiplier threshold exponent (tau_I = mu^exp)")
        ->each([&](const std::string&) { opt.tau_i_set = true; });
    cmd->add_flag("--no-fallback", opt.no_fallback, "disable the Newton fallback");
    std::map<std::string, DlActiveSource> dl_a{{"ls", DlActiveSource::LeastSquares},
                                               {"b", DlActiveSource::BlockRow}};
    cmd->add_option("--dl-active", opt.config.variant.dlambda_active,
                    "active multiplier recovery (ls|b)")
        ->transform(CLI::CheckedTransformer(dl_a));
    std::map<std::string, DlInactiveSource> dl_i{{"ls", DlInactiveSource::LeastSquares},
                                                 {"C", DlInactiveSource::Comp}};
    cmd->add_option("--dl-inactive", opt.config.variant.dlambda_inactive,
                    "inactive multiplier recovery (ls|C)")
        ->transform(CLI::CheckedTransformer(dl_i));
    cmd->add_option("--row", opt.row, "Newton-like preset row (1|2|3)")
        ->check(CLI::Range(1, 3));
    std::map<std::string, DxActiveSource> dx{{"S", DxActiveSource::Schur},
                                             {"C", DxActiveSource::Comp}};
    cmd->add_option("--intermediate-dx", opt.config.intermediate_dx,
                    "intermediate-step dx source (S|C)")
        ->transform(CLI::CheckedTransformer(dx));
    cmd->add_option("--intermediate-dlambda", opt.config.intermediate_dlambda,
                    "include the multiplier part of the intermediate step");
  };
  auto add_generator_flags = [&](CLI::App* cmd) {
    cmd->add_option("--n", opt.gen.n, "problem dimension");
    cmd->add_option("--frac-inactive", opt.gen.frac_inactive,
                    "fraction of variables inactive at the solution")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--density", opt.gen.density, "Hessian off-diagonal fill fraction")
        ->check(CLI::Range(1e-6, 1.0));
    cmd->add_option("--bound-style", opt.bound_style, "lower|two|mixed");
    cmd->add_option("--magnitude", opt.gen.magnitude,
                    "scale of the Theta(1) gaps and multipliers");
    cmd->add_option("--diag-shift", opt.gen.diag_shift, "positive definiteness margin");
  };

  CLI::App* solve_cmd = app.add_subcommand("solve", "solve a problem file");
  solve_cmd->add_option("--alg", opt.alg, "newton|aNS|aNC|intermediate|higher");
  solve_cmd->add_option("file", opt.input_file, "problem file")->required();
  add_solver_flags(solve_cmd);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "error-sweep experiment");
  sweep_cmd->add_option("--seeds", opt.seeds, "seed count K (0..K-1) or comma list");
  sweep_cmd->add_option("--mus", opt.mus, "A:B sigma-ladder or comma list");
  sweep_cmd->add_option("--out", opt.out_dir, "output directory");
  sweep_cmd->add_option("--jobs", opt.jobs, "parallel seed workers")
      ->check(CLI::Range(1, 256));
  add_generator_flags(sweep_cmd);
  add_solver_flags(sweep_cmd);

  CLI::App* table_cmd = app.add_subcommand("table", "iteration-table experiment");
  table_cmd->add_option("--seeds", opt.seeds, "seed count K (0..K-1) or comma list");
  table_cmd->add_option("--mus", opt.mus, "mu checkpoints (A:B ladder or comma list)");
  table_cmd->add_option("--algs", opt.algs, "comma list of algorithms");
  table_cmd->add_option("--out", opt.out_dir, "output directory");
  table_cmd->add_option("--jobs", opt.jobs, "parallel seed workers")
      ->check(CLI::Range(1, 256));
  add_generator_flags(table_cmd);
  add_solver_flags(table_cmd);

  CLI::App* gen_cmd = app.add_subcommand("gen", "generate a problem file");
  gen_cmd->add_option("--seed", opt.gen.seed, "generator seed");
  gen_cmd->add_option("-o,--output", opt.output_file, "output path ('-' for stdout)");
  add_generator_flags(gen_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (solve_cmd->parsed()) return run_solve(opt);
    if (sweep_cmd->parsed()) return run_sweep(opt);
    if (table_cmd->parsed()) return run_table(opt);
    return run_gen(opt);
  } catch (const CLI::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::ios_base::failure& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSolver;
  }
}

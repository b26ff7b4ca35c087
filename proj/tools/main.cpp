// Command-line workbench: exact solves, dropout-SGD sweeps, landscape
// grids, and the self-check suite, all emitting CSV/SVG artifacts.
//
// Exit codes: 0 success, 1 failed verification check, 2 usage or
// config error (bad flags, malformed CSV), 3 numerical runtime error
// (divergence, non-PSD input, iteration cap).

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "droplin/csv.hpp"
#include "droplin/eig.hpp"
#include "droplin/errors.hpp"
#include "droplin/generate.hpp"
#include "droplin/objective.hpp"
#include "droplin/rng.hpp"
#include "droplin/sgd.hpp"
#include "droplin/solver.hpp"
#include "droplin/svd.hpp"
#include "droplin/verify.hpp"
#include "svg.hpp"

namespace fs = std::filesystem;
using namespace droplin;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// Target selection shared by solve and train: exactly one of a CSV
// file, a 1x1 scalar, or a generated instance.
struct TargetSel {
  std::string path;
  double scalar = 0.0;
  std::vector<double> gen;
  CLI::Option* op_path = nullptr;
  CLI::Option* op_scalar = nullptr;
  CLI::Option* op_gen = nullptr;

  void attach(CLI::App* cmd) {
    op_path = cmd->add_option("--m", path, "target matrix, CSV file");
    op_scalar = cmd->add_option("--scalar", scalar, "1x1 target value");
    op_gen = cmd->add_option(
                    "--gen", gen,
                    "generated target d1,d2,tau,seed; spectrum exp(-i/tau), "
                    "tau<=0 picks min(d1,d2)/6")
                 ->delimiter(',')
                 ->expected(4);
  }

  DenseMatrix resolve(std::string& label) const {
    const int given = (op_path->count() > 0) + (op_scalar->count() > 0) +
                      (op_gen->count() > 0);
    if (given != 1)
      throw UsageError(
          "pass exactly one target: --m FILE, --scalar X, or --gen "
          "d1,d2,tau,seed");
    if (op_path->count()) {
      label = "csv(" + path + ")";
      return read_matrix_csv_file(path);
    }
    if (op_scalar->count()) {
      label = "scalar(" + num(scalar) + ")";
      DenseMatrix m(1, 1);
      m(0, 0) = scalar;
      return m;
    }
    if (gen.size() != 4)
      throw UsageError("--gen needs exactly d1,d2,tau,seed");
    const double d1 = gen[0], d2 = gen[1], tau = gen[2], seed = gen[3];
    if (d1 < 1.0 || d2 < 1.0 || d1 != std::floor(d1) || d2 != std::floor(d2) ||
        seed < 0.0 || seed != std::floor(seed))
      throw UsageError("--gen needs integer dims >= 1 and an integer seed");
    label = "gen(" + num(d1) + "," + num(d2) + "," + num(tau) + "," +
            num(seed) + ")";
    return generated_instance(static_cast<std::size_t>(d1),
                              static_cast<std::size_t>(d2), tau,
                              static_cast<std::uint64_t>(seed));
  }
};

// Flat key=value config files, applied after flag parsing so that
// flags win: a key is dropped when its option (or one it excludes)
// already has command-line results.
void apply_flat_config(CLI::App* cmd, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read config file " + path);
  auto trim = [](std::string s) {
    const std::size_t a = s.find_first_not_of(" \t\r");
    const std::size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';') continue;
    const std::size_t eq = stripped.find('=');
    const std::string where = path + ":" + std::to_string(lineno);
    if (eq == std::string::npos)
      throw UsageError(where + ": expected key=value");
    const std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
        value.back() == value.front())
      value = value.substr(1, value.size() - 2);
    if (key.empty()) throw UsageError(where + ": empty key");
    if (key == "config")
      throw UsageError(where + ": config files cannot nest 'config'");
    CLI::Option* op = cmd->get_option_no_throw("--" + key);
    if (!op) op = cmd->get_option_no_throw(key);
    if (!op) throw UsageError(where + ": unknown key '" + key + "'");
    if (op->count() > 0) continue;
    bool shadowed = false;
    for (const CLI::Option* other : op->get_excludes())
      shadowed = shadowed || other->count() > 0;
    if (shadowed) continue;
    try {
      op->add_result(value);
      op->run_callback();
    } catch (const CLI::ParseError& e) {
      throw UsageError(where + ": bad value for '" + key + "': " + e.what());
    }
  }
}

// --theta wins when given (converted to lambda); otherwise the --lambda
// list, defaulting to {1}.
std::vector<double> resolve_lambdas(const std::vector<double>& lambdas,
                                    CLI::Option* op_lambda, double theta,
                                    CLI::Option* op_theta) {
  if (op_theta->count() && op_lambda->count())
    throw UsageError("--lambda and --theta are mutually exclusive");
  if (op_theta->count()) {
    if (!(theta > 0.0 && theta <= 1.0))
      throw UsageError("--theta must lie in (0, 1]");
    return {DropoutConfig::from_theta(theta).lambda};
  }
  std::vector<double> out =
      op_lambda->count() ? lambdas : std::vector<double>{1.0};
  if (out.empty()) throw UsageError("--lambda needs at least one value");
  for (double l : out)
    if (!(l >= 0.0)) throw UsageError("--lambda values must be >= 0");
  return out;
}

double single_lambda(const std::vector<double>& ls) {
  if (ls.size() != 1)
    throw UsageError("this command takes exactly one --lambda value");
  return ls[0];
}

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  f << body;
  if (!f) throw Error("write failed: " + path);
}

// ---- solve ----------------------------------------------------------

struct SolveOpts {
  TargetSel target;
  std::size_t r = 0;
  std::vector<double> lambdas;
  double theta = 0.5;
  bool tied = false;
  std::string out = "out";
  std::string config;
  CLI::Option* op_lambda = nullptr;
  CLI::Option* op_theta = nullptr;
  CLI::Option* op_r = nullptr;
  CLI::Option* op_config = nullptr;
};

int run_solve(const SolveOpts& o) {
  std::string label;
  const DenseMatrix m = o.target.resolve(label);
  const double lambda =
      single_lambda(resolve_lambdas(o.lambdas, o.op_lambda, o.theta, o.op_theta));
  const std::size_t r =
      o.op_r->count() ? o.r : std::min(m.rows(), m.cols());

  const GlobalOptimum sol =
      o.tied ? solve_tied(m, r, lambda) : solve_general(m, r, lambda);

  fs::create_directories(o.out);
  write_matrix_csv_file(o.out + "/U.csv", sol.factors.u);
  write_matrix_csv_file(o.out + "/V.csv", sol.factors.v);
  write_matrix_csv_file(o.out + "/product.csv", sol.product);

  std::ostringstream s;
  s << "command=solve\n"
    << "target=" << label << "\n"
    << "rows=" << m.rows() << "\ncols=" << m.cols() << "\n"
    << "r=" << r << "\n"
    << "lambda=" << num(lambda) << "\n"
    << "tied=" << (o.tied ? 1 : 0) << "\n"
    << "regularization=" << (lambda == 0.0 ? "none" : "dropout") << "\n"
    << "rho=" << sol.level.rho << "\n"
    << "alpha=" << format_full(sol.level.alpha) << "\n"
    << "kappa=" << format_full(sol.level.kappa) << "\n"
    << "value=" << format_full(sol.value) << "\n";
  write_text_file(o.out + "/summary.txt", s.str());

  std::cout << "solve: rho=" << sol.level.rho << " alpha=" << num(sol.level.alpha)
            << " value=" << num(sol.value) << " -> " << o.out << "\n";
  return 0;
}

// ---- train ----------------------------------------------------------

struct TrainOpts {
  TargetSel target;
  std::size_t r = 0;
  std::vector<double> lambdas;
  double theta = 0.5;
  double eta = 1e-2;
  long steps = 200000;
  std::uint64_t seed = 1;
  std::size_t runs = 1;
  std::size_t jobs = 1;
  bool tied = false;
  double decay_t0 = 0.0;
  double init_scale = 0.5;
  long record_stride = 0;
  std::string out = "out";
  std::string config;
  CLI::Option* op_lambda = nullptr;
  CLI::Option* op_theta = nullptr;
  CLI::Option* op_r = nullptr;
  CLI::Option* op_config = nullptr;
};

struct RunOutcome {
  bool ok = false;
  bool diverged = false;
  long diverged_step = 0;
  double final_objective = 0.0;
  double final_variance = 0.0;
  std::uint64_t seed = 0;
  std::string dir;
  std::exception_ptr error;
};

int run_train(const TrainOpts& o) {
  std::string label;
  const DenseMatrix m = o.target.resolve(label);
  const std::vector<double> lambdas =
      resolve_lambdas(o.lambdas, o.op_lambda, o.theta, o.op_theta);
  const std::size_t r =
      o.op_r->count() ? o.r : std::min(m.rows(), m.cols());
  if (!(o.eta > 0.0)) throw UsageError("--eta must be positive");
  if (o.steps < 1) throw UsageError("--steps must be >= 1");
  if (o.runs < 1) throw UsageError("--runs must be >= 1");

  // Spectrum of the target fixes the analytic optimum per lambda.
  std::vector<double> spectrum;
  if (o.tied) {
    spectrum = sym_eig(m).eigvals;
    for (double& v : spectrum) v = std::max(v, 0.0);
  } else {
    spectrum = svd_compact(m).singulars;
  }
  std::vector<double> optima(lambdas.size());
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    optima[i] = optimal_value(spectrum, r, lambdas[i]);

  fs::create_directories(o.out);
  const std::size_t total = lambdas.size() * o.runs;
  std::vector<RunOutcome> results(total);

  auto run_one = [&](std::size_t k) {
    RunOutcome res;
    const std::size_t li = k / o.runs, run_idx = k % o.runs;
    const double lambda = lambdas[li];
    res.seed = SplitMix64::substream(o.seed, stream_purpose::kSweepRun, k)
                   .next_u64();
    res.dir = o.out + "/lambda" + num(lambda) + "_run" +
              std::to_string(run_idx);
    SgdConfig cfg;
    cfg.eta = o.eta;
    cfg.steps = o.steps;
    cfg.seed = res.seed;
    cfg.init_scale = o.init_scale;
    cfg.theta = DropoutConfig::from_lambda(lambda).theta;
    cfg.decay_t0 = o.decay_t0;
    cfg.record_stride = o.record_stride;
    try {
      TrainTrace trace;
      if (o.tied) {
        trace = dropout_sgd_tied(m, r, cfg).trace;
      } else {
        trace = dropout_sgd(m, r, cfg).trace;
      }
      fs::create_directories(res.dir);
      std::ofstream tf(res.dir + "/trace.csv");
      if (!tf) throw Error("cannot write " + res.dir + "/trace.csv");
      write_trace_csv(tf, trace);
      tf.close();
      const std::string title = "train target=" + label + " r=" +
                                std::to_string(r) + " lambda=" + num(lambda) +
                                " eta=" + num(o.eta) + " steps=" +
                                std::to_string(o.steps) + " seed=" +
                                std::to_string(res.seed) +
                                (o.tied ? " tied" : "");
      tool::write_convergence_svg(res.dir + "/convergence.svg", trace,
                                  optima[li], title);
      res.final_objective = trace.objective.back();
      res.final_variance = trace.importance_variance.back();
      res.ok = true;
    } catch (const Diverged& e) {
      res.diverged = true;
      res.diverged_step = e.step;
    } catch (...) {
      res.error = std::current_exception();
    }
    return res;
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= total) return;
      results[k] = run_one(k);
    }
  };
  const std::size_t jobs = std::min(std::max<std::size_t>(o.jobs, 1), total);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (std::size_t i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  for (const RunOutcome& res : results)
    if (res.error) std::rethrow_exception(res.error);

  std::ostringstream s;
  s << "command=train target=" << label << " r=" << r << " tied="
    << (o.tied ? 1 : 0) << " eta=" << num(o.eta) << " steps=" << o.steps
    << " root_seed=" << o.seed << " runs=" << o.runs << " decay_t0="
    << num(o.decay_t0) << " init_scale=" << num(o.init_scale) << "\n"
    << "# lambda run seed final_objective optimal_value gap "
       "importance_variance regularization status\n";
  bool any_diverged = false;
  std::string first_failure;
  for (std::size_t k = 0; k < total; ++k) {
    const RunOutcome& res = results[k];
    const std::size_t li = k / o.runs, run_idx = k % o.runs;
    const double lambda = lambdas[li];
    s << num(lambda) << " " << run_idx << " " << res.seed << " ";
    if (res.ok) {
      s << format_full(res.final_objective) << " " << format_full(optima[li])
        << " " << format_full(res.final_objective - optima[li]) << " "
        << format_full(res.final_variance) << " "
        << (lambda == 0.0 ? "none" : "dropout") << " ok\n";
    } else {
      s << "- " << format_full(optima[li]) << " - - "
        << (lambda == 0.0 ? "none" : "dropout") << " diverged@"
        << res.diverged_step << "\n";
      if (!any_diverged)
        first_failure = "training diverged at step " +
                        std::to_string(res.diverged_step) + " (lambda=" +
                        num(lambda) + ", run=" + std::to_string(run_idx) +
                        ", seed=" + std::to_string(res.seed) + ")";
      any_diverged = true;
    }
  }
  write_text_file(o.out + "/summary.txt", s.str());

  for (std::size_t k = 0; k < total; ++k) {
    const RunOutcome& res = results[k];
    const double lambda = lambdas[k / o.runs];
    if (res.ok)
      std::cout << "train: lambda=" << num(lambda) << " run=" << k % o.runs
                << " final=" << num(res.final_objective) << " optimal="
                << num(optima[k / o.runs]) << " var="
                << num(res.final_variance) << "\n";
    else
      std::cout << "train: lambda=" << num(lambda) << " run=" << k % o.runs
                << " diverged at step " << res.diverged_step << "\n";
  }
  if (any_diverged) {
    std::cerr << "error: " << first_failure << "\n";
    return 3;
  }
  std::cout << "train: wrote " << total << " run(s) -> " << o.out << "\n";
  return 0;
}

// ---- landscape ------------------------------------------------------

struct LandscapeOpts {
  double m_scalar = 0.0;
  std::vector<double> lambdas;
  double theta = 0.5;
  std::size_t n = 256;
  double grid_min = -2.0;
  double grid_max = 2.0;
  std::string out = "out";
  std::string config;
  CLI::Option* op_m = nullptr;
  CLI::Option* op_lambda = nullptr;
  CLI::Option* op_theta = nullptr;
  CLI::Option* op_config = nullptr;
};

int run_landscape(const LandscapeOpts& o) {
  if (!o.op_m->count())
    throw UsageError("landscape needs --m X (scalar target)");
  const double lambda =
      single_lambda(resolve_lambdas(o.lambdas, o.op_lambda, o.theta, o.op_theta));
  if (!(o.grid_min < o.grid_max))
    throw UsageError("--grid-min must be below --grid-max");

  const LandscapeGrid grid =
      landscape_grid(o.m_scalar, lambda, o.grid_min, o.grid_max, o.n);

  fs::create_directories(o.out);
  DenseMatrix g(o.n, o.n);
  for (std::size_t i = 0; i < o.n; ++i)
    for (std::size_t j = 0; j < o.n; ++j) g(i, j) = grid.values[i * o.n + j];
  write_matrix_csv_file(o.out + "/grid.csv", g);

  const std::string title = "landscape m=" + num(o.m_scalar) + " lambda=" +
                            num(lambda) + " n=" + std::to_string(o.n) +
                            " range=[" + num(o.grid_min) + "," +
                            num(o.grid_max) + "]";
  tool::write_contour_svg(o.out + "/contour.svg", grid, title);

  std::ostringstream s;
  s << "command=landscape\n"
    << "m=" << num(o.m_scalar) << "\n"
    << "lambda=" << num(lambda) << "\n"
    << "n=" << o.n << "\n"
    << "grid_min=" << num(o.grid_min) << "\ngrid_max=" << num(o.grid_max)
    << "\n"
    << "min_value=" << format_full(grid.min_value) << "\n"
    << "argmin_u1=" << format_full(grid.argmin_u1) << "\n"
    << "argmin_u2=" << format_full(grid.argmin_u2) << "\n";
  write_text_file(o.out + "/summary.txt", s.str());

  std::cout << "landscape: min=" << num(grid.min_value) << " at ("
            << num(grid.argmin_u1) << ", " << num(grid.argmin_u2) << ") -> "
            << o.out << "\n";
  return 0;
}

// ---- verify ---------------------------------------------------------

struct VerifyOpts {
  std::vector<std::string> checks;
  bool all = false;
  std::uint64_t seed = 1;
  std::size_t mc_trials = 20;
  std::size_t mc_samples = 1000000;
  bool inject_fault = false;
  std::string out = "out";
  std::string config;
  CLI::Option* op_config = nullptr;
};

int run_verify(const VerifyOpts& o) {
  if (o.all && !o.checks.empty())
    throw UsageError("pass either --all or check names, not both");
  if (!o.all && o.checks.empty()) {
    std::string names;
    for (const std::string& n : known_check_names())
      names += (names.empty() ? "" : ", ") + n;
    throw UsageError("pick checks to run: --all or names from {" + names +
                     "}");
  }
  for (const std::string& c : o.checks) {
    const auto& known = known_check_names();
    if (std::find(known.begin(), known.end(), c) == known.end()) {
      std::string names;
      for (const std::string& n : known)
        names += (names.empty() ? "" : ", ") + n;
      throw UsageError("unknown check '" + c + "'; available: " + names);
    }
  }

  SuiteOptions opts;
  opts.mc_trials = o.mc_trials;
  opts.mc_samples = o.mc_samples;
  opts.inject_fault = o.inject_fault;
  opts.selected = o.checks;  // empty means every check

  const std::vector<CheckReport> reports = run_suite(o.seed, opts);

  fs::create_directories(o.out);
  {
    std::ofstream f(o.out + "/report.txt");
    if (!f) throw Error("cannot write " + o.out + "/report.txt");
    write_report_text(f, reports);
  }
  {
    std::ofstream f(o.out + "/report.json");
    if (!f) throw Error("cannot write " + o.out + "/report.json");
    write_report_json(f, reports);
  }
  write_report_text(std::cout, reports);
  return all_passed(reports) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "droplin: dropout-regularized matrix factorization workbench"};
  app.require_subcommand(1);

  SolveOpts so;
  CLI::App* solve = app.add_subcommand(
      "solve", "closed-form global optimum via spectral shrinkage");
  so.op_config = solve->add_option(
      "--config", so.config, "flat key=value config file; flags win");
  so.target.attach(solve);
  so.op_r = solve->add_option("--r", so.r, "factor width (default: full rank)")
                ->check(CLI::PositiveNumber);
  so.op_lambda = solve->add_option("--lambda", so.lambdas,
                                   "regularization strength")
                     ->delimiter(',');
  so.op_theta = solve->add_option("--theta", so.theta,
                                  "keep probability; lambda = (1-theta)/theta")
                    ->excludes(so.op_lambda);
  solve->add_flag("--tied", so.tied, "weight-tied solve (PSD target)");
  solve->add_option("--out", so.out, "output directory");

  TrainOpts to;
  CLI::App* train = app.add_subcommand(
      "train", "dropout-SGD sweep over lambda values and seeds");
  to.op_config = train->add_option(
      "--config", to.config, "flat key=value config file; flags win");
  to.target.attach(train);
  to.op_r = train->add_option("--r", to.r, "factor width (default: full rank)")
                ->check(CLI::PositiveNumber);
  to.op_lambda = train->add_option("--lambda", to.lambdas,
                                   "regularization strengths, comma separated")
                     ->delimiter(',');
  to.op_theta = train->add_option("--theta", to.theta,
                                  "keep probability; lambda = (1-theta)/theta")
                    ->excludes(to.op_lambda);
  train->add_option("--eta", to.eta, "step size");
  train->add_option("--steps", to.steps, "SGD steps per run");
  train->add_option("--seed", to.seed, "root seed for the sweep");
  train->add_option("--runs", to.runs, "independent runs per lambda");
  train->add_option("--jobs", to.jobs, "worker threads for the sweep");
  train->add_flag("--tied", to.tied, "weight-tied training (PSD target)");
  train->add_option("--decay-t0", to.decay_t0,
                    "step-size decay scale; 0 keeps eta constant");
  train->add_option("--init-scale", to.init_scale,
                    "initial entries uniform on [-s, s]");
  train->add_option("--record-stride", to.record_stride,
                    "steps between trace records; 0 = steps/2000");
  train->add_option("--out", to.out, "output directory");

  LandscapeOpts lo;
  CLI::App* landscape = app.add_subcommand(
      "landscape", "dense objective grid for the scalar tied problem");
  lo.op_config = landscape->add_option(
      "--config", lo.config, "flat key=value config file; flags win");
  lo.op_m = landscape->add_option("--m,--scalar", lo.m_scalar,
                                  "scalar target value");
  lo.op_lambda = landscape->add_option("--lambda", lo.lambdas,
                                       "regularization strength")
                     ->delimiter(',');
  lo.op_theta = landscape->add_option(
                              "--theta", lo.theta,
                              "keep probability; lambda = (1-theta)/theta")
                    ->excludes(lo.op_lambda);
  landscape->add_option("--n", lo.n, "grid resolution per axis")
      ->check(CLI::Range(2, 2048));
  landscape->add_option("--grid-min", lo.grid_min, "lower grid bound");
  landscape->add_option("--grid-max", lo.grid_max, "upper grid bound");
  landscape->add_option("--out", lo.out, "output directory");

  VerifyOpts vo;
  CLI::App* verify = app.add_subcommand(
      "verify", "run the numerical self-check suite and write a report");
  vo.op_config = verify->add_option(
      "--config", vo.config, "flat key=value config file; flags win");
  verify->add_option("checks", vo.checks, "check names to run");
  verify->add_flag("--all", vo.all, "run every check");
  verify->add_option("--seed", vo.seed, "suite root seed");
  verify->add_option("--mc-trials", vo.mc_trials,
                     "instances for the Monte-Carlo check");
  verify->add_option("--mc-samples", vo.mc_samples,
                     "samples per Monte-Carlo instance");
  verify->add_flag("--inject-fault", vo.inject_fault)->group("");
  verify->add_option("--out", vo.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (solve->parsed()) {
      if (so.op_config->count()) apply_flat_config(solve, so.config);
      return run_solve(so);
    }
    if (train->parsed()) {
      if (to.op_config->count()) apply_flat_config(train, to.config);
      return run_train(to);
    }
    if (landscape->parsed()) {
      if (lo.op_config->count()) apply_flat_config(landscape, lo.config);
      return run_landscape(lo);
    }
    if (verify->parsed()) {
      if (vo.op_config->count()) apply_flat_config(verify, vo.config);
      return run_verify(vo);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CsvError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Diverged& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

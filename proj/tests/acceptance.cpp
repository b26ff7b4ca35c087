// Acceptance battery: one line per criterion, exit code counts failures.
// Tolerances are pinned here on purpose; loosening one is a red flag.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "droplin/eig.hpp"
#include "droplin/equalize.hpp"
#include "droplin/generate.hpp"
#include "droplin/objective.hpp"
#include "droplin/rng.hpp"
#include "droplin/sgd.hpp"
#include "droplin/solver.hpp"
#include "droplin/svd.hpp"
#include "droplin/verify.hpp"
#include "oracle_gd.hpp"
#include "testkit.hpp"

namespace fs = std::filesystem;
using droplin::DenseMatrix;
using droplin::SplitMix64;

namespace {

struct Outcome {
  bool pass;
  std::string detail;  // measured values, shown on the result line
};

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

DenseMatrix random_gaussian(std::size_t rows, std::size_t cols,
                            SplitMix64& g) {
  DenseMatrix m(rows, cols);
  for (double& v : m.data()) v = g.next_gaussian();
  return m;
}

double column_sqnorm(const DenseMatrix& m, std::size_t j) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) s += m(i, j) * m(i, j);
  return s;
}

double max_abs(const DenseMatrix& m) {
  double w = 0.0;
  for (double v : m.data()) w = std::max(w, std::abs(v));
  return w;
}

// ---- 1: Monte-Carlo dropout objective vs closed form ----------------

Outcome criterion_mc() {
  const droplin::CheckReport r = droplin::check_mc_equivalence(20, 101, 1000000);
  return {r.passed, "worst deviation " + fmt(r.max_violation) +
                        " std errors (limit 4)"};
}

// ---- 2: equalizing rotation on 200 random matrices ------------------

Outcome criterion_equalizer() {
  SplitMix64 dims(202);
  double worst_orth = 0.0, worst_residual = 0.0, worst_drift = 0.0,
         worst_reg_increase = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = 1 + dims.next_u64() % 50;
    const std::size_t cols = 1 + dims.next_u64() % 16;
    SplitMix64 g(3000 + std::uint64_t(trial));
    const DenseMatrix u = random_gaussian(rows, cols, g);
    const droplin::EqualizeResult e = droplin::eqz(u);
    const DenseMatrix uq = u * e.q;

    DenseMatrix qtq = droplin::gram(e.q);
    for (std::size_t i = 0; i < cols; ++i) qtq(i, i) -= 1.0;
    worst_orth = std::max(worst_orth, max_abs(qtq));

    double hi = column_sqnorm(uq, 0), lo = hi;
    double before = 0.0, after = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      const double a = column_sqnorm(uq, j), b = column_sqnorm(u, j);
      hi = std::max(hi, a);
      lo = std::min(lo, a);
      after += a * a;
      before += b * b;
    }
    worst_residual = std::max(worst_residual, hi - lo);
    worst_reg_increase =
        std::max(worst_reg_increase, after - before - 1e-12 * (1.0 + before));

    const DenseMatrix drift =
        droplin::multiply_a_bt(uq, uq) - droplin::multiply_a_bt(u, u);
    worst_drift = std::max(worst_drift, max_abs(drift));
  }
  const bool pass = worst_orth <= 1e-9 && worst_residual <= 1e-8 &&
                    worst_drift <= 1e-9 && worst_reg_increase <= 0.0;
  return {pass, "orth " + fmt(worst_orth) + " (1e-9), norm spread " +
                    fmt(worst_residual) + " (1e-8), product drift " +
                    fmt(worst_drift) + " (1e-9), penalty increase " +
                    fmt(std::max(worst_reg_increase, 0.0))};
}

// ---- 3: closed form equals shrinkage thresholding -------------------

Outcome criterion_shrinkage() {
  const double lambdas[4] = {0.0, 0.1, 1.0, 5.0};
  SplitMix64 dims(303);
  double worst_product = 0.0, worst_norms = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d1 = 1 + dims.next_u64() % 12;
    const std::size_t d2 = 1 + dims.next_u64() % 8;
    const std::size_t r = 1 + dims.next_u64() % 6;
    // Keep rank(m) <= r so the threshold keeps every direction it must.
    const std::size_t rank =
        1 + dims.next_u64() % std::min({r, d1, d2});
    SplitMix64 g(4000 + std::uint64_t(trial));
    const DenseMatrix m = droplin::multiply_a_bt(
        random_gaussian(d1, rank, g), random_gaussian(d2, rank, g));
    const double lambda = lambdas[trial % 4];

    const droplin::GlobalOptimum sol = droplin::solve_general(m, r, lambda);
    worst_product =
        std::max(worst_product,
                 testkit::fro_diff(sol.product, droplin::svt(m, sol.level.alpha)));

    double nuc = 0.0;
    for (double s : droplin::svd_compact(sol.product).singulars) nuc += s;
    const double want = nuc / double(r);
    for (std::size_t j = 0; j < r; ++j) {
      const double prod = std::sqrt(column_sqnorm(sol.factors.u, j) *
                                    column_sqnorm(sol.factors.v, j));
      worst_norms = std::max(worst_norms, std::abs(prod - want));
    }
  }
  const bool pass = worst_product <= 1e-8 && worst_norms <= 1e-8;
  return {pass, "max product gap " + fmt(worst_product) +
                    ", max norm-balance gap " + fmt(worst_norms) +
                    " (limits 1e-8)"};
}

// ---- 4: multistart descent never beats the closed form --------------

Outcome criterion_oracle() {
  double worst_margin = std::numeric_limits<double>::infinity();
  std::string worst_name;
  for (const testkit::CorpusCase& c : testkit::small_corpus()) {
    const droplin::GlobalOptimum sol =
        droplin::solve_general(c.m, c.r, c.lambda);
    const double best =
        testkit::gd_multistart(c.m, c.r, c.lambda, false, 100, 500);
    const double margin = best - (sol.value - 1e-6);
    if (margin < worst_margin) {
      worst_margin = margin;
      worst_name = c.name;
    }
  }
  return {worst_margin >= 0.0,
          "tightest margin " + fmt(worst_margin) + " at " + worst_name};
}

// ---- 5: scalar landscape anchors ------------------------------------

Outcome criterion_landscape() {
  const droplin::GlobalOptimum sol =
      droplin::solve_tied(DenseMatrix::diagonal({2.0}), 2, 0.6);
  const double product_gap = std::abs(sol.product(0, 0) - 4.0 / 2.6);
  double entry_gap = 0.0;
  for (std::size_t j = 0; j < 2; ++j)
    entry_gap = std::max(entry_gap,
                         std::abs(std::abs(sol.factors.u(0, j)) - 0.87706));
  const double value_gap =
      std::abs(droplin::optimal_value({2.0}, 2, 0.6) - 0.92308);

  const droplin::LandscapeGrid grid =
      droplin::landscape_grid(2.0, 0.6, -2.0, 2.0, 256);
  const double cell = grid.spacing();
  const double argmin_gap =
      std::max(std::abs(std::abs(grid.argmin_u1) - 0.87706),
               std::abs(std::abs(grid.argmin_u2) - 0.87706));

  const bool pass = product_gap <= 1e-9 && entry_gap <= 1e-4 &&
                    value_gap <= 1e-4 && argmin_gap <= cell;
  return {pass, "product gap " + fmt(product_gap) + ", entry gap " +
                    fmt(entry_gap) + ", value gap " + fmt(value_gap) +
                    ", argmin gap " + fmt(argmin_gap) + " (cell " +
                    fmt(cell) + ")"};
}

// ---- 6: tied SGD reaches the equalized optimum ----------------------

Outcome criterion_sgd_scalar() {
  const DenseMatrix m = DenseMatrix::diagonal({2.0});
  double worst_obj = 0.0, worst_norm = 0.0;
  for (double lambda : {0.1, 0.5, 1.0}) {
    const droplin::GlobalOptimum sol = droplin::solve_tied(m, 2, lambda);
    const double opt = sol.value;
    const double want_norm = std::sqrt(sol.product(0, 0) / 2.0);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      droplin::SgdConfig cfg;
      cfg.eta = 1e-2;
      cfg.steps = 500000;
      cfg.seed = seed;
      cfg.theta = droplin::DropoutConfig::from_lambda(lambda).theta;
      cfg.decay_t0 = 1e3;
      const droplin::TiedSgdResult res = droplin::dropout_sgd_tied(m, 2, cfg);
      worst_obj =
          std::max(worst_obj, std::abs(res.trace.objective.back() - opt));
      for (std::size_t j = 0; j < 2; ++j)
        worst_norm = std::max(
            worst_norm,
            std::abs(std::sqrt(column_sqnorm(res.u, j)) - want_norm));
    }
  }
  const bool pass = worst_obj <= 1e-2 && worst_norm <= 1e-2;
  return {pass, "worst objective gap " + fmt(worst_obj) +
                    ", worst column-norm gap " + fmt(worst_norm) +
                    " (limits 1e-2)"};
}

// ---- 7: untied SGD on the generated 30x20 instance ------------------

Outcome criterion_sgd_generated() {
  const DenseMatrix m = droplin::generated_instance(30, 20, 0.0, 2026);
  const std::vector<double> spectrum = droplin::svd_compact(m).singulars;
  double worst_rel = 0.0, worst_var = 0.0;
  for (std::size_t r : {std::size_t{5}, std::size_t{20}}) {
    for (double lambda : {0.1, 0.5, 1.0}) {
      const double opt = droplin::optimal_value(spectrum, r, lambda);
      droplin::SgdConfig cfg;
      cfg.eta = 1e-2;
      cfg.steps = 600000;
      cfg.seed = 7;
      cfg.theta = droplin::DropoutConfig::from_lambda(lambda).theta;
      cfg.decay_t0 = 3e4;
      const droplin::SgdResult res = droplin::dropout_sgd(m, r, cfg);
      const double gap = std::abs(res.trace.objective.back() - opt);
      worst_rel = std::max(worst_rel, gap / (0.01 * opt + 1e-3));
      const double v0 = res.trace.importance_variance.front();
      const double v1 = res.trace.importance_variance.back();
      worst_var = std::max(worst_var, v1 / (0.01 * v0));
    }
  }
  const bool pass = worst_rel <= 1.0 && worst_var <= 1.0;
  return {pass, "objective gap at " + fmt(100.0 * worst_rel) +
                    "% of budget (1% + 1e-3), variance at " +
                    fmt(100.0 * worst_var) + "% of budget (1% of initial)"};
}

// ---- 8: identity and curvature battery ------------------------------

Outcome criterion_identities() {
  SplitMix64 g(808);
  double worst_wood = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t rho = 1 + g.next_u64() % 8;
    const std::size_t r = rho + g.next_u64() % 7;
    worst_wood = std::max(
        worst_wood,
        droplin::check_woodbury(rho, r, 5.0 * g.next_double()).max_violation);
  }

  std::vector<std::vector<double>> spectra;
  for (int i = 0; i < 100; ++i) {
    std::vector<double> s(1 + g.next_u64() % 8);
    for (double& v : s) v = 3.0 * g.next_double();
    std::sort(s.rbegin(), s.rend());
    spectra.push_back(std::move(s));
  }
  const double worst_mono =
      droplin::check_monotone_g(spectra, 6, 0.7).max_violation;

  double worst_ray = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t d = 2 + g.next_u64() % 11;
    worst_ray = std::max(
        worst_ray,
        droplin::check_rayleigh(testkit::random_symmetric(d, 8100 + i))
            .max_violation);
  }

  // Constructed non-equalized critical point: curvature along the
  // two-column rotation curve must measure -9.
  const DenseMatrix m = DenseMatrix::diagonal({3.0, 1.0});
  DenseMatrix u(2, 2);
  u(0, 0) = std::sqrt(1.5);
  const droplin::CheckReport probe = droplin::saddle_probe(u, m, 1.0);
  auto curve = [&](double t) {
    DenseMatrix ut = u;
    const double ct = std::sqrt(1.0 - t * t);
    for (std::size_t row = 0; row < 2; ++row) {
      ut(row, 0) = ct * u(row, 0) + t * u(row, 1);
      ut(row, 1) = ct * u(row, 1) - t * u(row, 0);
    }
    return droplin::tied_value(m, ut, 1.0);
  };
  auto second = [&](double h) {
    return (curve(h) - 2.0 * curve(0.0) + curve(-h)) / (h * h);
  };
  const double fd = (4.0 * second(5e-3) - second(1e-2)) / 3.0;
  const double curv_gap = std::abs(fd - (-9.0));

  const bool pass = worst_wood <= 1e-12 && worst_mono <= 1e-12 &&
                    worst_ray <= 1e-10 && probe.passed && curv_gap <= 1e-6;
  return {pass, "woodbury " + fmt(worst_wood) + " (1e-12), monotone " +
                    fmt(worst_mono) + " (1e-12), rayleigh " + fmt(worst_ray) +
                    " (1e-10), curvature " + fmt(fd) + " vs -9 (1e-6), probe " +
                    (probe.passed ? "ok" : "FAILED")};
}

// ---- 9: analytic tied gradient vs finite differences ----------------

Outcome criterion_gradient() {
  const double lambdas[4] = {0.1, 0.5, 1.0, 5.0};
  double worst_rel = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    SplitMix64 dims(900 + std::uint64_t(trial));
    const std::size_t d = 2 + dims.next_u64() % 5;
    const std::size_t r = 1 + dims.next_u64() % 4;
    const DenseMatrix m = testkit::random_symmetric(d, 9000 + trial);
    SplitMix64 g(9500 + std::uint64_t(trial));
    DenseMatrix u = random_gaussian(d, r, g);
    const double lambda = lambdas[trial % 4];

    const DenseMatrix grad = droplin::grad_tied(m, u, lambda);
    DenseMatrix fd(d, r);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < r; ++j) {
        const double h = 1e-6 * (1.0 + std::abs(u(i, j)));
        const double saved = u(i, j);
        u(i, j) = saved + h;
        const double up = droplin::tied_value(m, u, lambda);
        u(i, j) = saved - h;
        const double dn = droplin::tied_value(m, u, lambda);
        u(i, j) = saved;
        fd(i, j) = (up - dn) / (2.0 * h);
      }
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < grad.data().size(); ++k) {
      const double diff = grad.data()[k] - fd.data()[k];
      num += diff * diff;
      den += fd.data()[k] * fd.data()[k];
    }
    worst_rel = std::max(worst_rel, std::sqrt(num / std::max(den, 1e-300)));
  }
  return {worst_rel <= 1e-5,
          "worst relative error " + fmt(worst_rel) + " (limit 1e-5)"};
}

// ---- 10: training sweep determinism ---------------------------------

int run_cli(const std::string& args, const std::string& capture) {
  const std::string cmd =
      std::string(DROPLIN_CLI_PATH) + " " + args + " > " + capture + " 2>&1";
  const int rc = std::system(cmd.c_str());
  return (rc != -1 && WIFEXITED(rc)) ? WEXITSTATUS(rc) : -1;
}

std::map<std::string, std::string> tree_bytes(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) {
      std::ifstream f(e.path(), std::ios::binary);
      std::ostringstream s;
      s << f.rdbuf();
      out[fs::relative(e.path(), root).string()] = s.str();
    }
  return out;
}

Outcome criterion_determinism() {
  const fs::path root =
      fs::temp_directory_path() /
      ("droplin_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  fs::create_directories(root);
  const std::string base =
      "train --scalar 2 --r 2 --lambda 0.1,0.5,1 --runs 2 --steps 2000 "
      "--eta 0.005 --seed 5 ";
  const std::string log = (root / "log").string();
  bool ran = true;
  ran &= run_cli(base + "--jobs 1 --out " + (root / "a").string(), log) == 0;
  ran &= run_cli(base + "--jobs 1 --out " + (root / "b").string(), log) == 0;
  ran &= run_cli(base + "--jobs 4 --out " + (root / "c").string(), log) == 0;
  if (!ran) {
    fs::remove_all(root);
    return {false, "training command failed"};
  }
  const auto a = tree_bytes(root / "a");
  const bool rerun_same = a == tree_bytes(root / "b");
  const bool jobs_same = a == tree_bytes(root / "c");
  std::size_t traces = 0;
  for (const auto& [rel, bytes] : a)
    if (rel.size() > 9 && rel.compare(rel.size() - 9, 9, "trace.csv") == 0)
      ++traces;
  fs::remove_all(root);
  return {rerun_same && jobs_same && traces == 6,
          std::to_string(traces) + " trace files, rerun " +
              (rerun_same ? "identical" : "DIFFERS") + ", pool 1 vs 4 " +
              (jobs_same ? "identical" : "DIFFERS")};
}

struct Criterion {
  int id;
  const char* label;
  double time_limit;  // seconds, 0 = none
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "sampled dropout objective matches the closed form", 120.0,
       criterion_mc},
      {2, "equalizing rotation", 30.0, criterion_equalizer},
      {3, "closed-form optimum is shrinkage thresholding", 0.0,
       criterion_shrinkage},
      {4, "multistart descent certifies global optimality", 0.0,
       criterion_oracle},
      {5, "scalar landscape anchors", 0.0, criterion_landscape},
      {6, "tied SGD on the scalar target", 60.0, criterion_sgd_scalar},
      {7, "untied SGD on the generated instance", 300.0,
       criterion_sgd_generated},
      {8, "identity and curvature battery", 0.0, criterion_identities},
      {9, "tied gradient vs finite differences", 0.0, criterion_gradient},
      {10, "training sweep determinism", 0.0, criterion_determinism},
  };

  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));

  int failures = 0;
  for (const Criterion& c : all) {
    if (!wanted.empty() &&
        std::find(wanted.begin(), wanted.end(), c.id) == wanted.end())
      continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (c.time_limit > 0.0 && secs > c.time_limit) {
      out.pass = false;
      out.detail += "; over time budget " + fmt(c.time_limit) + " s";
    }
    std::printf("%s criterion %d: %s; %s [%.1f s]\n",
                out.pass ? "PASS" : "FAIL", c.id, c.label, out.detail.c_str(),
                secs);
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  return failures;
}

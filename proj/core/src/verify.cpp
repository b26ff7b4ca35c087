#include "droplin/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "droplin/eig.hpp"
#include "droplin/errors.hpp"
#include "droplin/objective.hpp"
#include "droplin/rng.hpp"
#include "droplin/solver.hpp"

namespace droplin {

namespace {

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

}  // namespace

CheckReport check_mc_equivalence(std::size_t trials, std::uint64_t seed,
                                 std::size_t n_samples,
                                 double closed_form_offset) {
  constexpr double kThetas[] = {0.3, 0.5, 0.9};
  double worst = 0.0;
  std::size_t worst_trial = 0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    SplitMix64 g = SplitMix64::substream(seed, stream_purpose::kSuite, trial);
    const std::size_t d1 = 1 + g.next_u64() % 6;
    const std::size_t d2 = 1 + g.next_u64() % 6;
    const std::size_t r = 1 + g.next_u64() % 4;
    const DropoutConfig cfg = DropoutConfig::from_theta(kThetas[trial % 3]);

    DenseMatrix m(d1, d2);
    for (double& v : m.data()) v = g.next_gaussian();
    FactorPair f{DenseMatrix(d1, r), DenseMatrix(d2, r)};
    for (double& v : f.u.data()) v = 0.7 * g.next_gaussian();
    for (double& v : f.v.data()) v = 0.7 * g.next_gaussian();

    const double closed = objective_value(m, f, cfg.lambda) + closed_form_offset;
    const McEstimate est = mc_objective(m, f, cfg, n_samples, g.next_u64());
    const double diff = std::fabs(est.mean - closed);
    const double sigmas = est.std_err > 0.0
                              ? diff / est.std_err
                              : (diff == 0.0
                                     ? 0.0
                                     : std::numeric_limits<double>::infinity());
    if (sigmas > worst) {
      worst = sigmas;
      worst_trial = trial;
    }
  }
  CheckReport rep;
  rep.name = "mc_equivalence";
  rep.max_violation = worst;
  rep.passed = worst <= check_tol::kMcSigmas;
  rep.details = "worst trial " + std::to_string(worst_trial) + ": " +
                fmt(worst) + " standard errors";
  return rep;
}

CheckReport check_woodbury(std::size_t rho, std::size_t r, double lambda) {
  if (rho < 1 || rho > r) throw Error("check_woodbury: need 1 <= rho <= r");
  const double a = lambda / static_cast<double>(r);
  const double b =
      lambda / (static_cast<double>(r) + lambda * static_cast<double>(rho));
  DenseMatrix lhs(rho, rho), rhs(rho, rho);
  for (std::size_t i = 0; i < rho; ++i)
    for (std::size_t j = 0; j < rho; ++j) {
      lhs(i, j) = (i == j ? 1.0 : 0.0) + a;
      rhs(i, j) = (i == j ? 1.0 : 0.0) - b;
    }
  const DenseMatrix res = lhs * rhs - DenseMatrix::identity(rho);
  CheckReport rep;
  rep.name = "woodbury";
  rep.max_violation = res.frobenius_norm();
  rep.passed = rep.max_violation <= check_tol::kWoodbury;
  rep.details = "rho=" + std::to_string(rho) + " r=" + std::to_string(r) +
                " lambda=" + fmt(lambda);
  return rep;
}

CheckReport check_monotone_g(const std::vector<std::vector<double>>& spectra,
                             std::size_t r, double lambda) {
  double worst = 0.0;
  std::size_t worst_idx = 0;
  for (std::size_t s = 0; s < spectra.size(); ++s) {
    double prev = shrink_value_at(spectra[s], 1, r, lambda);
    for (std::size_t j = 2; j <= r; ++j) {
      const double cur = shrink_value_at(spectra[s], j, r, lambda);
      if (cur - prev > worst) {
        worst = cur - prev;
        worst_idx = s;
      }
      prev = cur;
    }
  }
  CheckReport rep;
  rep.name = "monotone_shrink_value";
  rep.max_violation = worst;
  rep.passed = worst <= check_tol::kMonotoneSlack;
  rep.details = spectra.empty()
                    ? "no spectra"
                    : "worst spectrum " + std::to_string(worst_idx) +
                          ", max increase " + fmt(worst);
  return rep;
}

CheckReport check_rayleigh(const DenseMatrix& g) {
  if (g.rows() != g.cols()) throw DimensionMismatch("check_rayleigh: square");
  const std::size_t d = g.rows();
  DenseMatrix g1 = g;
  const double shift = g.trace() / static_cast<double>(d);
  for (std::size_t i = 0; i < d; ++i) g1(i, i) -= shift;

  const SpectralDecomp ed = sym_eig(g1);
  std::vector<double> w(d, 0.0);
  const double inv = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t i = 0; i < d; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < d; ++j) row += ed.eigvecs(i, j);
    w[i] = row * inv;
  }
  const double quotient = dot(w, matvec(g1, w));
  const double norm_drift = std::fabs(std::sqrt(sqnorm(w)) - 1.0);
  const double scale = 1.0 + g.frobenius_norm();

  CheckReport rep;
  rep.name = "rayleigh_zero";
  rep.max_violation = std::max(std::fabs(quotient) / scale, norm_drift);
  rep.passed = rep.max_violation <= check_tol::kRayleigh;
  rep.details =
      "quotient=" + fmt(quotient) + " norm_drift=" + fmt(norm_drift);
  return rep;
}

CheckReport check_critical_dominance(const DenseMatrix& u,
                                     const DenseMatrix& m, double lambda) {
  const double gn = grad_tied(m, u, lambda).frobenius_norm();
  if (gn > check_tol::kCriticalGrad)
    throw NotCritical("check_critical_dominance: gradient norm " + fmt(gn));
  const SpectralDecomp ed = sym_eig(m - multiply_a_bt(u, u));
  const double min_eig = ed.eigvals.back();
  CheckReport rep;
  rep.name = "critical_dominance";
  rep.max_violation = std::max(0.0, -min_eig);
  rep.passed = min_eig >= check_tol::kDominanceFloor;
  rep.details = "min_eig=" + fmt(min_eig);
  return rep;
}

namespace {

// f along the rotation curve mixing columns i and j of u.
double rotated_value(const DenseMatrix& m, const DenseMatrix& u, double lambda,
                     std::size_t i, std::size_t j, double t) {
  DenseMatrix ut = u;
  const double ct = std::sqrt(1.0 - t * t);
  for (std::size_t row = 0; row < u.rows(); ++row) {
    ut(row, i) = ct * u(row, i) + t * u(row, j);
    ut(row, j) = ct * u(row, j) - t * u(row, i);
  }
  return tied_value(m, ut, lambda);
}

}  // namespace

CheckReport saddle_probe(const DenseMatrix& u, const DenseMatrix& m,
                         double lambda) {
  const double gn = grad_tied(m, u, lambda).frobenius_norm();
  if (gn > check_tol::kCriticalGrad)
    throw NotCritical("saddle_probe: gradient norm " + fmt(gn));

  const std::size_t r = u.cols();
  std::size_t hi = 0, lo = 0;
  for (std::size_t j = 1; j < r; ++j) {
    if (u.column_sqnorm(j) > u.column_sqnorm(hi)) hi = j;
    if (u.column_sqnorm(j) < u.column_sqnorm(lo)) lo = j;
  }
  const double a = u.column_sqnorm(hi);
  const double b = u.column_sqnorm(lo);
  if (std::sqrt(a) - std::sqrt(b) <= check_tol::kEqualizedGap)
    throw AlreadyEqualized("saddle_probe: column norms already equal");
  const double c = u.column_dot(hi, lo);

  const double curvature =
      lambda * (-4.0 * (a * a + b * b) + 16.0 * c * c + 8.0 * a * b);

  const double h = check_tol::kCurvatureFdStep;
  const double g0 = tied_value(m, u, lambda);
  const double gp = rotated_value(m, u, lambda, hi, lo, h);
  const double gm = rotated_value(m, u, lambda, hi, lo, -h);
  const double fd = (gp - 2.0 * g0 + gm) / (h * h);
  const double rel =
      std::fabs(fd - curvature) / std::max(std::fabs(curvature), 1e-12);

  CheckReport rep;
  rep.name = "saddle_probe";
  const double curv_excess = std::max(0.0, curvature - check_tol::kCurvatureCeil);
  const double fd_excess = std::max(0.0, rel - check_tol::kCurvatureFdRel);
  rep.max_violation = std::max(curv_excess, fd_excess);
  rep.passed =
      curvature < check_tol::kCurvatureCeil && rel <= check_tol::kCurvatureFdRel;
  rep.details = "curvature=" + fmt(curvature) + " fd=" + fmt(fd) +
                " rel=" + fmt(rel);
  return rep;
}

LandscapeGrid landscape_grid(double m_scalar, double lambda, double grid_min,
                             double grid_max, std::size_t n) {
  if (n < 2 || n > 2048) throw Error("landscape_grid: n must lie in [2, 2048]");
  if (!(grid_min < grid_max))
    throw Error("landscape_grid: grid_min must be < grid_max");

  LandscapeGrid out;
  out.n = n;
  out.grid_min = grid_min;
  out.grid_max = grid_max;
  out.values.resize(n * n);
  out.min_value = std::numeric_limits<double>::infinity();
  out.argmin_u1 = out.argmin_u2 = grid_min;
  for (std::size_t i = 0; i < n; ++i) {
    const double u1 = out.coord(i);
    for (std::size_t j = 0; j < n; ++j) {
      const double u2 = out.coord(j);
      const double miss = m_scalar - u1 * u1 - u2 * u2;
      const double f =
          miss * miss + lambda * (u1 * u1 * u1 * u1 + u2 * u2 * u2 * u2);
      out.values[i * n + j] = f;
      if (f < out.min_value) {
        out.min_value = f;
        out.argmin_u1 = u1;
        out.argmin_u2 = u2;
      }
    }
  }
  return out;
}

namespace {

bool want(const SuiteOptions& opts, const std::string& name) {
  if (opts.selected.empty()) return true;
  return std::find(opts.selected.begin(), opts.selected.end(), name) !=
         opts.selected.end();
}

CheckReport fold(const std::string& name,
                 const std::vector<CheckReport>& parts) {
  CheckReport rep;
  rep.name = name;
  rep.passed = true;
  rep.max_violation = 0.0;
  std::size_t failures = 0;
  const CheckReport* worst = nullptr;
  for (const CheckReport& p : parts) {
    if (!p.passed) ++failures;
    rep.passed = rep.passed && p.passed;
    if (p.max_violation >= rep.max_violation) {
      rep.max_violation = p.max_violation;
      worst = &p;
    }
  }
  std::ostringstream d;
  d << parts.size() << " instances, " << failures << " failed";
  if (worst && !worst->details.empty()) d << "; worst: " << worst->details;
  rep.details = d.str();
  return rep;
}

// Random PSD with chosen eigenvalues: rotate a diagonal by the
// eigenbasis of a random symmetric matrix.
DenseMatrix psd_with_spectrum(SplitMix64& g, const std::vector<double>& vals) {
  const std::size_t d = vals.size();
  DenseMatrix s(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      const double v = g.next_gaussian();
      s(i, j) = v;
      s(j, i) = v;
    }
  const SpectralDecomp ed = sym_eig(s);
  DenseMatrix scaled = ed.eigvecs;
  for (std::size_t j = 0; j < d; ++j) scaled.scale_column(j, vals[j]);
  return multiply_a_bt(scaled, ed.eigvecs);
}

// Critical point of the tied objective built column-wise: column i of
// u is an eigenvector of m scaled so the per-column stationarity
// (eig_i - c^2) c = lambda c^3 holds; columns outside `use` stay zero.
DenseMatrix columnwise_critical(const DenseMatrix& m, std::size_t r,
                                const std::vector<std::size_t>& use,
                                double lambda) {
  const SpectralDecomp ed = sym_eig(m);
  DenseMatrix u(m.rows(), r);
  for (std::size_t k = 0; k < use.size() && k < r; ++k) {
    const std::size_t i = use[k];
    const double c = std::sqrt(ed.eigvals[i] / (1.0 + lambda));
    for (std::size_t row = 0; row < m.rows(); ++row)
      u(row, k) = c * ed.eigvecs(row, i);
  }
  return u;
}

}  // namespace

std::vector<CheckReport> run_suite(std::uint64_t seed,
                                   const SuiteOptions& opts) {
  std::vector<CheckReport> out;
  SplitMix64 master = SplitMix64::substream(seed, stream_purpose::kSuite, 0);

  if (want(opts, "mc_equivalence")) {
    out.push_back(check_mc_equivalence(opts.mc_trials, master.next_u64(),
                                       opts.mc_samples,
                                       opts.inject_fault ? 1.0 : 0.0));
  }

  if (want(opts, "woodbury")) {
    SplitMix64 g(master.next_u64());
    std::vector<CheckReport> parts;
    parts.push_back(check_woodbury(1, 2, 1.0));
    parts.push_back(check_woodbury(2, 2, 1.0));
    for (int i = 0; i < 100; ++i) {
      const std::size_t rho = 1 + g.next_u64() % 8;
      const std::size_t r = rho + g.next_u64() % 7;
      parts.push_back(check_woodbury(rho, r, 5.0 * g.next_double()));
    }
    out.push_back(fold("woodbury", parts));
  }

  if (want(opts, "monotone_shrink_value")) {
    SplitMix64 g(master.next_u64());
    constexpr double kLambdas[] = {0.1, 0.5, 1.0, 5.0};
    std::vector<CheckReport> parts;
    for (double lambda : kLambdas) {
      std::vector<std::vector<double>> spectra;
      for (int i = 0; i < 25; ++i) {
        std::vector<double> s(1 + g.next_u64() % 8);
        for (double& v : s) v = 3.0 * g.next_double();
        std::sort(s.rbegin(), s.rend());
        spectra.push_back(std::move(s));
      }
      parts.push_back(check_monotone_g(spectra, 6, lambda));
    }
    out.push_back(fold("monotone_shrink_value", parts));
  }

  if (want(opts, "rayleigh_zero")) {
    SplitMix64 g(master.next_u64());
    std::vector<CheckReport> parts;
    for (int i = 0; i < 100; ++i) {
      const std::size_t d = 2 + g.next_u64() % 15;
      DenseMatrix s(d, d);
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = a; b < d; ++b) {
          const double v = g.next_gaussian();
          s(a, b) = v;
          s(b, a) = v;
        }
      parts.push_back(check_rayleigh(s));
    }
    out.push_back(fold("rayleigh_zero", parts));
  }

  if (want(opts, "critical_dominance")) {
    SplitMix64 g(master.next_u64());
    std::vector<CheckReport> parts;
    for (int i = 0; i < 5; ++i) {
      const std::size_t d = 4 + g.next_u64() % 5;
      std::vector<double> vals(d);
      for (std::size_t k = 0; k < d; ++k) vals[k] = 3.0 * g.next_double();
      std::sort(vals.rbegin(), vals.rend());
      const DenseMatrix m = psd_with_spectrum(g, vals);
      const std::size_t r = 2 + g.next_u64() % 3;
      const double lambda = i % 2 ? 1.0 : 0.5;
      parts.push_back(
          check_critical_dominance(solve_tied(m, r, lambda).factors.u, m, lambda));
    }
    {
      // u = 0 is critical for every m; dominance is m itself.
      const DenseMatrix m = psd_with_spectrum(
          g, std::vector<double>{2.0, 1.0, 0.5});
      parts.push_back(check_critical_dominance(DenseMatrix(3, 2), m, 1.0));
    }
    for (int i = 0; i < 5; ++i) {
      std::vector<double> vals = {3.0 + g.next_double(), 2.0 + g.next_double(),
                                  1.0 + g.next_double(), g.next_double()};
      const DenseMatrix m = psd_with_spectrum(g, vals);
      const DenseMatrix u = columnwise_critical(m, 3, {0, 2}, 0.8);
      parts.push_back(check_critical_dominance(u, m, 0.8));
    }
    out.push_back(fold("critical_dominance", parts));
  }

  if (want(opts, "saddle_probe")) {
    SplitMix64 g(master.next_u64());
    std::vector<CheckReport> parts;
    {
      DenseMatrix m = DenseMatrix::from_rows({{3.0, 0.0}, {0.0, 1.0}});
      DenseMatrix u(2, 2);
      u(0, 0) = std::sqrt(1.5);
      parts.push_back(saddle_probe(u, m, 1.0));
    }
    for (int i = 0; i < 20; ++i) {
      const std::size_t d = 3 + g.next_u64() % 4;
      std::vector<double> vals(d);
      for (std::size_t k = 0; k < d; ++k)
        vals[k] = static_cast<double>(d - k) + 0.5 * g.next_double();
      const DenseMatrix m = psd_with_spectrum(g, vals);
      const double lambda = 0.4 + 1.2 * g.next_double();
      // Two occupied columns with distinct eigenvalues, one empty;
      // never equalized, always a strict saddle.
      const DenseMatrix u = columnwise_critical(m, 3, {0, 1}, lambda);
      parts.push_back(saddle_probe(u, m, lambda));
    }
    out.push_back(fold("saddle_probe", parts));
  }

  if (want(opts, "landscape_grid")) {
    std::vector<CheckReport> parts;
    {
      const double m = 2.0, lambda = 0.6;
      const LandscapeGrid grid = landscape_grid(m, lambda, -2.0, 2.0, 256);
      const double best = optimal_value({m}, 2, lambda);
      const double ustar = std::sqrt(m / (2.0 + lambda));
      const double cell = grid.spacing();
      const double gap = grid.min_value - best;
      const bool near = std::fabs(std::fabs(grid.argmin_u1) - ustar) <= cell &&
                        std::fabs(std::fabs(grid.argmin_u2) - ustar) <= cell;
      CheckReport rep;
      rep.name = "landscape_grid";
      rep.max_violation = std::max(0.0, gap);
      rep.passed = near && gap >= -1e-9 &&
                   gap <= check_tol::kLandscapeRateC / static_cast<double>(grid.n);
      rep.details = "min=" + fmt(grid.min_value) + " argmin=(" +
                    fmt(grid.argmin_u1) + "," + fmt(grid.argmin_u2) +
                    ") target=" + fmt(best);
      parts.push_back(rep);
    }
    {
      // Unregularized valley: minima sit on the circle |u|^2 = m.
      const LandscapeGrid grid = landscape_grid(2.0, 0.0, -2.0, 2.0, 256);
      CheckReport rep;
      rep.name = "landscape_grid";
      rep.max_violation = grid.min_value;
      rep.passed = grid.min_value <= 1e-3;
      rep.details = "lambda=0 min=" + fmt(grid.min_value);
      parts.push_back(rep);
    }
    out.push_back(fold("landscape_grid", parts));
  }

  return out;
}

const std::vector<std::string>& known_check_names() {
  static const std::vector<std::string> names = {
      "mc_equivalence",     "woodbury",     "monotone_shrink_value",
      "rayleigh_zero",      "critical_dominance",
      "saddle_probe",       "landscape_grid"};
  return names;
}

bool all_passed(const std::vector<CheckReport>& reports) {
  for (const CheckReport& r : reports)
    if (!r.passed) return false;
  return true;
}

void write_report_text(std::ostream& out,
                       const std::vector<CheckReport>& reports) {
  for (const CheckReport& r : reports)
    out << (r.passed ? "PASS" : "FAIL") << " " << r.name
        << " (max_violation=" << fmt(r.max_violation) << ") " << r.details
        << "\n";
}

void write_report_json(std::ostream& out,
                       const std::vector<CheckReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const CheckReport& r : reports)
    arr.push_back({{"name", r.name},
                   {"passed", r.passed},
                   {"max_violation", r.max_violation},
                   {"details", r.details}});
  out << arr.dump(2) << "\n";
}

}  // namespace droplin

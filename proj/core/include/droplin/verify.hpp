#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "droplin/matrix.hpp"

namespace droplin {

// Every tolerance the checks use, in one place.
namespace check_tol {
inline constexpr double kMcSigmas = 4.0;          // |mc - closed| / std_err
inline constexpr double kWoodbury = 1e-12;        // identity residual
inline constexpr double kMonotoneSlack = 1e-12;   // shrink value increase
inline constexpr double kRayleigh = 1e-10;        // quotient and norm drift
inline constexpr double kDominanceFloor = -1e-8;  // min eigenvalue of m - uu^T
inline constexpr double kCriticalGrad = 1e-6;     // criticality gate
inline constexpr double kEqualizedGap = 1e-6;     // column-norm gap gate
inline constexpr double kCurvatureCeil = -1e-8;   // probe must dip below this
inline constexpr double kCurvatureFdRel = 1e-4;   // probe vs finite difference
inline constexpr double kCurvatureFdStep = 1e-4;
inline constexpr double kLandscapeRateC = 2.0;    // grid-min gap <= C / n
}  // namespace check_tol

struct CheckReport {
  std::string name;
  bool passed;
  double max_violation;
  std::string details;
};

// Agreement between the Monte-Carlo dropout objective and its closed
// form over random small instances (dims <= 6, r <= 4, dropout rate
// cycling 0.3 / 0.5 / 0.9).  closed_form_offset shifts the reference
// value and exists so the harness can prove the check can fail.
CheckReport check_mc_equivalence(std::size_t trials, std::uint64_t seed,
                                 std::size_t n_samples = 1000000,
                                 double closed_form_offset = 0.0);

// (I + (lambda/r) 11^T)(I - (lambda/(r + lambda rho)) 11^T) == I on
// rho x rho all-ones blocks; the exact-inverse identity behind the
// shrinkage derivation.
CheckReport check_woodbury(std::size_t rho, std::size_t r, double lambda);

// shrink_value_at is non-increasing in the level for each spectrum.
CheckReport check_monotone_g(const std::vector<std::vector<double>>& spectra,
                             std::size_t r, double lambda);

// The normalized eigenvector sum w of the traceless shift of g has
// unit norm and w^T g1 w = 0.
CheckReport check_rayleigh(const DenseMatrix& g);

// At a critical point u of the tied objective, m - u u^T stays PSD.
// Throws NotCritical when the gradient gate fails.
CheckReport check_critical_dominance(const DenseMatrix& u,
                                     const DenseMatrix& m, double lambda);

// Second derivative of the objective along the two-column rotation
// curve through a non-equalized critical point; negative curvature
// certifies a strict saddle, cross-checked against a central finite
// difference.  Throws NotCritical / AlreadyEqualized on gate failure.
CheckReport saddle_probe(const DenseMatrix& u, const DenseMatrix& m,
                         double lambda);

// Dense evaluation of the scalar two-column objective
//   f(u1, u2) = (m - u1^2 - u2^2)^2 + lambda (u1^4 + u2^4)
// on an n x n grid.  values is row-major with u1 varying down rows and
// u2 across columns; ties in the argmin scan resolve to the lowest
// index pair.
struct LandscapeGrid {
  std::size_t n;
  double grid_min;
  double grid_max;
  std::vector<double> values;
  double min_value;
  double argmin_u1;
  double argmin_u2;

  double coord(std::size_t k) const {
    return grid_min + (grid_max - grid_min) * static_cast<double>(k) /
                          static_cast<double>(n - 1);
  }
  double spacing() const {
    return (grid_max - grid_min) / static_cast<double>(n - 1);
  }
};

LandscapeGrid landscape_grid(double m_scalar, double lambda, double grid_min,
                             double grid_max, std::size_t n);

struct SuiteOptions {
  std::size_t mc_trials = 20;
  std::size_t mc_samples = 1000000;
  bool inject_fault = false;              // harness self-test hook
  std::vector<std::string> selected;      // empty = every check
};

// The full battery with standard instances, all derived from one root
// seed.  Check names: mc_equivalence, woodbury, monotone_shrink_value,
// rayleigh_zero, critical_dominance, saddle_probe, landscape_grid.
std::vector<CheckReport> run_suite(std::uint64_t seed,
                                   const SuiteOptions& opts = {});

// The names run_suite recognizes, in execution order.
const std::vector<std::string>& known_check_names();

bool all_passed(const std::vector<CheckReport>& reports);

// One "PASS name (max_violation=...)" line per check.
void write_report_text(std::ostream& out,
                       const std::vector<CheckReport>& reports);
// JSON array of {name, passed, max_violation, details}.
void write_report_json(std::ostream& out,
                       const std::vector<CheckReport>& reports);

}  // namespace droplin

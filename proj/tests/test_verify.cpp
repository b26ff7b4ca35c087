#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "droplin/eig.hpp"
#include "droplin/errors.hpp"
#include "droplin/objective.hpp"
#include "droplin/rng.hpp"
#include "droplin/solver.hpp"
#include "droplin/verify.hpp"
#include "oracle_gd.hpp"
#include "testkit.hpp"

using droplin::CheckReport;
using droplin::DenseMatrix;
using droplin::LandscapeGrid;
using droplin::SuiteOptions;

namespace {

// PSD matrix with a prescribed spectrum in a random eigenbasis.
DenseMatrix psd_from_spectrum(const std::vector<double>& vals,
                              std::uint64_t seed) {
  const std::size_t d = vals.size();
  const DenseMatrix q = testkit::random_orthogonal(d, seed);
  DenseMatrix scaled = q;
  for (std::size_t j = 0; j < d; ++j) scaled.scale_column(j, vals[j]);
  return droplin::multiply_a_bt(scaled, q);
}

// Critical point of the tied objective with chosen eigenvector slots
// occupied: column k = c * v_{use[k]} with c^2 = eig / (1 + lambda)
// solves the per-column stationarity condition exactly.
DenseMatrix critical_point(const DenseMatrix& m, std::size_t r,
                           const std::vector<std::size_t>& use,
                           double lambda) {
  const droplin::SpectralDecomp ed = droplin::sym_eig(m);
  DenseMatrix u(m.rows(), r);
  for (std::size_t k = 0; k < use.size() && k < r; ++k) {
    const double c = std::sqrt(ed.eigvals[use[k]] / (1.0 + lambda));
    for (std::size_t row = 0; row < m.rows(); ++row)
      u(row, k) = c * ed.eigvecs(row, use[k]);
  }
  return u;
}

// Value of the tied objective along the two-column rotation curve the
// probe differentiates, recomputed here from the curve's definition.
double curve_value(const DenseMatrix& m, const DenseMatrix& u, double lambda,
                   std::size_t i, std::size_t j, double t) {
  DenseMatrix ut = u;
  const double ct = std::sqrt(1.0 - t * t);
  for (std::size_t row = 0; row < u.rows(); ++row) {
    ut(row, i) = ct * u(row, i) + t * u(row, j);
    ut(row, j) = ct * u(row, j) - t * u(row, i);
  }
  return droplin::tied_value(m, ut, lambda);
}

// Richardson-extrapolated central second difference of the curve.
double curve_curvature(const DenseMatrix& m, const DenseMatrix& u,
                       double lambda, std::size_t i, std::size_t j) {
  auto second = [&](double h) {
    return (curve_value(m, u, lambda, i, j, h) -
            2.0 * curve_value(m, u, lambda, i, j, 0.0) +
            curve_value(m, u, lambda, i, j, -h)) /
           (h * h);
  };
  const double h = 1e-2;
  return (4.0 * second(h / 2.0) - second(h)) / 3.0;
}

}  // namespace

TEST_CASE("mc equivalence check") {
  const CheckReport ok = droplin::check_mc_equivalence(4, 77, 30000);
  CHECK(ok.passed);
  CHECK(ok.name == "mc_equivalence");
  CHECK(ok.max_violation <= droplin::check_tol::kMcSigmas);

  // Identical arguments reproduce the identical report.
  const CheckReport again = droplin::check_mc_equivalence(4, 77, 30000);
  CHECK(again.max_violation == ok.max_violation);
  CHECK(again.details == ok.details);

  // A shifted reference value must trip the gate.
  const CheckReport bad = droplin::check_mc_equivalence(4, 77, 30000, 5.0);
  CHECK_FALSE(bad.passed);
}

TEST_CASE("woodbury identity check") {
  CHECK(droplin::check_woodbury(1, 2, 1.0).passed);
  CHECK(droplin::check_woodbury(2, 2, 1.0).passed);
  const CheckReport r = droplin::check_woodbury(3, 7, 2.5);
  CHECK(r.passed);
  CHECK(r.max_violation <= 1e-12);
  CHECK_THROWS_AS(droplin::check_woodbury(0, 3, 1.0), droplin::Error);
  CHECK_THROWS_AS(droplin::check_woodbury(4, 3, 1.0), droplin::Error);
}

TEST_CASE("monotone shrink value check") {
  droplin::SplitMix64 g(9400);
  std::vector<std::vector<double>> spectra;
  for (int i = 0; i < 100; ++i) {
    std::vector<double> s(1 + g.next_u64() % 8);
    for (double& v : s) v = 3.0 * g.next_double();
    std::sort(s.rbegin(), s.rend());
    spectra.push_back(std::move(s));
  }
  const CheckReport r = droplin::check_monotone_g(spectra, 6, 0.7);
  CHECK(r.passed);
  CHECK(r.max_violation <= droplin::check_tol::kMonotoneSlack);

  const CheckReport empty = droplin::check_monotone_g({}, 4, 1.0);
  CHECK(empty.passed);
  CHECK(empty.max_violation == 0.0);
}

TEST_CASE("rayleigh quotient check") {
  for (int i = 0; i < 10; ++i) {
    const std::size_t d = 2 + std::size_t(i);
    const CheckReport r =
        droplin::check_rayleigh(testkit::random_symmetric(d, 9500 + i));
    CHECK(r.passed);
    CHECK(r.max_violation <= 1e-10);
  }
  CHECK_THROWS_AS(droplin::check_rayleigh(DenseMatrix(2, 3)),
                  droplin::DimensionMismatch);
}

TEST_CASE("critical dominance check") {
  const DenseMatrix m = DenseMatrix::diagonal({3.0, 1.0});
  SUBCASE("anchor critical point dominates") {
    DenseMatrix u(2, 2);
    u(0, 0) = std::sqrt(1.5);
    const CheckReport r = droplin::check_critical_dominance(u, m, 1.0);
    CHECK(r.passed);
    CHECK(r.max_violation == 0.0);
  }
  SUBCASE("zero is critical for every target") {
    CHECK(droplin::check_critical_dominance(DenseMatrix(2, 2), m, 1.0).passed);
  }
  SUBCASE("closed-form optimum is critical") {
    const DenseMatrix p = psd_from_spectrum({3.0, 2.0, 1.0, 0.5}, 9600);
    const droplin::GlobalOptimum sol = droplin::solve_tied(p, 2, 0.5);
    CHECK(droplin::check_critical_dominance(sol.factors.u, p, 0.5).passed);
  }
  SUBCASE("non-critical points are rejected") {
    const DenseMatrix u = testkit::random_matrix(2, 2, 9610);
    CHECK_THROWS_AS(droplin::check_critical_dominance(u, m, 1.0),
                    droplin::NotCritical);
  }
}

TEST_CASE("saddle probe at the constructed critical point") {
  const DenseMatrix m = DenseMatrix::diagonal({3.0, 1.0});
  DenseMatrix u(2, 2);
  u(0, 0) = std::sqrt(1.5);

  const CheckReport r = droplin::saddle_probe(u, m, 1.0);
  CHECK(r.passed);
  CHECK(r.name == "saddle_probe");

  // The curve's true curvature, measured without the probe's formula.
  const double fd = curve_curvature(m, u, 1.0, 0, 1);
  CHECK(std::abs(fd - (-9.0)) <= 1e-6);
}

TEST_CASE("saddle probe gates") {
  const DenseMatrix m = DenseMatrix::diagonal({3.0, 1.0});
  SUBCASE("non-critical input") {
    CHECK_THROWS_AS(
        droplin::saddle_probe(testkit::random_matrix(2, 2, 9620), m, 1.0),
        droplin::NotCritical);
  }
  SUBCASE("zero point has no norm gap to exploit") {
    CHECK_THROWS_AS(droplin::saddle_probe(DenseMatrix(2, 2), m, 1.0),
                    droplin::AlreadyEqualized);
  }
  SUBCASE("equalized nonzero critical point") {
    // Flat target: both columns carry the same stationary norm.
    const DenseMatrix flat = DenseMatrix::diagonal({2.0, 2.0});
    const double c = std::sqrt(2.0 / 1.5);
    const DenseMatrix u = DenseMatrix::diagonal({c, c});
    CHECK_THROWS_AS(droplin::saddle_probe(u, flat, 0.5),
                    droplin::AlreadyEqualized);
  }
}

TEST_CASE("non-equalized critical points always probe negative") {
  droplin::SplitMix64 g(9700);
  for (int i = 0; i < 20; ++i) {
    const std::size_t d = 3 + g.next_u64() % 4;
    std::vector<double> vals(d);
    for (std::size_t k = 0; k < d; ++k)
      vals[k] = double(d - k) + 0.5 * g.next_double();
    const DenseMatrix m = psd_from_spectrum(vals, 9710 + std::uint64_t(i));
    const double lambda = 0.4 + 1.2 * g.next_double();
    const DenseMatrix u = critical_point(m, 3, {0, 1}, lambda);
    const CheckReport r = droplin::saddle_probe(u, m, lambda);
    CHECK(r.passed);
  }
}

TEST_CASE("landscape grid") {
  SUBCASE("anchor instance") {
    const LandscapeGrid grid = droplin::landscape_grid(2.0, 0.6, -2.0, 2.0, 256);
    const double best = droplin::optimal_value({2.0}, 2, 0.6);
    CHECK(grid.min_value >= best - 1e-9);
    CHECK(grid.min_value - best <= 2.0 / 256.0);
    const double ustar = std::sqrt(2.0 / 2.6);
    CHECK(std::abs(std::abs(grid.argmin_u1) - ustar) <= grid.spacing());
    CHECK(std::abs(std::abs(grid.argmin_u2) - ustar) <= grid.spacing());
  }
  SUBCASE("values are row-major with u1 down the rows") {
    const LandscapeGrid grid = droplin::landscape_grid(1.5, 0.3, -1.0, 1.0, 5);
    const double u1 = grid.coord(3), u2 = grid.coord(1);
    const double miss = 1.5 - u1 * u1 - u2 * u2;
    const double want = miss * miss + 0.3 * (std::pow(u1, 4) + std::pow(u2, 4));
    CHECK(grid.values[3 * 5 + 1] == doctest::Approx(want).epsilon(1e-14));
  }
  SUBCASE("unregularized valley reaches zero") {
    const LandscapeGrid grid = droplin::landscape_grid(2.0, 0.0, -2.0, 2.0, 256);
    CHECK(grid.min_value <= 1e-3);
  }
  SUBCASE("tied minima resolve to the lowest index pair") {
    // All four corners of a 2x2 grid over [-2,2] have equal value.
    const LandscapeGrid grid = droplin::landscape_grid(2.0, 0.0, -2.0, 2.0, 2);
    CHECK(grid.argmin_u1 == -2.0);
    CHECK(grid.argmin_u2 == -2.0);
  }
  SUBCASE("grid minimum converges at rate 1/n") {
    const double best = droplin::optimal_value({2.0}, 2, 0.6);
    for (std::size_t n : {64UL, 128UL, 256UL, 512UL}) {
      const LandscapeGrid grid =
          droplin::landscape_grid(2.0, 0.6, -2.0, 2.0, n);
      const double gap = grid.min_value - best;
      CHECK(gap >= -1e-9);
      CHECK(gap <= droplin::check_tol::kLandscapeRateC / double(n));
    }
  }
  SUBCASE("guards") {
    CHECK_THROWS_AS(droplin::landscape_grid(2.0, 0.6, -2.0, 2.0, 1),
                    droplin::Error);
    CHECK_THROWS_AS(droplin::landscape_grid(2.0, 0.6, -2.0, 2.0, 2049),
                    droplin::Error);
    CHECK_THROWS_AS(droplin::landscape_grid(2.0, 0.6, 2.0, -2.0, 256),
                    droplin::Error);
  }
}

TEST_CASE("below the saddle bound, every descent reaches the global value") {
  const std::vector<double> spectrum = {4.0, 3.0, 2.0, 1.0};
  const std::size_t r = 3;
  const double bound = droplin::strict_saddle_bound(spectrum, r);
  CHECK(bound == doctest::Approx(2.0));
  const double lambda = 0.5;  // strictly inside the guarantee
  REQUIRE(lambda < bound);

  const DenseMatrix m = psd_from_spectrum(spectrum, 9800);
  const double opt = droplin::optimal_value(spectrum, r, lambda);
  droplin::SplitMix64 g(9801);
  for (int s = 0; s < 50; ++s) {
    DenseMatrix u0(4, r);
    for (double& v : u0.data()) v = 1.5 * g.next_gaussian();
    const double reached =
        testkit::gd_descend(m, u0, u0, lambda, true, 9810 + std::uint64_t(s));
    CHECK(std::abs(reached - opt) <= 1e-4 * (1.0 + std::abs(opt)));
  }
}

TEST_CASE("suite determinism, selection, and fault injection") {
  SuiteOptions small;
  small.mc_trials = 4;
  small.mc_samples = 30000;

  const std::vector<CheckReport> a = droplin::run_suite(1, small);
  const std::vector<CheckReport> b = droplin::run_suite(1, small);
  REQUIRE(a.size() == droplin::known_check_names().size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].name == droplin::known_check_names()[i]);
    CHECK(a[i].passed);
  }
  CHECK(droplin::all_passed(a));

  std::ostringstream ta, tb;
  droplin::write_report_text(ta, a);
  droplin::write_report_text(tb, b);
  CHECK(ta.str() == tb.str());

  SuiteOptions pick = small;
  pick.selected = {"woodbury", "landscape_grid"};
  const std::vector<CheckReport> two = droplin::run_suite(1, pick);
  REQUIRE(two.size() == 2);
  CHECK(two[0].name == "woodbury");
  CHECK(two[1].name == "landscape_grid");

  SuiteOptions faulty = small;
  faulty.mc_trials = 1;
  faulty.mc_samples = 1000000;  // tight std_err so the planted shift is loud
  faulty.inject_fault = true;
  const std::vector<CheckReport> f = droplin::run_suite(1, faulty);
  CHECK_FALSE(droplin::all_passed(f));
  CHECK_FALSE(f.front().passed);  // the Monte-Carlo check takes the hit

  std::ostringstream json;
  droplin::write_report_json(json, two);
  CHECK(json.str().find("\"woodbury\"") != std::string::npos);
  CHECK(json.str().find("\"passed\"") != std::string::npos);
}

#include "droplin/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "droplin/eig.hpp"
#include "droplin/equalize.hpp"
#include "droplin/errors.hpp"
#include "droplin/svd.hpp"

namespace droplin {

namespace {

constexpr double kPsdTol = 1e-9;

double spectrum_at(const std::vector<double>& s, std::size_t i) {
  return i < s.size() ? s[i] : 0.0;
}

void check_spectrum(const std::vector<double>& s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(s[i] >= 0.0)) throw Error("spectrum entries must be >= 0");
    if (i && s[i] > s[i - 1] + 1e-12)
      throw Error("spectrum must be sorted descending");
  }
}

}  // namespace

ShrinkLevel shrink_level(const std::vector<double>& spectrum, std::size_t r,
                         double lambda) {
  if (r == 0) throw Error("shrink_level: r must be >= 1");
  if (!(lambda >= 0.0)) throw Error("shrink_level: lambda must be >= 0");
  check_spectrum(spectrum);

  std::size_t rho = 0;
  double h = 0.0, h_rho = 0.0;
  for (std::size_t j = 1; j <= r; ++j) {
    const double sj = spectrum_at(spectrum, j - 1);
    h += sj;
    const double dj = static_cast<double>(j);
    if (sj > lambda * h / (static_cast<double>(r) + lambda * dj)) {
      rho = j;
      h_rho = h;
    }
  }
  if (rho == 0) return {0, 0.0, 0.0};
  const double kappa = h_rho / static_cast<double>(rho);
  const double alpha = lambda * static_cast<double>(rho) * kappa /
                       (static_cast<double>(r) + lambda * static_cast<double>(rho));
  return {rho, kappa, alpha};
}

double shrink_value_at(const std::vector<double>& spectrum, std::size_t j,
                       std::size_t r, double lambda) {
  check_spectrum(spectrum);
  double h = 0.0;
  for (std::size_t i = 0; i < j; ++i) h += spectrum_at(spectrum, i);
  double t = 0.0;
  for (std::size_t i = j; i < spectrum.size(); ++i)
    t += spectrum[i] * spectrum[i];
  return lambda * h * h / (static_cast<double>(r) + lambda * static_cast<double>(j)) + t;
}

double optimal_value(const std::vector<double>& spectrum, std::size_t r,
                     double lambda) {
  const ShrinkLevel lv = shrink_level(spectrum, r, lambda);
  return shrink_value_at(spectrum, lv.rho, r, lambda);
}

namespace {

// Shared tail of both solvers: given orthonormal directions and the
// surviving shrunk spectrum, split evenly, pad to r columns, equalize.
FactorPair build_factors(const DenseMatrix& left, const DenseMatrix& right,
                         const std::vector<double>& shrunk, std::size_t r) {
  DenseMatrix su = left.take_columns(r);
  DenseMatrix sv = right.take_columns(r);
  for (std::size_t j = 0; j < r; ++j) {
    const double root = j < shrunk.size() ? std::sqrt(shrunk[j]) : 0.0;
    su.scale_column(j, root);
    sv.scale_column(j, root);
  }
  const EqualizeResult eq = eqz(su);
  return {su * eq.q, sv * eq.q};
}

}  // namespace

GlobalOptimum solve_tied(const DenseMatrix& m, std::size_t r, double lambda) {
  const SpectralDecomp ed = sym_eig(m);

  double top = 0.0;
  for (double ev : ed.eigvals) top = std::max(top, std::fabs(ev));
  std::vector<double> spectrum = ed.eigvals;
  for (double& ev : spectrum) {
    if (ev < -kPsdTol * top) throw NotPsd("solve_tied: negative eigenvalue");
    if (ev < 0.0) ev = 0.0;
  }

  const ShrinkLevel lv = shrink_level(spectrum, r, lambda);
  std::vector<double> shrunk(lv.rho);
  for (std::size_t i = 0; i < lv.rho; ++i) shrunk[i] = spectrum[i] - lv.alpha;

  GlobalOptimum out;
  out.level = lv;
  out.factors = build_factors(ed.eigvecs, ed.eigvecs, shrunk, r);
  out.factors.v = out.factors.u;  // tied
  out.product = out.factors.product();
  out.value = objective_value(m, out.factors, lambda);
  return out;
}

GlobalOptimum solve_general(const DenseMatrix& m, std::size_t r,
                            double lambda) {
  const SvdDecomp sd = svd_compact(m);
  const ShrinkLevel lv = shrink_level(sd.singulars, r, lambda);

  // Shrink first, then decompose the shrunk matrix; its SVD is what
  // gets split between the two sides.
  const DenseMatrix shrunk_m = svt(m, lv.alpha);
  const SvdDecomp sbar = svd_compact(shrunk_m);

  GlobalOptimum out;
  out.level = lv;
  out.factors = build_factors(sbar.left, sbar.right, sbar.singulars, r);
  out.product = out.factors.product();
  out.value = objective_value(m, out.factors, lambda);
  return out;
}

double strict_saddle_bound(const std::vector<double>& spectrum, std::size_t r) {
  if (r == 0) throw Error("strict_saddle_bound: r must be >= 1");
  check_spectrum(spectrum);
  double h = 0.0;
  for (std::size_t i = 0; i < r; ++i) h += spectrum_at(spectrum, i);
  const double sr = spectrum_at(spectrum, r - 1);
  const double denom = h - static_cast<double>(r) * sr;
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  if (sr == 0.0) return 0.0;
  return static_cast<double>(r) * sr / denom;
}

}  // namespace droplin

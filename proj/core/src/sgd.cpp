#include "droplin/sgd.hpp"

#include <cmath>
#include <ostream>

#include "droplin/csv.hpp"
#include "droplin/eig.hpp"
#include "droplin/errors.hpp"
#include "droplin/rng.hpp"

namespace droplin {

void write_trace_csv(std::ostream& out, const TrainTrace& trace) {
  out << "step,objective,importance_variance\n";
  for (std::size_t k = 0; k < trace.steps.size(); ++k)
    out << trace.steps[k] << "," << format_full(trace.objective[k]) << ","
        << format_full(trace.importance_variance[k]) << "\n";
}

Sample data_oracle(const DenseMatrix& m, std::uint64_t seed, long t) {
  SplitMix64 g = SplitMix64::substream(seed, stream_purpose::kData,
                                       static_cast<std::uint64_t>(t));
  Sample s;
  s.x = g.gaussian_vector(m.cols());
  s.y = matvec(m, s.x);
  return s;
}

namespace {

void check_config(const SgdConfig& cfg) {
  if (!(cfg.theta > 0.0) || cfg.theta > 1.0)
    throw Error("sgd: theta must lie in (0, 1]");
  if (!(cfg.eta > 0.0)) throw Error("sgd: eta must be > 0");
  if (cfg.steps < 1) throw Error("sgd: steps must be >= 1");
}

DenseMatrix random_init(std::size_t rows, std::size_t cols, double scale,
                        std::uint64_t seed, std::uint64_t purpose) {
  SplitMix64 g = SplitMix64::substream(seed, purpose, 0);
  DenseMatrix m(rows, cols);
  for (double& v : m.data()) v = g.next_uniform(-scale, scale);
  return m;
}

std::vector<bool> draw_mask(std::size_t r, double theta, std::uint64_t seed,
                            long t) {
  SplitMix64 g = SplitMix64::substream(seed, stream_purpose::kMask,
                                       static_cast<std::uint64_t>(t));
  std::vector<bool> b(r);
  for (std::size_t i = 0; i < r; ++i) b[i] = g.next_bernoulli(theta);
  return b;
}

// Shared recording and divergence guard.  Records iterate `step` when
// due, using `value()` and `variance()` thunks so tied and untied
// trainers plug in their own closed forms.
template <typename ValueFn, typename VarFn>
void record_point(TrainTrace& trace, long step, long stride, long total,
                  double& initial, ValueFn&& value, VarFn&& variance) {
  if (step % stride != 0 && step != total) return;
  const double f = value();
  if (!std::isfinite(f) || (initial > 0.0 && f > 1e6 * initial))
    throw Diverged("objective diverged at step " + std::to_string(step), step);
  if (step == 0) initial = f;
  trace.steps.push_back(step);
  trace.objective.push_back(f);
  trace.importance_variance.push_back(variance());
}

double step_size(const SgdConfig& cfg, long t) {
  if (cfg.decay_t0 <= 0.0) return cfg.eta;
  return cfg.eta / (1.0 + static_cast<double>(t) / cfg.decay_t0);
}

}  // namespace

SgdResult dropout_sgd(const DenseMatrix& m, std::size_t r,
                      const SgdConfig& cfg) {
  check_config(cfg);
  if (r < 1) throw Error("sgd: r must be >= 1");
  const double lambda = (1.0 - cfg.theta) / cfg.theta;
  const double inv_theta = 1.0 / cfg.theta;
  const long stride =
      cfg.record_stride > 0 ? cfg.record_stride : std::max(1L, cfg.steps / 2000);

  DenseMatrix u =
      random_init(m.rows(), r, cfg.init_scale, cfg.seed, stream_purpose::kInitU);
  DenseMatrix v =
      random_init(m.cols(), r, cfg.init_scale, cfg.seed, stream_purpose::kInitV);

  SgdResult out;
  out.trace.record_stride = stride;
  double initial = -1.0;
  auto record = [&](long step) {
    record_point(
        out.trace, step, stride, cfg.steps, initial,
        [&] { return objective_value(m, {u, v}, lambda); },
        [&] { return importance_stats({u, v}).variance; });
  };

  record(0);
  for (long t = 0; t < cfg.steps; ++t) {
    const Sample s = data_oracle(m, cfg.seed, t);
    const std::vector<bool> b = draw_mask(r, cfg.theta, cfg.seed, t);

    std::vector<double> pb = matvec_transposed(v, s.x);
    for (std::size_t i = 0; i < r; ++i)
      if (!b[i]) pb[i] = 0.0;

    std::vector<double> e = matvec(u, pb);
    for (std::size_t i = 0; i < e.size(); ++i)
      e[i] = inv_theta * e[i] - s.y[i];

    std::vector<double> qb = matvec_transposed(u, e);
    for (std::size_t i = 0; i < r; ++i)
      if (!b[i]) qb[i] = 0.0;

    // Both factors move off the pre-step state.
    const double eta = step_size(cfg, t);
    for (std::size_t i = 0; i < u.rows(); ++i) {
      const double ei = eta * e[i];
      if (ei == 0.0) continue;
      for (std::size_t j = 0; j < r; ++j) u(i, j) -= ei * pb[j];
    }
    for (std::size_t i = 0; i < v.rows(); ++i) {
      const double xi = eta * s.x[i];
      if (xi == 0.0) continue;
      for (std::size_t j = 0; j < r; ++j) v(i, j) -= xi * qb[j];
    }
    record(t + 1);
  }

  out.factors = {std::move(u), std::move(v)};
  return out;
}

TiedSgdResult dropout_sgd_tied(const DenseMatrix& m, std::size_t r,
                               const SgdConfig& cfg) {
  check_config(cfg);
  if (r < 1) throw Error("sgd: r must be >= 1");
  {
    const SpectralDecomp ed = sym_eig(m);  // also rejects non-symmetric m
    double top = 0.0;
    for (double ev : ed.eigvals) top = std::max(top, std::fabs(ev));
    for (double ev : ed.eigvals)
      if (ev < -1e-9 * top) throw NotPsd("dropout_sgd_tied: m not PSD");
  }
  const double lambda = (1.0 - cfg.theta) / cfg.theta;
  const double inv_theta = 1.0 / cfg.theta;
  const long stride =
      cfg.record_stride > 0 ? cfg.record_stride : std::max(1L, cfg.steps / 2000);

  DenseMatrix u =
      random_init(m.rows(), r, cfg.init_scale, cfg.seed, stream_purpose::kInitU);

  TiedSgdResult out;
  out.trace.record_stride = stride;
  double initial = -1.0;
  auto record = [&](long step) {
    record_point(
        out.trace, step, stride, cfg.steps, initial,
        [&] { return tied_value(m, u, lambda); },
        [&] { return importance_stats({u, u}).variance; });
  };

  record(0);
  for (long t = 0; t < cfg.steps; ++t) {
    const Sample s = data_oracle(m, cfg.seed, t);
    const std::vector<bool> b = draw_mask(r, cfg.theta, cfg.seed, t);

    std::vector<double> pb = matvec_transposed(u, s.x);
    for (std::size_t i = 0; i < r; ++i)
      if (!b[i]) pb[i] = 0.0;

    std::vector<double> e = matvec(u, pb);
    for (std::size_t i = 0; i < e.size(); ++i)
      e[i] = inv_theta * e[i] - s.y[i];

    std::vector<double> qb = matvec_transposed(u, e);
    for (std::size_t i = 0; i < r; ++i)
      if (!b[i]) qb[i] = 0.0;

    const double eta = step_size(cfg, t);
    for (std::size_t i = 0; i < u.rows(); ++i) {
      const double ei = eta * e[i];
      const double xi = eta * s.x[i];
      for (std::size_t j = 0; j < r; ++j)
        u(i, j) -= ei * pb[j] + xi * qb[j];
    }
    record(t + 1);
  }

  out.u = std::move(u);
  return out;
}

}  // namespace droplin

#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "sdestream/model.hpp"
#include "sdestream/rng.hpp"

namespace sdestream {

/// Thrown when a simulated coordinate leaves [-1e12, 1e12] or turns non-finite.
class ExplosionError : public std::runtime_error {
 public:
  ExplosionError(long observation_index, double value)
      : std::runtime_error("simulation exploded at observation " +
                           std::to_string(observation_index) + " (value " +
                           std::to_string(value) + ")"),
        observation_index(observation_index), value(value) {}
  long observation_index;
  double value;
};

struct SimConfig {
  Vec x0;
  double h = 0.1;                 // observation step h_n; values outside (0,1] warn, not error
  long n_observations = 1;
  int substeps_per_observation = 20;
  std::uint64_t seed = 0;
};

/// Discrete observation skeleton {X_{i h}}, i = 0..n.
struct ObservationSeries {
  std::vector<Vec> states;  // n + 1 entries
  double h = 0.0;
  std::uint64_t seed = 0;
  long n() const { return static_cast<long>(states.size()) - 1; }
};

/// Incremental Euler-Maruyama driver: h is split into `substeps` fine steps,
/// each with independent Gaussian increments of variance (h/substeps) per
/// coordinate. Streaming interface so harnesses never materialize paths.
class PathSimulator {
 public:
  PathSimulator(const SdeModel& model, const Vec& x0, double h, int substeps, SplitRng rng);

  /// Advances one observation step and returns the new state.
  const Vec& step();
  const Vec& state() const { return x_; }
  long observations_done() const { return obs_done_; }
  const SplitRng& rng() const { return rng_; }

 private:
  const SdeModel* model_;
  double dt_, sq_dt_;
  int substeps_;
  long obs_done_ = 0;
  Vec x_, bx_, z_;
  Mat ax_;
  SplitRng rng_;
};

/// Simulates the observation skeleton. Deterministic given (model, config):
/// equal seeds give byte-identical series.
ObservationSeries simulate_path(const SdeModel& model, const SimConfig& config);

/// increments[i] = states[i+1] - states[i]; length n. Throws on series
/// shorter than two states.
std::vector<Vec> increments(const ObservationSeries& obs);

/// CSV with header t,x1,...,xd; one row per observation time i*h, full double
/// precision (17 significant digits).
void write_csv(const ObservationSeries& obs, std::ostream& out);

/// One-step moment/bias scaling estimates on a grid of step sizes.
/// mean_sq_norm[k]  ~ E||X_h - x||^2            (log-log slope ~ 1 in h)
/// bias_norm[k]     ~ ||E[X_h - x - h b(x)]||   (slope 1 + beta/2 or better)
/// The bias estimate subtracts the accumulated martingale part pathwise as a
/// control variate, which leaves its mean unchanged but removes nearly all of
/// the Monte-Carlo variance.
struct ScalingReport {
  std::vector<double> h;
  std::vector<double> mean_sq_norm;
  std::vector<double> bias_norm;
  double slope_mean_sq = 0.0;
  double slope_bias = 0.0;
  int reps = 0;
};

ScalingReport one_step_scaling_diagnostic(const SdeModel& model, const Vec& x,
                                          std::span<const double> h_grid, int reps,
                                          std::uint64_t seed, int substeps = 20);

/// Least-squares slope of log(y) on log(x); helper shared by diagnostics.
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace sdestream

#include "sdestream/simulate.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>

namespace sdestream {

namespace {

constexpr double kExplosionBound = 1e12;

void check_state(const Vec& x, long obs_index) {
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (!std::isfinite(x[j]) || std::abs(x[j]) > kExplosionBound)
      throw ExplosionError(obs_index, x[j]);
  }
}

}  // namespace

PathSimulator::PathSimulator(const SdeModel& model, const Vec& x0, double h, int substeps,
                             SplitRng rng)
    : model_(&model), substeps_(substeps), x_(x0), bx_(model.dim), z_(model.dim),
      ax_(model.dim, model.dim), rng_(rng) {
  if (x0.size() != model.dim)
    throw std::invalid_argument("PathSimulator: x0 dimension does not match model");
  if (!(h > 0.0)) throw std::invalid_argument("PathSimulator: h must be > 0");
  if (substeps < 1) throw std::invalid_argument("PathSimulator: substeps must be >= 1");
  dt_ = h / substeps;
  sq_dt_ = std::sqrt(dt_);
  check_state(x_, 0);
}

const Vec& PathSimulator::step() {
  for (int s = 0; s < substeps_; ++s) {
    model_->drift(x_, bx_);
    model_->diffusion(x_, ax_);
    for (Eigen::Index j = 0; j < z_.size(); ++j) z_[j] = rng_.next_normal();
    x_ += bx_ * dt_;
    x_.noalias() += ax_ * z_ * sq_dt_;
  }
  ++obs_done_;
  check_state(x_, obs_done_);
  return x_;
}

ObservationSeries simulate_path(const SdeModel& model, const SimConfig& config) {
  if (config.n_observations < 1)
    throw std::invalid_argument("simulate_path: n_observations must be >= 1");
  if (!(config.h > 0.0) || config.h > 1.0)
    std::cerr << "warning: simulate_path: h = " << config.h << " outside (0,1]\n";
  if (!(config.h > 0.0)) throw std::invalid_argument("simulate_path: h must be > 0");

  PathSimulator sim(model, config.x0, config.h, config.substeps_per_observation,
                    SplitRng(config.seed));
  ObservationSeries obs;
  obs.h = config.h;
  obs.seed = config.seed;
  obs.states.reserve(static_cast<std::size_t>(config.n_observations) + 1);
  obs.states.push_back(config.x0);
  for (long i = 0; i < config.n_observations; ++i) obs.states.push_back(sim.step());
  return obs;
}

std::vector<Vec> increments(const ObservationSeries& obs) {
  if (obs.states.size() < 2)
    throw std::invalid_argument("increments: series needs at least two states");
  std::vector<Vec> out;
  out.reserve(obs.states.size() - 1);
  for (std::size_t i = 1; i < obs.states.size(); ++i)
    out.push_back(obs.states[i] - obs.states[i - 1]);
  return out;
}

void write_csv(const ObservationSeries& obs, std::ostream& out) {
  out << "t";
  const int d = obs.states.empty() ? 0 : static_cast<int>(obs.states[0].size());
  for (int j = 1; j <= d; ++j) out << ",x" << j;
  out << "\n";
  char buf[32];
  for (std::size_t i = 0; i < obs.states.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(i) * obs.h);
    out << buf;
    for (int j = 0; j < d; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", obs.states[i][j]);
      out << "," << buf;
    }
    out << "\n";
  }
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("loglog_slope: need matching arrays of size >= 2");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double lx = std::log(x[k]);
    const double ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ScalingReport one_step_scaling_diagnostic(const SdeModel& model, const Vec& x,
                                          std::span<const double> h_grid, int reps,
                                          std::uint64_t seed, int substeps) {
  if (h_grid.empty()) throw std::invalid_argument("one_step_scaling_diagnostic: empty h grid");
  for (double h : h_grid)
    if (!(h > 0.0) || h > 1.0)
      throw std::invalid_argument("one_step_scaling_diagnostic: h values must be in (0,1]");
  if (reps < 100) throw std::invalid_argument("one_step_scaling_diagnostic: reps must be >= 100");

  ScalingReport rep;
  rep.reps = reps;
  SplitRng root(seed);
  const int d = model.dim;
  Vec bx(d), z(d), b_at_x(d);
  Mat ax(d, d);
  model.drift(x, b_at_x);

  for (std::size_t k = 0; k < h_grid.size(); ++k) {
    const double h = h_grid[k];
    const double dt = h / substeps;
    const double sq_dt = std::sqrt(dt);
    SplitRng stream = root.split(k);
    double sum_sq = 0.0;
    Vec bias_sum = Vec::Zero(d);
    for (int r = 0; r < reps; ++r) {
      SplitRng rr = stream.split(r);
      Vec xs = x;
      Vec mart = Vec::Zero(d);  // accumulated diffusion contribution, mean zero
      for (int s = 0; s < substeps; ++s) {
        model.drift(xs, bx);
        model.diffusion(xs, ax);
        for (int j = 0; j < d; ++j) z[j] = rr.next_normal();
        Vec kick = ax * z * sq_dt;
        xs += bx * dt + kick;
        mart += kick;
      }
      check_state(xs, 1);
      sum_sq += (xs - x).squaredNorm();
      bias_sum += (xs - x - mart);  // = sum of drift increments; E equals E[X_h - x]
    }
    Vec mean_drift_part = bias_sum / reps;
    rep.h.push_back(h);
    rep.mean_sq_norm.push_back(sum_sq / reps);
    rep.bias_norm.push_back((mean_drift_part - h * b_at_x).norm());
  }
  rep.slope_mean_sq = loglog_slope(rep.h, rep.mean_sq_norm);
  rep.slope_bias = loglog_slope(rep.h, rep.bias_norm);
  return rep;
}

}  // namespace sdestream

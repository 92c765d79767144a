#pragma once

#include <cstdint>
#include <optional>
#include <ostream>

#include "sdestream/model.hpp"

namespace sdestream {

/// Differentiable 1-strongly convex prox function. Two families, both with
/// closed-form mirror updates:
///   half-squared-Euclidean on a ParameterSpace (strong convexity in l2),
///   negative entropy on the probability simplex (strong convexity in l1).
class ProxFunction {
 public:
  enum class Kind { half_squared_euclidean, negative_entropy };

  static ProxFunction half_squared_euclidean(ParameterSpace space);
  static ProxFunction negative_entropy(int dim);

  Kind kind() const { return kind_; }
  int dim() const;
  double evaluate(const Vec& theta) const;
  Vec gradient(const Vec& theta) const;
  /// Domain membership: the space for the Euclidean kind, the open simplex
  /// for the entropy kind.
  bool in_domain(const Vec& theta, double tol = 1e-9) const;
  const ParameterSpace& space() const;

 private:
  ProxFunction() = default;
  Kind kind_ = Kind::half_squared_euclidean;
  std::optional<ParameterSpace> space_;
  int dim_ = 0;
};

/// D_psi(theta, theta') = psi(theta) - psi(theta') - <grad psi(theta'), theta - theta'>.
/// Nonnegative; at least half the squared norm by 1-strong convexity.
double bregman(const ProxFunction& prox, const Vec& theta, const Vec& theta_prime);

enum class ScheduleKind { drift_sqrt, drift_log, diffusion_sqrt, diffusion_log };

ScheduleKind schedule_kind_from_string(const std::string& name);
std::string to_string(ScheduleKind kind);

/// Learning-rate schedules:
///   drift-sqrt      eta_i = eta * h / sqrt(i)
///   drift-log       eta_i = eta * h / sqrt(i * log(n h^2)),  needs log(n h^2) >= 1
///   diffusion-sqrt  eta_i = eta * sqrt(h / i)
///   diffusion-log   eta_i = eta * sqrt(h / (i * log(n h))),  needs log(n h) >= 1
/// Construction fails when a log variant's precondition does not hold.
class Schedule {
 public:
  Schedule(ScheduleKind kind, double eta, double h, long n);

  double rate(long i) const;  // valid for 1 <= i <= n
  ScheduleKind kind() const { return kind_; }
  double eta() const { return eta_; }
  double h() const { return h_; }
  long n() const { return n_; }

 private:
  ScheduleKind kind_;
  double eta_, h_, log_factor_ = 1.0;
  long n_;
};

/// Mirror-descent iterate with running sum for the averaged estimator.
/// Single-owner; mutate sequentially.
class SmdState {
 public:
  SmdState(ProxFunction prox, Vec theta1);

  const Vec& current() const { return theta_; }
  /// Number of iterates visited so far (the running sum includes all of them,
  /// starting with theta_1).
  long step_index() const { return index_; }
  const Vec& running_sum() const { return sum_; }
  const ProxFunction& prox() const { return prox_; }

  /// One mirror update with subgradient K and rate eta_i. Euclidean kind:
  /// project(theta - eta K). Entropy kind: multiplicative weights,
  /// renormalized. Increments the index and adds the new iterate to the sum.
  void apply(const Vec& subgradient, double eta_i);

  /// Mean of all visited iterates. Euclidean kind re-projects the mean so the
  /// result lies in the space even after floating-point summation; entropy
  /// kind renormalizes onto the simplex.
  Vec averaged() const;

 private:
  ProxFunction prox_;
  Vec theta_, sum_;
  long index_ = 1;
};

/// Functional form of the update used by tests; forwards to SmdState::apply.
SmdState smd_step(const SmdState& state, const Vec& subgradient, double eta_i);

/// Averaged iterate of a state (free-function spelling of SmdState::averaged).
Vec averaged_iterate(const SmdState& state);

/// Rate accessor with range checking (free-function spelling of Schedule::rate).
double schedule_rate(const Schedule& schedule, long i);

/// Writes one trace row "i,theta_1,...,theta_p,eta_i".
void write_trace_row(std::ostream& out, long i, const Vec& theta, double eta_i);
void write_trace_header(std::ostream& out, int param_dim);

}  // namespace sdestream

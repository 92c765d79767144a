#include "sdestream/mirror.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace sdestream {

ProxFunction ProxFunction::half_squared_euclidean(ParameterSpace space) {
  ProxFunction p;
  p.kind_ = Kind::half_squared_euclidean;
  p.dim_ = space.dim();
  p.space_ = std::move(space);
  return p;
}

ProxFunction ProxFunction::negative_entropy(int dim) {
  if (dim < 2) throw std::invalid_argument("ProxFunction::negative_entropy: dim must be >= 2");
  ProxFunction p;
  p.kind_ = Kind::negative_entropy;
  p.dim_ = dim;
  return p;
}

int ProxFunction::dim() const { return dim_; }

const ParameterSpace& ProxFunction::space() const {
  if (!space_) throw std::logic_error("ProxFunction: entropy kind has no ParameterSpace");
  return *space_;
}

double ProxFunction::evaluate(const Vec& theta) const {
  if (theta.size() != dim_) throw std::invalid_argument("ProxFunction: dimension mismatch");
  if (kind_ == Kind::half_squared_euclidean) return 0.5 * theta.squaredNorm();
  double s = 0.0;
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    if (!(theta[j] > 0.0))
      throw std::domain_error("negative entropy: nonpositive coordinate");
    s += theta[j] * std::log(theta[j]);
  }
  return s;
}

Vec ProxFunction::gradient(const Vec& theta) const {
  if (theta.size() != dim_) throw std::invalid_argument("ProxFunction: dimension mismatch");
  if (kind_ == Kind::half_squared_euclidean) return theta;
  Vec g(theta.size());
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    if (!(theta[j] > 0.0))
      throw std::domain_error("negative entropy: nonpositive coordinate");
    g[j] = 1.0 + std::log(theta[j]);
  }
  return g;
}

bool ProxFunction::in_domain(const Vec& theta, double tol) const {
  if (theta.size() != dim_) return false;
  if (kind_ == Kind::half_squared_euclidean) return space_->contains(theta, tol);
  if (theta.minCoeff() <= 0.0) return false;
  return std::abs(theta.sum() - 1.0) <= tol;
}

double bregman(const ProxFunction& prox, const Vec& theta, const Vec& theta_prime) {
  if (prox.kind() == ProxFunction::Kind::half_squared_euclidean)
    return 0.5 * (theta - theta_prime).squaredNorm();
  // KL divergence on the simplex.
  double s = 0.0;
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    if (!(theta[j] > 0.0) || !(theta_prime[j] > 0.0))
      throw std::domain_error("bregman: negative entropy requires positive coordinates");
    s += theta[j] * std::log(theta[j] / theta_prime[j]);
  }
  return s;
}

ScheduleKind schedule_kind_from_string(const std::string& name) {
  if (name == "drift-sqrt") return ScheduleKind::drift_sqrt;
  if (name == "drift-log") return ScheduleKind::drift_log;
  if (name == "diffusion-sqrt") return ScheduleKind::diffusion_sqrt;
  if (name == "diffusion-log") return ScheduleKind::diffusion_log;
  throw std::invalid_argument("unknown schedule kind: " + name);
}

std::string to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::drift_sqrt: return "drift-sqrt";
    case ScheduleKind::drift_log: return "drift-log";
    case ScheduleKind::diffusion_sqrt: return "diffusion-sqrt";
    case ScheduleKind::diffusion_log: return "diffusion-log";
  }
  return "?";
}

Schedule::Schedule(ScheduleKind kind, double eta, double h, long n)
    : kind_(kind), eta_(eta), h_(h), n_(n) {
  if (!(eta > 0.0)) throw std::invalid_argument("Schedule: eta must be > 0");
  if (!(h > 0.0)) throw std::invalid_argument("Schedule: h must be > 0");
  if (n < 1) throw std::invalid_argument("Schedule: n must be >= 1");
  if (kind == ScheduleKind::drift_log) {
    log_factor_ = std::log(static_cast<double>(n) * h * h);
    if (!(log_factor_ >= 1.0))
      throw std::invalid_argument(
          "Schedule: drift-log requires log(n h^2) >= 1 (got log(n h^2) = " +
          std::to_string(log_factor_) + ")");
  } else if (kind == ScheduleKind::diffusion_log) {
    log_factor_ = std::log(static_cast<double>(n) * h);
    if (!(log_factor_ >= 1.0))
      throw std::invalid_argument(
          "Schedule: diffusion-log requires log(n h) >= 1 (got log(n h) = " +
          std::to_string(log_factor_) + ")");
  }
}

double Schedule::rate(long i) const {
  if (i < 1 || i > n_)
    throw std::invalid_argument("Schedule::rate: index " + std::to_string(i) +
                                " outside [1, " + std::to_string(n_) + "]");
  const double di = static_cast<double>(i);
  switch (kind_) {
    case ScheduleKind::drift_sqrt: return eta_ * h_ / std::sqrt(di);
    case ScheduleKind::drift_log: return eta_ * h_ / std::sqrt(di * log_factor_);
    case ScheduleKind::diffusion_sqrt: return eta_ * std::sqrt(h_ / di);
    case ScheduleKind::diffusion_log: return eta_ * std::sqrt(h_ / (di * log_factor_));
  }
  return 0.0;
}

SmdState::SmdState(ProxFunction prox, Vec theta1) : prox_(std::move(prox)), theta_(std::move(theta1)) {
  if (!prox_.in_domain(theta_, 1e-9))
    throw std::invalid_argument("SmdState: theta_1 outside the prox domain");
  sum_ = theta_;
}

void SmdState::apply(const Vec& subgradient, double eta_i) {
  if (!(eta_i > 0.0)) throw std::invalid_argument("SmdState::apply: eta_i must be > 0");
  if (subgradient.size() != theta_.size() || !subgradient.allFinite())
    throw std::invalid_argument("SmdState::apply: subgradient must be finite and of matching size");
  if (prox_.kind() == ProxFunction::Kind::half_squared_euclidean) {
    theta_ = prox_.space().project(theta_ - eta_i * subgradient);
  } else {
    // Multiplicative weights; shift the exponent for overflow safety
    // (renormalization makes the shift exact in the math).
    const Vec expo = -eta_i * subgradient;
    const double m = expo.maxCoeff();
    Vec w(theta_.size());
    for (Eigen::Index j = 0; j < theta_.size(); ++j)
      w[j] = theta_[j] * std::exp(expo[j] - m);
    theta_ = w / w.sum();
  }
  ++index_;
  sum_ += theta_;
}

Vec SmdState::averaged() const {
  Vec mean = sum_ / static_cast<double>(index_);
  if (prox_.kind() == ProxFunction::Kind::half_squared_euclidean)
    return prox_.space().project(mean);
  return mean / mean.sum();
}

SmdState smd_step(const SmdState& state, const Vec& subgradient, double eta_i) {
  SmdState next = state;
  next.apply(subgradient, eta_i);
  return next;
}

Vec averaged_iterate(const SmdState& state) { return state.averaged(); }

double schedule_rate(const Schedule& schedule, long i) { return schedule.rate(i); }

void write_trace_header(std::ostream& out, int param_dim) {
  out << "i";
  for (int j = 1; j <= param_dim; ++j) out << ",theta_" << j;
  out << ",eta_i\n";
}

void write_trace_row(std::ostream& out, long i, const Vec& theta, double eta_i) {
  char buf[32];
  out << i;
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g", theta[j]);
    out << "," << buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g", eta_i);
  out << "," << buf << "\n";
}

}  // namespace sdestream

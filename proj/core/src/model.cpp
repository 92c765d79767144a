#include "sdestream/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sdestream {

ParameterSpace ParameterSpace::box(Vec lower, Vec upper) {
  if (lower.size() < 1 || lower.size() != upper.size())
    throw std::invalid_argument("ParameterSpace::box: bounds must be nonempty and equal-sized");
  for (Eigen::Index j = 0; j < lower.size(); ++j) {
    if (!(lower[j] <= upper[j]))
      throw std::invalid_argument("ParameterSpace::box: lower > upper at coordinate " +
                                  std::to_string(j));
  }
  ParameterSpace s;
  s.kind_ = Kind::box;
  s.lower_ = std::move(lower);
  s.upper_ = std::move(upper);
  return s;
}

ParameterSpace ParameterSpace::ball(Vec center, double radius) {
  if (center.size() < 1) throw std::invalid_argument("ParameterSpace::ball: empty center");
  if (!(radius > 0.0)) throw std::invalid_argument("ParameterSpace::ball: radius must be > 0");
  ParameterSpace s;
  s.kind_ = Kind::ball;
  s.center_ = std::move(center);
  s.radius_ = radius;
  return s;
}

double ParameterSpace::diameter() const {
  if (kind_ == Kind::box) return (upper_ - lower_).norm();
  return 2.0 * radius_;
}

Vec ParameterSpace::project(const Vec& point) const {
  if (point.size() != dim())
    throw std::invalid_argument("ParameterSpace::project: dimension mismatch");
  if (kind_ == Kind::box) {
    Vec out(point.size());
    for (Eigen::Index j = 0; j < point.size(); ++j)
      out[j] = std::min(std::max(point[j], lower_[j]), upper_[j]);
    return out;
  }
  Vec diff = point - center_;
  double n = diff.norm();
  if (n <= radius_) return point;
  // Rescale until inside so that projecting the result again is the identity.
  Vec out = point;
  for (int pass = 0; pass < 8 && n > radius_; ++pass) {
    out = center_ + diff * (radius_ / n);
    diff = out - center_;
    n = diff.norm();
  }
  return out;
}

bool ParameterSpace::contains(const Vec& point, double tol) const {
  if (point.size() != dim()) return false;
  if (kind_ == Kind::box) {
    for (Eigen::Index j = 0; j < point.size(); ++j)
      if (point[j] < lower_[j] - tol || point[j] > upper_[j] + tol) return false;
    return true;
  }
  return (point - center_).norm() <= radius_ + tol;
}

Vec ParameterSpace::chebyshev_center() const {
  if (kind_ == Kind::box) return 0.5 * (lower_ + upper_);
  return center_;
}

bool ParameterSpace::operator==(const ParameterSpace& o) const {
  if (kind_ != o.kind_) return false;
  if (kind_ == Kind::box) return lower_ == o.lower_ && upper_ == o.upper_;
  return center_ == o.center_ && radius_ == o.radius_;
}

FamilyParams::FamilyParams(double alpha_, double beta_, double gamma_, double kappa0_,
                           double kappa1_, double varkappa1_, int dim_)
    : alpha(alpha_), beta(beta_), gamma(gamma_), kappa0(kappa0_), kappa1(kappa1_),
      varkappa1(varkappa1_), dim(dim_) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("FamilyParams: alpha in (0,1]");
  if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("FamilyParams: beta in [0,1]");
  if (!(gamma >= 0.0)) throw std::invalid_argument("FamilyParams: gamma >= 0");
  if (!(kappa0 >= 1.0)) throw std::invalid_argument("FamilyParams: kappa0 >= 1");
  if (!(kappa1 > 0.0)) throw std::invalid_argument("FamilyParams: kappa1 > 0");
  if (!(varkappa1 > 0.0)) throw std::invalid_argument("FamilyParams: varkappa1 > 0");
  if (dim < 1) throw std::invalid_argument("FamilyParams: dim >= 1");
}

LossWeights LossWeights::identity(int state_dim, int param_dim) {
  LossWeights w;
  w.weight = [state_dim](const Vec&, Mat& out) { out = Mat::Identity(state_dim, state_dim); };
  w.regularizer = [](const Vec&) { return 0.0; };
  w.regularizer_subgradient = [param_dim](const Vec&, Vec& out) { out = Vec::Zero(param_dim); };
  return w;
}

const ConditionCheck& ConditionReport::check(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw std::invalid_argument("ConditionReport: no check named " + name);
}

namespace {

void validate_grid(std::span<const ProbePair> grid) {
  if (grid.empty()) throw std::invalid_argument("condition check: empty probe grid");
  for (const auto& [x, y] : grid) {
    if (!x.allFinite() || !y.allFinite())
      throw std::invalid_argument("condition check: non-finite probe point");
  }
}

}  // namespace

ConditionReport check_drift_conditions(const SdeModel& model, const FamilyParams& family,
                                       std::span<const ProbePair> probe_grid) {
  validate_grid(probe_grid);
  ConditionReport report;

  // ||b(0)|| <= kappa1
  {
    ConditionCheck c;
    c.name = "drift-bound-at-zero";
    Vec zero = Vec::Zero(model.dim);
    double v = model.drift_at(zero).norm();
    c.worst_ratio = v / family.kappa1;
    c.threshold = 1.0;
    c.passed = c.worst_ratio <= 1.0 + 1e-12;
    c.witness_x = zero;
    c.detail = "||b(0)||_2 = " + std::to_string(v);
    report.checks.push_back(std::move(c));
  }

  // ||b(x)-b(y)|| <= kappa1 * (||x-y||^beta v ||x-y||), worst ratio over pairs
  {
    ConditionCheck c;
    c.name = "drift-hoelder";
    c.threshold = family.kappa1;
    double worst = 0.0;
    for (const auto& [x, y] : probe_grid) {
      double dxy = (x - y).norm();
      if (dxy == 0.0) continue;
      double denom = std::max(std::pow(dxy, family.beta), dxy);
      double ratio = (model.drift_at(x) - model.drift_at(y)).norm() / denom;
      if (ratio >= worst) {
        worst = ratio;
        c.witness_x = x;
        c.witness_y = y;
      }
    }
    c.worst_ratio = worst;
    c.passed = worst <= family.kappa1 * (1.0 + 1e-12);
    c.detail = "worst ||b(x)-b(y)|| / (||x-y||^beta v ||x-y||)";
    report.checks.push_back(std::move(c));
  }

  // <b(x),x> <= -varkappa1^{-1} ||x||^{1+gamma} + varkappa1; ratio normalized by varkappa1
  {
    ConditionCheck c;
    c.name = "drift-dissipativity";
    c.threshold = 1.0;
    double worst = -std::numeric_limits<double>::infinity();
    auto consider = [&](const Vec& x) {
      double lhs = model.drift_at(x).dot(x) +
                   std::pow(x.norm(), 1.0 + family.gamma) / family.varkappa1;
      double ratio = lhs / family.varkappa1;
      if (ratio > worst) {
        worst = ratio;
        c.witness_x = x;
      }
    };
    for (const auto& [x, y] : probe_grid) {
      consider(x);
      consider(y);
    }
    c.worst_ratio = worst;
    c.passed = worst <= 1.0 + 1e-12;
    c.detail = "worst (<b(x),x> + ||x||^{1+gamma}/varkappa1) / varkappa1";
    report.checks.push_back(std::move(c));
  }

  return report;
}

ConditionReport check_diffusion_conditions(const SdeModel& model, const FamilyParams& family,
                                           std::span<const ProbePair> probe_grid) {
  validate_grid(probe_grid);
  ConditionReport report;

  // kappa0^{-1} <= eigenvalues of a a^T <= kappa0; probe each grid point.
  {
    ConditionCheck c;
    c.name = "diffusion-ellipticity";
    c.threshold = 1.0;
    double worst = 0.0;
    auto consider = [&](const Vec& x) {
      Eigen::SelfAdjointEigenSolver<Mat> es(model.a_squared_at(x));
      double lo = es.eigenvalues().minCoeff();
      double hi = es.eigenvalues().maxCoeff();
      double ratio = std::max(hi / family.kappa0,
                              lo > 0.0 ? 1.0 / (family.kappa0 * lo)
                                       : std::numeric_limits<double>::infinity());
      if (ratio >= worst) {
        worst = ratio;
        c.witness_x = x;
        c.detail = "eigenvalues of a a^T in [" + std::to_string(lo) + ", " + std::to_string(hi) +
                   "] vs kappa0 = " + std::to_string(family.kappa0);
      }
    };
    for (const auto& [x, y] : probe_grid) {
      consider(x);
      consider(y);
    }
    c.worst_ratio = worst;
    c.passed = worst <= 1.0 + 1e-12;
    report.checks.push_back(std::move(c));
  }

  // ||a(x)-a(y)||_F <= kappa0 ||x-y||^alpha
  {
    ConditionCheck c;
    c.name = "diffusion-hoelder";
    c.threshold = family.kappa0;
    double worst = 0.0;
    for (const auto& [x, y] : probe_grid) {
      double dxy = (x - y).norm();
      if (dxy == 0.0) continue;
      double ratio = (model.diffusion_at(x) - model.diffusion_at(y)).norm() /
                     std::pow(dxy, family.alpha);
      if (ratio >= worst) {
        worst = ratio;
        c.witness_x = x;
        c.witness_y = y;
      }
    }
    c.worst_ratio = worst;
    c.passed = worst <= family.kappa0 * (1.0 + 1e-12);
    c.detail = "worst ||a(x)-a(y)||_F / ||x-y||^alpha";
    report.checks.push_back(std::move(c));
  }

  return report;
}

namespace {

Vec random_point_in(const ParameterSpace& space, SplitRng& rng) {
  const int p = space.dim();
  Vec v(p);
  if (space.kind() == ParameterSpace::Kind::box) {
    for (int j = 0; j < p; ++j)
      v[j] = space.lower()[j] + rng.next_uniform() * (space.upper()[j] - space.lower()[j]);
  } else {
    for (int j = 0; j < p; ++j) v[j] = rng.next_normal();
    v = space.center() + v * (space.radius() * rng.next_uniform() / std::max(v.norm(), 1e-300));
  }
  return v;
}

}  // namespace

bool is_affine_in_theta(const ParametricDriftModel& model, const ParameterSpace& space,
                        SplitRng rng, int trials, double tol) {
  for (int t = 0; t < trials; ++t) {
    Vec x(model.state_dim);
    for (int j = 0; j < model.state_dim; ++j) x[j] = 3.0 * rng.next_normal();
    Vec t1 = random_point_in(space, rng);
    Vec t2 = random_point_in(space, rng);
    Vec v0 = model.value_at(x, Vec::Zero(model.param_dim));
    Vec lhs = model.value_at(x, t1 + t2) - v0;
    Vec rhs = (model.value_at(x, t1) - v0) + (model.value_at(x, t2) - v0);
    if ((lhs - rhs).norm() > tol * (1.0 + lhs.norm() + rhs.norm())) return false;
  }
  return true;
}

bool is_affine_in_theta(const ParametricDiffusionModel& model, const ParameterSpace& space,
                        SplitRng rng, int trials, double tol) {
  for (int t = 0; t < trials; ++t) {
    Vec x(model.state_dim);
    for (int j = 0; j < model.state_dim; ++j) x[j] = 3.0 * rng.next_normal();
    Vec t1 = random_point_in(space, rng);
    Vec t2 = random_point_in(space, rng);
    Mat v0 = model.value_at(x, Vec::Zero(model.param_dim));
    Mat lhs = model.value_at(x, t1 + t2) - v0;
    Mat rhs = (model.value_at(x, t1) - v0) + (model.value_at(x, t2) - v0);
    if ((lhs - rhs).norm() > tol * (1.0 + lhs.norm() + rhs.norm())) return false;
  }
  return true;
}

double jacobian_fd_error(const ParametricDriftModel& model, const ParameterSpace& space,
                         SplitRng rng, int trials, double step) {
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    Vec x(model.state_dim);
    for (int j = 0; j < model.state_dim; ++j) x[j] = 2.0 * rng.next_normal();
    Vec theta = random_point_in(space, rng);
    Mat jac = model.jacobian_at(x, theta);
    Mat fd(model.state_dim, model.param_dim);
    for (int j = 0; j < model.param_dim; ++j) {
      double hj = step * std::max(1.0, std::abs(theta[j]));
      Vec tp = theta, tm = theta;
      tp[j] += hj;
      tm[j] -= hj;
      fd.col(j) = (model.value_at(x, tp) - model.value_at(x, tm)) / (2.0 * hj);
    }
    worst = std::max(worst, (jac - fd).norm() / (1.0 + jac.norm()));
  }
  return worst;
}

namespace {

double param_or(const std::map<std::string, double>& params, const std::string& key,
                double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

ParametricDriftModel linear_decay_drift_model() {
  // b^m(x, theta) = -theta * x, the scalar mean-reversion model.
  ParametricDriftModel m;
  m.state_dim = 1;
  m.param_dim = 1;
  m.value = [](const Vec& x, const Vec& th, Vec& out) { out = -th[0] * x; };
  m.theta_jacobian = [](const Vec& x, const Vec&, Mat& out) { out = -x; };
  return m;
}

}  // namespace

CatalogEntry make_catalog_model(const std::string& id,
                                const std::map<std::string, double>& params) {
  if (id == "ou") {
    const double theta = param_or(params, "theta", 1.0);
    const double sigma = param_or(params, "sigma", 1.0);
    if (!(theta > 0.0) || !(sigma > 0.0))
      throw std::invalid_argument("catalog ou: theta and sigma must be > 0");
    CatalogEntry e{
        id,
        SdeModel{1,
                 [theta](const Vec& x, Vec& out) { out = -theta * x; },
                 [sigma](const Vec&, Mat& out) { out = Mat::Constant(1, 1, sigma); }},
        linear_decay_drift_model(),
        std::nullopt,
        FamilyParams(1.0, 1.0, 1.0, std::max(sigma * sigma, 1.0 / (sigma * sigma)),
                     std::max(theta, 1e-8), std::max(1.0 / theta, 1.0), 1),
        ParameterSpace::box(Vec::Constant(1, 0.1), Vec::Constant(1, 3.0)),
        "Ornstein-Uhlenbeck: b(x) = -theta x, a = sigma; drift model b^m = -theta x"};
    return e;
  }
  if (id == "ou-sin") {
    CatalogEntry e{
        id,
        SdeModel{1,
                 [](const Vec& x, Vec& out) { out[0] = -x[0] - 0.5 * std::sin(x[0]); },
                 [](const Vec&, Mat& out) { out = Mat::Identity(1, 1); }},
        linear_decay_drift_model(),
        std::nullopt,
        FamilyParams(1.0, 1.0, 1.0, 1.0, 1.5, 2.0, 1),
        ParameterSpace::box(Vec::Constant(1, 0.1), Vec::Constant(1, 3.0)),
        "perturbed mean reversion: b(x) = -x - 0.5 sin x, a = 1; drift model b^m = -theta x "
        "(misspecified)"};
    return e;
  }
  if (id == "sqrt-theta-diffusion") {
    const double a2 = param_or(params, "a2", 2.0);
    if (!(a2 > 0.0)) throw std::invalid_argument("catalog sqrt-theta-diffusion: a2 must be > 0");
    ParametricDiffusionModel dm;
    dm.state_dim = 1;
    dm.param_dim = 1;
    dm.value = [](const Vec&, const Vec& th, Mat& out) { out = Mat::Constant(1, 1, th[0]); };
    dm.theta_jacobian = [](const Vec&, const Vec&, std::vector<Mat>& out) {
      out.assign(1, Mat::Constant(1, 1, 1.0));
    };
    CatalogEntry e{
        id,
        SdeModel{1,
                 [](const Vec& x, Vec& out) { out = -x; },
                 [a2](const Vec&, Mat& out) { out = Mat::Constant(1, 1, std::sqrt(a2)); }},
        std::nullopt,
        dm,
        FamilyParams(1.0, 1.0, 1.0, std::max(a2, 1.0 / a2), 1.0, 1.0, 1),
        // Theta excludes a neighbourhood of 0: A^m = theta must stay elliptic.
        ParameterSpace::box(Vec::Constant(1, 0.5), Vec::Constant(1, 4.0)),
        "constant diffusion target: dX = -X dt + sqrt(a2) dW; diffusion model A^m = theta"};
    return e;
  }
  throw std::invalid_argument("unknown catalog model id: " + id);
}

std::vector<std::string> catalog_ids() { return {"ou", "ou-sin", "sqrt-theta-diffusion"}; }

}  // namespace sdestream

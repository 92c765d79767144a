#pragma once

#include <Eigen/Dense>

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sdestream/rng.hpp"

namespace sdestream {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Compact convex parameter space with a closed-form Euclidean projection.
/// Boxes and balls only; both project in O(p).
class ParameterSpace {
 public:
  enum class Kind { box, ball };

  static ParameterSpace box(Vec lower, Vec upper);
  static ParameterSpace ball(Vec center, double radius);

  Kind kind() const { return kind_; }
  int dim() const { return static_cast<int>(lower_.size() > 0 ? lower_.size() : center_.size()); }
  /// Exact diameter: box -> ||upper - lower||_2, ball -> 2 * radius.
  double diameter() const;

  /// Euclidean-nearest point of the space; idempotent (interior points are
  /// returned unchanged, bit for bit).
  Vec project(const Vec& point) const;
  bool contains(const Vec& point, double tol = 0.0) const;
  /// Box midpoint / ball center; default initial iterate.
  Vec chebyshev_center() const;

  const Vec& lower() const { return lower_; }
  const Vec& upper() const { return upper_; }
  const Vec& center() const { return center_; }
  double radius() const { return radius_; }

  bool operator==(const ParameterSpace& o) const;

 private:
  ParameterSpace() = default;
  Kind kind_ = Kind::box;
  Vec lower_, upper_;   // box
  Vec center_;          // ball
  double radius_ = 0.0; // ball
};

/// Class parameters (alpha, beta, gamma, kappa0, kappa1, varkappa1) of the
/// coefficient family; range-checked on construction.
struct FamilyParams {
  double alpha;      // diffusion Hoelder exponent, (0,1]
  double beta;       // drift Hoelder exponent, [0,1]
  double gamma;      // dissipativity exponent, >= 0
  double kappa0;     // ellipticity / diffusion Hoelder constant, >= 1
  double kappa1;     // drift growth constant, > 0
  double varkappa1;  // dissipativity constant, > 0
  int dim;           // state dimension, >= 1

  FamilyParams(double alpha, double beta, double gamma, double kappa0, double kappa1,
               double varkappa1, int dim);
};

/// True coefficients (b, a) of dX = b(X) dt + a(X) dW.
/// Callables write into a caller-provided buffer so hot loops do not allocate.
struct SdeModel {
  int dim = 1;
  std::function<void(const Vec& x, Vec& out)> drift;
  std::function<void(const Vec& x, Mat& out)> diffusion;

  Vec drift_at(const Vec& x) const {
    Vec out(dim);
    drift(x, out);
    return out;
  }
  Mat diffusion_at(const Vec& x) const {
    Mat out(dim, dim);
    diffusion(x, out);
    return out;
  }
  /// A(x) = a(x) a(x)^T, the quadratic-variation target.
  Mat a_squared_at(const Vec& x) const {
    Mat a = diffusion_at(x);
    return a * a.transpose();
  }
};

/// Parametric drift model b^m(x, theta) with its analytic theta-Jacobian (d x p).
struct ParametricDriftModel {
  int state_dim = 1;
  int param_dim = 1;
  std::function<void(const Vec& x, const Vec& theta, Vec& out)> value;
  std::function<void(const Vec& x, const Vec& theta, Mat& out)> theta_jacobian;

  Vec value_at(const Vec& x, const Vec& theta) const {
    Vec out(state_dim);
    value(x, theta, out);
    return out;
  }
  Mat jacobian_at(const Vec& x, const Vec& theta) const {
    Mat out(state_dim, param_dim);
    theta_jacobian(x, theta, out);
    return out;
  }
};

/// Parametric diffusion model A^m(x, theta), symmetric d x d, with the stack
/// of p symmetric derivative matrices dA^m/dtheta_j.
struct ParametricDiffusionModel {
  int state_dim = 1;
  int param_dim = 1;
  std::function<void(const Vec& x, const Vec& theta, Mat& out)> value;
  std::function<void(const Vec& x, const Vec& theta, std::vector<Mat>& out)> theta_jacobian;

  Mat value_at(const Vec& x, const Vec& theta) const {
    Mat out(state_dim, state_dim);
    value(x, theta, out);
    return out;
  }
  std::vector<Mat> jacobian_at(const Vec& x, const Vec& theta) const {
    std::vector<Mat> out;
    theta_jacobian(x, theta, out);
    return out;
  }
};

/// Loss triple ingredients beyond the parametric model: PSD weight M(x),
/// regularizer J(theta) and a measurable selection from its subdifferential.
struct LossWeights {
  std::function<void(const Vec& x, Mat& out)> weight;
  std::function<double(const Vec& theta)> regularizer;
  std::function<void(const Vec& theta, Vec& out)> regularizer_subgradient;

  static LossWeights identity(int state_dim, int param_dim);

  Mat weight_at(const Vec& x, int d) const {
    Mat out(d, d);
    weight(x, out);
    return out;
  }
  Vec regularizer_subgradient_at(const Vec& theta) const {
    Vec out(theta.size());
    regularizer_subgradient(theta, out);
    return out;
  }
};

/// One grid-based condition check. A failure carries the violating input
/// (certificate); a pass is evidence on the probe grid only.
struct ConditionCheck {
  std::string name;
  bool passed = false;
  double worst_ratio = 0.0;  // condition satisfied on the grid iff <= threshold
  double threshold = 1.0;
  Vec witness_x;  // attains worst_ratio
  Vec witness_y;  // second point for pair-based checks, empty otherwise
  std::string detail;
};

struct ConditionReport {
  std::vector<ConditionCheck> checks;
  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
  const ConditionCheck& check(const std::string& name) const;
};

using ProbePair = std::pair<Vec, Vec>;

/// Checks the drift growth condition (bound at 0 plus the beta-Hoelder/linear
/// envelope against kappa1) and the dissipativity condition against
/// (gamma, varkappa1) on the probe grid.
ConditionReport check_drift_conditions(const SdeModel& model, const FamilyParams& family,
                                       std::span<const ProbePair> probe_grid);

/// Checks uniform ellipticity of a a^T against kappa0 at probe points and the
/// alpha-Hoelder modulus of a in Frobenius norm on probe pairs.
ConditionReport check_diffusion_conditions(const SdeModel& model, const FamilyParams& family,
                                           std::span<const ProbePair> probe_grid);

/// Affine-in-theta test used by the least-squares paths:
/// value(x, t1+t2) - value(x, 0) must equal the sum of the one-sided
/// differences on random inputs.
bool is_affine_in_theta(const ParametricDriftModel& model, const ParameterSpace& space,
                        SplitRng rng, int trials = 32, double tol = 1e-9);
bool is_affine_in_theta(const ParametricDiffusionModel& model, const ParameterSpace& space,
                        SplitRng rng, int trials = 32, double tol = 1e-9);

/// Max relative deviation between the analytic theta-Jacobian and central
/// finite differences over random (x, theta) draws.
double jacobian_fd_error(const ParametricDriftModel& model, const ParameterSpace& space,
                         SplitRng rng, int trials = 16, double step = 1e-5);

/// Built-in model catalog addressable by string id.
///
///   "ou"                    dX = -theta* X dt + sigma dW          (params: theta, sigma)
///   "ou-sin"                dX = (-X - 0.5 sin X) dt + dW          (no params)
///   "sqrt-theta-diffusion"  dX = -X dt + sqrt(a2) dW, A^m = theta  (params: a2)
///
/// Each entry bundles the true model, the associated parametric model(s), the
/// family constants it satisfies, and a default parameter space.
struct CatalogEntry {
  std::string id;
  SdeModel sde;
  std::optional<ParametricDriftModel> drift_model;
  std::optional<ParametricDiffusionModel> diffusion_model;
  FamilyParams family;
  ParameterSpace space;
  std::string doc;
};

CatalogEntry make_catalog_model(const std::string& id,
                                const std::map<std::string, double>& params = {});
std::vector<std::string> catalog_ids();

}  // namespace sdestream

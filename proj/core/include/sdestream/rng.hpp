#pragma once

#include <cstdint>
#include <cmath>
#include <limits>

namespace sdestream {

namespace detail {

// SplitMix64 finalizer (Vigna / Steele-Lea-Flood). Bijective on 64 bits.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Counter-based splittable generator.
///
/// A stream is a pair (key, counter); output i of a stream is
/// mix64(key + i * GOLDEN), so the whole sequence is a pure function of the
/// key and an integer position. Child streams derive a fresh key from
/// (key, stream index), which makes replication seeds independent of the
/// order in which replications actually run. State is two integers, so a
/// stream position can be checkpointed and restored exactly.
///
/// Normal variates use the inverse-CDF method (Wichura's AS241, PPND16),
/// one uniform per normal. The algorithm is branch-free with respect to the
/// generator state, so equal seeds give byte-identical output.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : key_(detail::mix64(seed ^ kKeyTweak)), counter_(0) {}

  /// Child stream for replication / component `index`; deterministic in (parent key, index).
  SplitRng split(std::uint64_t index) const {
    SplitRng child(0);
    child.key_ = detail::mix64(key_ + kLeap * (index + 1));
    child.counter_ = 0;
    return child;
  }

  std::uint64_t next_u64() {
    ++counter_;
    return detail::mix64(key_ + kGolden * counter_);
  }

  /// Uniform on the open interval (0,1); 53 random bits, never 0 or 1.
  double next_uniform() {
    const std::uint64_t bits = next_u64() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via inverse CDF.
  double next_normal() { return inverse_normal_cdf(next_uniform()); }

  std::uint64_t key() const { return key_; }
  std::uint64_t position() const { return counter_; }
  void seek(std::uint64_t position) { counter_ = position; }
  static SplitRng from_state(std::uint64_t key, std::uint64_t position) {
    SplitRng r(0);
    r.key_ = key;
    r.counter_ = position;
    return r;
  }

  /// Quantile of the standard normal distribution, p in (0,1).
  /// Wichura (1988), algorithm AS241, PPND16: relative error ~1e-16.
  static double inverse_normal_cdf(double p) {
    const double q = p - 0.5;
    if (q < 0.425 && q > -0.425) {
      const double r = 0.180625 - q * q;
      const double num =
          (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
              1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
            1.3314166789178437745e2) * r + 3.3871328727963666080e0);
      const double den =
          (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
              5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
            4.2313330701600911252e1) * r + 1.0);
      return q * num / den;
    }
    double r = q < 0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
      r -= 1.6;
      const double num =
          (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
              3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
            4.63033784615654529590e0) * r + 1.42343711074968357734e0);
      const double den =
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
              6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
            2.05319162663775882187e0) * r + 1.0);
      val = num / den;
    } else {
      r -= 5.0;
      const double num =
          (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
              2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
            5.46378491116411436990e0) * r + 6.65790464350110377720e0);
      const double den =
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
              1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
            5.99832206555887937690e-1) * r + 1.0);
      val = num / den;
    }
    return q < 0 ? -val : val;
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kLeap = 0xD1B54A32D192ED03ULL;
  static constexpr std::uint64_t kKeyTweak = 0x8E31A0C7B2D45F19ULL;

  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace sdestream

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace spindle {

using Vec2 = Eigen::Vector2d;

inline constexpr double kPi = std::numbers::pi_v<double>;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi_v<double>;

/// Default number of arclength samples for reconstructed boundaries.
inline constexpr int kDefaultSamples = 4096;

inline double cross2(const Vec2& a, const Vec2& b) {
  return a.x() * b.y() - a.y() * b.x();
}

/// Reduce s into [0, period).
inline double wrap(double s, double period) {
  double r = std::fmod(s, period);
  if (r < 0.0) r += period;
  return r;
}

/// Lift angle a into [base, base + 2*pi).
inline double lift_angle(double a, double base) {
  return base + wrap(a - base, kTwoPi);
}

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Counter-based generator: every labeled stream is an independent
/// deterministic function of (seed, label), so adding a sweep never
/// perturbs the samples of another.
class Rng {
 public:
  Rng(std::uint64_t seed, std::string_view label) {
    state_ = seed ^ 0x9e3779b97f4a7c15ULL;
    for (char c : label) state_ = mix(state_ ^ static_cast<std::uint64_t>(c));
    state_ = mix(state_);
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int lo, int hi_inclusive) {
    return lo + static_cast<int>(next_u64() %
                                 static_cast<std::uint64_t>(hi_inclusive - lo + 1));
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_ = 0;
};

}  // namespace spindle

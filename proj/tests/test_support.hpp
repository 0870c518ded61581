#pragma once

// Shared helpers for the unit tests: seeded parameter generators, an
// independent Simpson integrator, ulp distances and direct (non-reduced)
// evaluations of the textbook formulas in an arbitrary unit system.

#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <limits>
#include <random>

#include "catdec/physcore.hpp"

namespace catdec::testing {

inline std::int64_t ulp_distance(double a, double b) {
  if (a == b) return 0;
  if (std::signbit(a) != std::signbit(b)) return std::numeric_limits<std::int64_t>::max();
  std::int64_t ia, ib;
  std::memcpy(&ia, &a, sizeof a);
  std::memcpy(&ib, &b, sizeof b);
  return ia > ib ? ia - ib : ib - ia;
}

inline double relative_error(double actual, double expected) {
  if (expected == 0.0) return std::abs(actual);
  return std::abs(actual - expected) / std::abs(expected);
}

/// Composite Simpson rule on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return sum * h / 3.0;
}

/// Uniform draws for property tests; every test seeds its own generator.
class Draws {
 public:
  explicit Draws(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Physical parameters in hbar = k = 1 units with O(1) magnitudes.
inline CatParams random_unit_params(Draws& d) {
  CatParams p;
  p.mass = d.uniform(0.3, 3.0);
  p.sigma = d.uniform(0.4, 2.5);
  p.separation = d.uniform(0.0, 12.0) * p.sigma;
  p.drift_velocity = d.uniform(-1.5, 1.5);
  p.temperature = d.uniform(0.0, 4.0);
  return p;
}

// Direct evaluation of the density formulas with explicit hbar, k, m, sigma.
struct DirectFormulas {
  CatParams p;
  double hbar;
  double k;

  double conditional_variance(double t) const {
    return p.sigma * p.sigma + hbar * hbar * t * t / (4.0 * p.mass * p.mass * p.sigma * p.sigma);
  }
  double thermal_variance(double t) const {
    return conditional_variance(t) + k * p.temperature / p.mass * t * t;
  }
  double norm_factor() const {
    return 2.0 * (1.0 + std::exp(-p.separation * p.separation / (8.0 * p.sigma * p.sigma)));
  }
  double probability(double x, double t) const {
    const double W2 = conditional_variance(t);
    const double d = p.separation;
    const double y = x - p.drift_velocity * t;
    const double cross = 2.0 * std::exp(-(y * y + d * d / 4.0) / (2.0 * W2)) *
                         std::cos(hbar * t * d * y / (4.0 * p.mass * p.sigma * p.sigma * W2));
    return (std::exp(-(y - d / 2) * (y - d / 2) / (2 * W2)) +
            std::exp(-(y + d / 2) * (y + d / 2) / (2 * W2)) + cross) /
           (norm_factor() * std::sqrt(2.0 * M_PI * W2));
  }
  double thermal_probability(double x, double t) const {
    const double W2 = conditional_variance(t);
    const double w2 = thermal_variance(t);
    const double d = p.separation;
    const double q = hbar * t / (2.0 * p.mass * p.sigma * p.sigma);
    const double env = std::exp(-x * x / (2 * w2) -
                                (w2 + k * p.temperature / p.mass * t * t * q * q) / (W2 * w2) *
                                    d * d / 8.0);
    const double cross =
        2.0 * env * std::cos(hbar * t * d * x / (4.0 * p.mass * p.sigma * p.sigma * w2));
    return (std::exp(-(x - d / 2) * (x - d / 2) / (2 * w2)) +
            std::exp(-(x + d / 2) * (x + d / 2) / (2 * w2)) + cross) /
           (norm_factor() * std::sqrt(2.0 * M_PI * w2));
  }
  double log_attenuation(double t) const {
    const double s = k * p.temperature / p.mass * t * t;
    const double sig2 = p.sigma * p.sigma;
    return -s * p.separation * p.separation /
           (8 * sig2 * sig2 + 8 * sig2 * s + 2 * hbar * hbar * t * t / (p.mass * p.mass));
  }
};

}  // namespace catdec::testing

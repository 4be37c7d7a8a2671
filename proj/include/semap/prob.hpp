#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace semap {

using Vec = std::vector<double>;

constexpr double kSumTolerance = 1e-9;
constexpr double kRenormTolerance = 1e-6;

inline double logistic(double l) { return 1.0 / (1.0 + std::exp(-l)); }

inline double log_odds(double p) { return std::log(p / (1.0 - p)); }

inline double clamp(double v, double lo, double hi) {
  return v < lo ? lo : (v > hi ? hi : v);
}

inline bool all_finite(const Vec& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

inline double sum(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

/// In-place normalization to sum 1. Throws on a degenerate (all-zero or
/// non-finite) vector.
inline void normalize(Vec& v, const std::string& what = "vector") {
  if (!all_finite(v)) throw std::invalid_argument(what + ": non-finite entry");
  double s = 0.0;
  for (double x : v) {
    if (x < 0.0) throw std::invalid_argument(what + ": negative entry");
    s += x;
  }
  if (s <= 0.0) throw std::invalid_argument(what + ": degenerate (sum is zero)");
  for (double& x : v) x /= s;
}

inline Vec normalized(Vec v, const std::string& what = "vector") {
  normalize(v, what);
  return v;
}

/// Validates a probability distribution. Renormalizes when the sum is off by
/// at most kRenormTolerance, rejects anything worse.
inline Vec make_distribution(Vec v, const std::string& what = "distribution") {
  if (v.empty()) throw std::invalid_argument(what + ": empty");
  if (!all_finite(v)) throw std::invalid_argument(what + ": non-finite entry");
  double s = 0.0;
  for (double x : v) {
    if (x < 0.0) throw std::invalid_argument(what + ": negative entry");
    s += x;
  }
  if (std::abs(s - 1.0) > kRenormTolerance)
    throw std::invalid_argument(what + ": sum " + std::to_string(s) +
                                " too far from 1");
  for (double& x : v) x /= s;
  return v;
}

inline std::size_t argmax_lowest_tie(const Vec& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

}  // namespace semap

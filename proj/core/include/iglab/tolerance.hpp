#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>

namespace iglab {

inline constexpr double kMetricRelTol = 1e-12;
inline constexpr double kMetricAbsTol = 1e-15;

/// |a - b| ≤ max(rel·max(|a|, |b|), abs)
inline bool nearly_equal(double a, double b, double rel = kMetricRelTol,
                         double abs = kMetricAbsTol) {
  if (a == b) return true;
  return std::fabs(a - b) <= std::max(rel * std::max(std::fabs(a), std::fabs(b)), abs);
}

/// a ≤ b up to the same tolerance.
inline bool nearly_le(double a, double b, double rel = kMetricRelTol, double abs = kMetricAbsTol) {
  return a <= b || nearly_equal(a, b, rel, abs);
}

/// Scale for residual tolerances: largest magnitude among the compared
/// quantities, floored at 1.
inline double residual_scale(std::initializer_list<double> values) {
  double s = 1.0;
  for (double v : values) s = std::max(s, std::fabs(v));
  return s;
}

}  // namespace iglab

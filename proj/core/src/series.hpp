#pragma once

#include <cmath>

namespace skatepark::detail {

// sinh(x) - x without cancellation near 0.
inline double sinh_minus_x(double x) {
  if (std::abs(x) > 0.5) return std::sinh(x) - x;
  double x2 = x * x, term = x * x2 / 6, sum = 0;
  for (int n = 1; n < 12; ++n) {
    sum += term;
    term *= x2 / ((2 * n + 2) * (2 * n + 3));
  }
  return sum;
}

// x - sin(x) without cancellation near 0.
inline double x_minus_sin(double x) {
  if (std::abs(x) > 0.5) return x - std::sin(x);
  double x2 = x * x, term = x * x2 / 6, sum = 0;
  for (int n = 1; n < 12; ++n) {
    sum += term;
    term *= -x2 / ((2 * n + 2) * (2 * n + 3));
  }
  return sum;
}

}  // namespace skatepark::detail

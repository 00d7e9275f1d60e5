#pragma once

// Shared oracle helpers for the test suites. Everything here is deliberately
// independent of the library's analytic code paths.

#include <algorithm>
#include <functional>
#include <vector>

#include "ridgecrest/rng.hpp"
#include "ridgecrest/types.hpp"

namespace rctest {

using ridgecrest::CountedRng;
using ridgecrest::Matrix;
using ridgecrest::Vector;

//! 5-point central first-derivative stencil, O(h^4) truncation.
inline double fd_apply(const std::function<double(const Vector&)>& f, Vector& point,
                       const std::vector<int>& axes, std::size_t level, double h) {
  if (level == axes.size()) return f(point);
  const int axis = axes[level];
  const double orig = point[axis];
  auto eval = [&](double offset) {
    point[axis] = orig + offset;
    const double value = fd_apply(f, point, axes, level + 1, h);
    point[axis] = orig;
    return value;
  };
  return (-eval(2.0 * h) + 8.0 * eval(h) - 8.0 * eval(-h) + eval(-2.0 * h)) / (12.0 * h);
}

//! Mixed partial by finite differences; `axes` lists one entry per
//! derivative application (repeat an axis for higher order).
inline double fd_partial(const std::function<double(const Vector&)>& f, const Vector& point,
                         const std::vector<int>& axes, double h) {
  Vector work = point;
  return fd_apply(f, work, axes, 0, h);
}

inline Vector random_vector(CountedRng& rng, int dim, double scale = 1.0) {
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = scale * rng.next_normal();
  return v;
}

inline Matrix random_matrix(CountedRng& rng, int rows, int cols, double scale = 1.0) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = scale * rng.next_normal();
  return m;
}

//! Standard-normal sample matrix (the analytic-truth fixtures).
inline Matrix standard_normal_samples(std::uint64_t seed, int n, int dim) {
  CountedRng rng(seed);
  return random_matrix(rng, n, dim);
}

inline double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

inline double relative_error(double actual, double expected) {
  const double denom = std::max({std::abs(actual), std::abs(expected), 1e-12});
  return std::abs(actual - expected) / denom;
}

//! Relative error with a magnitude floor: values far below `scale` (for
//! example near polynomial roots of a derivative) are compared against the
//! natural scale of the quantity instead of against themselves.
inline double scaled_relative_error(double actual, double expected, double scale) {
  const double denom = std::max({std::abs(actual), std::abs(expected), std::abs(scale)});
  return std::abs(actual - expected) / denom;
}

}  // namespace rctest

#pragma once

// Series utilities shared by the curve analysis and event detection code.
// Window arithmetic is evaluated per index with a fixed summation order so that
// batch and incremental evaluation produce bit-identical results.

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <vector>

#include "domegrip/errors.hpp"

namespace domegrip {

/// Extent of a centered window of `window` samples around an index. Even
/// windows take one more sample behind than ahead (k/2 back, k/2 - 1 forward).
struct WindowExtent {
  Eigen::Index behind;
  Eigen::Index ahead;

  explicit WindowExtent(Eigen::Index window) : behind(window / 2), ahead(window - 1 - window / 2) {
    detail::require(window >= 1, "window must be at least 1");
  }
};

/// Mean of data[i - behind .. i + ahead], clipped to [0, n).
template <typename Scalar>
Scalar window_mean_at(const Scalar* data, Eigen::Index n, Eigen::Index i, WindowExtent extent) {
  const Eigen::Index lo = std::max<Eigen::Index>(0, i - extent.behind);
  const Eigen::Index hi = std::min<Eigen::Index>(n - 1, i + extent.ahead);
  Scalar sum(0);
  for (Eigen::Index j = lo; j <= hi; ++j) sum += data[j];
  return sum / Scalar(hi - lo + 1);
}

/// Central moving mean with truncated boundary windows; output length equals input length.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> central_moving_mean(
    const Eigen::MatrixBase<Derived>& series, Eigen::Index window) {
  using Scalar = typename Derived::Scalar;
  const WindowExtent extent(window);
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x = series;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = window_mean_at(x.data(), x.size(), i, extent);
  return out;
}

/// Least-squares slope of y against x over [lo, hi].
template <typename Scalar>
Scalar least_squares_slope(const Scalar* x, const Scalar* y, Eigen::Index lo, Eigen::Index hi) {
  const Eigen::Index count = hi - lo + 1;
  if (count < 2) return Scalar(0);
  Scalar mx(0), my(0);
  for (Eigen::Index j = lo; j <= hi; ++j) {
    mx += x[j];
    my += y[j];
  }
  mx /= Scalar(count);
  my /= Scalar(count);
  Scalar sxy(0), sxx(0);
  for (Eigen::Index j = lo; j <= hi; ++j) {
    const Scalar dx = x[j] - mx;
    sxy += dx * (y[j] - my);
    sxx += dx * dx;
  }
  return sxx > Scalar(0) ? sxy / sxx : Scalar(0);
}

/// Least-squares slope of y against its sample index over [lo, hi].
template <typename Scalar>
Scalar index_slope(const Scalar* y, Eigen::Index lo, Eigen::Index hi) {
  const Eigen::Index count = hi - lo + 1;
  if (count < 2) return Scalar(0);
  const Scalar mid = Scalar(lo + hi) / Scalar(2);
  Scalar my(0);
  for (Eigen::Index j = lo; j <= hi; ++j) my += y[j];
  my /= Scalar(count);
  Scalar sxy(0), sxx(0);
  for (Eigen::Index j = lo; j <= hi; ++j) {
    const Scalar dx = Scalar(j) - mid;
    sxy += dx * (y[j] - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

/// Linear interpolation of (xs, ys) at xq. xs must be strictly monotone
/// (either direction); queries outside the range take the nearest end value.
template <typename Scalar>
Scalar interpolate_linear(const Scalar* xs, const Scalar* ys, Eigen::Index n, Scalar xq) {
  detail::require(n >= 1, "interpolation needs at least one node");
  if (n == 1) return ys[0];
  const bool increasing = xs[n - 1] > xs[0];
  const auto before = [increasing](Scalar a, Scalar b) { return increasing ? a < b : a > b; };
  if (!before(xs[0], xq)) return ys[0];
  if (!before(xq, xs[n - 1])) return ys[n - 1];
  // first node strictly past xq
  const Scalar* it = std::upper_bound(xs, xs + n, xq, before);
  const Eigen::Index hi = it - xs;
  const Eigen::Index lo = hi - 1;
  const Scalar t = (xq - xs[lo]) / (xs[hi] - xs[lo]);
  return ys[lo] + t * (ys[hi] - ys[lo]);
}

template <typename Scalar>
Scalar median(std::vector<Scalar> values) {
  detail::require(!values.empty(), "median of an empty set");
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  std::nth_element(values.begin(), mid, values.end());
  if (values.size() % 2 == 1) return *mid;
  const Scalar upper = *mid;
  const Scalar lower = *std::max_element(values.begin(), mid);
  return (lower + upper) / Scalar(2);
}

/// median(|v - median(v)|), unscaled.
template <typename Scalar>
Scalar median_absolute_deviation(const std::vector<Scalar>& values) {
  const Scalar center = median(values);
  std::vector<Scalar> deviations(values.size());
  std::transform(values.begin(), values.end(), deviations.begin(),
                 [center](Scalar v) { return std::abs(v - center); });
  return median(std::move(deviations));
}

}  // namespace domegrip

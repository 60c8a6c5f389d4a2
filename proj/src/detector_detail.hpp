#pragma once

// Per-sample decision logic shared by the batch detectors and StreamDetector.
// Both paths feed identical values through these helpers in index order.

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <optional>

#include "domegrip/detector.hpp"
#include "domegrip/signal.hpp"

namespace domegrip::detail {

inline EventRecord make_event(EventKind kind, Eigen::Index index, const PVSample& sample,
                              double initial_volume_ml, double metric) {
  return {kind, index, std::abs(sample.syringe_volume_ml) / initial_volume_ml, sample.time_s, metric};
}

/// Slope of the smoothed release metric around sample i.
inline double release_slope_at(const double* smoothed, Eigen::Index n, Eigen::Index i,
                               WindowExtent extent) {
  return index_slope(smoothed, std::max<Eigen::Index>(0, i - extent.behind),
                     std::min<Eigen::Index>(n - 1, i + extent.ahead));
}

struct ReleaseTracker {
  double threshold;
  bool armed = false;

  bool feed(double smoothed, double slope) {
    if (smoothed >= threshold) {
      armed = true;
      return false;
    }
    return armed && slope < 0.0;
  }
};

struct Excursion {
  Eigen::Index peak;
  double value;
};

/// Tracks contiguous runs of values above a threshold and reports each run's peak.
struct ExcursionTracker {
  double threshold;
  Eigen::Index peak = -1;
  double peak_value = 0.0;

  std::optional<Excursion> feed(Eigen::Index i, double magnitude) {
    if (magnitude > threshold) {
      if (peak < 0 || magnitude > peak_value) {
        peak = i;
        peak_value = magnitude;
      }
      return std::nullopt;
    }
    return close();
  }

  std::optional<Excursion> close() {
    if (peak < 0) return std::nullopt;
    Excursion done{peak, peak_value};
    peak = -1;
    peak_value = 0.0;
    return done;
  }
};

inline double leading_mean(const double* data, Eigen::Index count) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < count; ++j) sum += data[j];
  return sum / static_cast<double>(count);
}

inline double spike_magnitude(double smoothed_pressure, double baseline, double reference_mean_pa) {
  return std::abs(smoothed_pressure - baseline) / std::abs(reference_mean_pa);
}

}  // namespace domegrip::detail

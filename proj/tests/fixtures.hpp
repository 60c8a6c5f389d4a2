#pragma once

#include <Eigen/Core>
#include <functional>
#include <numbers>
#include <vector>

#include "domegrip/pv_data.hpp"
#include "domegrip/synthetic.hpp"

namespace domegrip::testing {

inline constexpr double kHalfPi = std::numbers::pi / 2.0;

inline GripperDesignd design() { return synth::demo_design(); }

/// Curve sampled at |dV/V0| = x_k with pressure p(x_k), one sample per 0.02 s.
inline PVCurve curve_of(const Eigen::VectorXd& x, const std::function<double(double)>& p,
                        SweepDirection direction = SweepDirection::Deflation) {
  const GripperDesignd d = design();
  const double v0 = design_cavity_volume_ml(d);
  std::vector<PVSample> samples;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    samples.push_back({0.02 * static_cast<double>(k), p(x[k]), x[k] * v0});
  }
  return PVCurve(samples, direction, d);
}

inline Eigen::VectorXd grid(double lo, double hi, Eigen::Index n) {
  return Eigen::VectorXd::LinSpaced(n, lo, hi);
}

inline double relative_error(double actual, double expected) {
  return std::abs(actual - expected) / std::abs(expected);
}

}  // namespace domegrip::testing

#include "domegrip/pv_data.hpp"

#include <algorithm>
#include <cmath>

#include "domegrip/signal.hpp"

namespace domegrip {

using detail::require;

double design_cavity_volume_ml(const GripperDesignd& design) {
  return design.geometry().cavity_volume() * 1e6;
}

PVCurve::PVCurve(std::span<const PVSample> samples, SweepDirection direction, GripperDesignd design,
                 std::optional<double> initial_volume_ml)
    : direction_(direction),
      design_(std::move(design)),
      initial_volume_ml_(initial_volume_ml.value_or(design_cavity_volume_ml(design_))) {
  require(samples.size() >= 2, "a pressure-volume curve needs at least 2 samples");
  require(std::isfinite(initial_volume_ml_) && initial_volume_ml_ > 0,
          "initial cavity volume must be positive");
  const auto n = static_cast<Eigen::Index>(samples.size());
  times_.resize(n);
  pressures_.resize(n);
  volumes_ml_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const PVSample& s = samples[static_cast<std::size_t>(i)];
    require(std::isfinite(s.time_s) && std::isfinite(s.gauge_pressure_pa) &&
                std::isfinite(s.syringe_volume_ml),
            "pressure-volume samples must be finite");
    if (i > 0) require(s.time_s > times_[i - 1], "sample times must be strictly increasing");
    times_[i] = s.time_s;
    pressures_[i] = s.gauge_pressure_pa;
    volumes_ml_[i] = s.syringe_volume_ml;
  }
  const double trend = volumes_ml_[n - 1] - volumes_ml_[0];
  if (direction_ == SweepDirection::Deflation) {
    require(trend > 0, "deflation curve must extract volume overall");
  } else {
    require(trend < 0, "inflation curve must return volume overall");
  }
}

std::vector<PVSample> PVCurve::samples() const {
  std::vector<PVSample> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (Eigen::Index i = 0; i < size(); ++i) out.push_back(sample(i));
  return out;
}

PVCurve PVCurve::with_pressures(const Eigen::VectorXd& pressures_pa) const {
  require(pressures_pa.size() == size(), "replacement pressures must match the curve length");
  auto s = samples();
  for (std::size_t i = 0; i < s.size(); ++i) s[i].gauge_pressure_pa = pressures_pa[static_cast<Eigen::Index>(i)];
  return PVCurve(s, direction_, design_, initial_volume_ml_);
}

PVCurve PVCurve::with_volumes(const Eigen::VectorXd& volumes_ml) const {
  require(volumes_ml.size() == size(), "replacement volumes must match the curve length");
  auto s = samples();
  for (std::size_t i = 0; i < s.size(); ++i) s[i].syringe_volume_ml = volumes_ml[static_cast<Eigen::Index>(i)];
  return PVCurve(s, direction_, design_, initial_volume_ml_);
}

Eigen::VectorXd normalize_pressure(const PVCurve& curve) {
  const double scale = curve.design().pressure_scale();
  require(scale > 0, "pressure scale E h_bar^3 must be positive");
  return curve.pressures() / scale;
}

Eigen::VectorXd denormalize_pressure(const Eigen::VectorXd& normalized, const GripperDesignd& design) {
  return normalized * design.pressure_scale();
}

Eigen::VectorXd compressibility_correct(const PVCurve& curve, double v0_system_ml, double p0_abs_pa,
                                        double ambient_pa) {
  require(std::isfinite(v0_system_ml) && v0_system_ml > 0, "system volume must be positive");
  require(std::isfinite(p0_abs_pa) && p0_abs_pa > 0, "initial absolute pressure must be positive");
  const Eigen::ArrayXd absolute = curve.pressures().array() + ambient_pa;
  require((absolute > 0).all(),
          "absolute system pressure must stay positive (check the ambient offset)");
  return (curve.volumes_ml().array() + (absolute - p0_abs_pa) / absolute * v0_system_ml).matrix();
}

double volume_from_temperature(double delta_temperature, double thermal_expansion) {
  return 3.0 * thermal_expansion * delta_temperature;
}

namespace {

double native_spacing(const Eigen::VectorXd& x) {
  return (x.maxCoeff() - x.minCoeff()) / static_cast<double>(x.size() - 1);
}

void require_strictly_monotone(const Eigen::VectorXd& x) {
  const bool increasing = x[x.size() - 1] > x[0];
  for (Eigen::Index i = 1; i < x.size(); ++i) {
    require(increasing ? x[i] > x[i - 1] : x[i] < x[i - 1],
            "volume fraction must be strictly monotone to resample");
  }
}

}  // namespace

ResampledPair resample_to_common_grid(const PVCurve& a, const PVCurve& b) {
  const Eigen::VectorXd xa = a.abs_volume_fraction();
  const Eigen::VectorXd xb = b.abs_volume_fraction();
  require_strictly_monotone(xa);
  require_strictly_monotone(xb);
  const double lo = std::max(xa.minCoeff(), xb.minCoeff());
  const double hi = std::min(xa.maxCoeff(), xb.maxCoeff());
  require(hi > lo, "curves cover disjoint volume ranges");

  const double step = std::min(native_spacing(xa), native_spacing(xb));
  const auto count = static_cast<Eigen::Index>(std::floor((hi - lo) / step * (1 + 1e-12))) + 1;
  Eigen::VectorXd grid(count);
  for (Eigen::Index k = 0; k < count; ++k) grid[k] = lo + step * static_cast<double>(k);
  if (xa[xa.size() - 1] < xa[0]) grid.reverseInPlace();

  ResampledPair out{grid, Eigen::VectorXd(count), Eigen::VectorXd(count)};
  for (Eigen::Index k = 0; k < count; ++k) {
    out.first[k] = interpolate_linear(xa.data(), a.pressures().data(), xa.size(), grid[k]);
    out.second[k] = interpolate_linear(xb.data(), b.pressures().data(), xb.size(), grid[k]);
  }
  return out;
}

ForceTrace::ForceTrace(std::vector<ForceSample> samples) : samples_(std::move(samples)) {
  require(!samples_.empty(), "force trace is empty");
  for (const auto& s : samples_) {
    require(std::isfinite(s.time_s) && std::isfinite(s.force_n), "force samples must be finite");
  }
}

double max_payload_ratio(const ForceTrace& trace, const GripperDesignd& design, double gravity) {
  require(gravity > 0, "gravity must be positive");
  const auto peak = std::max_element(trace.samples().begin(), trace.samples().end(),
                                     [](const ForceSample& l, const ForceSample& r) {
                                       return l.force_n < r.force_n;
                                     });
  return peak->force_n / (design.mass() * gravity);
}

}  // namespace domegrip

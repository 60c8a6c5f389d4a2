#pragma once

// Pressure-volume records: validation, normalization, smoothing, alignment,
// compressibility correction and the payload ratio.
//
// Sign convention: gauge pressure is negative under suction, and the cavity
// volume fraction dV/V0 is negative once fluid has been extracted. Use the
// abs_* accessors where magnitudes are wanted.

#include <Eigen/Core>
#include <optional>
#include <span>
#include <vector>

#include "domegrip/core.hpp"

namespace domegrip {

inline constexpr double kStandardAtmospherePa = 101325.0;
inline constexpr double kStandardGravity = 9.81;

enum class SweepDirection { Deflation, Inflation };

struct PVSample {
  double time_s;
  double gauge_pressure_pa;
  /// Cumulative fluid extracted from the cavity (mL), positive once deflated.
  double syringe_volume_ml;
};

/// One deflation or inflation sweep. Immutable once constructed.
class PVCurve {
 public:
  /// `initial_volume_ml` overrides the cavity volume V0 derived from the
  /// design's spherical-cap geometry.
  PVCurve(std::span<const PVSample> samples, SweepDirection direction, GripperDesignd design,
          std::optional<double> initial_volume_ml = std::nullopt);

  Eigen::Index size() const { return times_.size(); }
  SweepDirection direction() const { return direction_; }
  const GripperDesignd& design() const { return design_; }
  double initial_volume_ml() const { return initial_volume_ml_; }

  const Eigen::VectorXd& times() const { return times_; }
  const Eigen::VectorXd& pressures() const { return pressures_; }
  const Eigen::VectorXd& volumes_ml() const { return volumes_ml_; }

  PVSample sample(Eigen::Index i) const { return {times_[i], pressures_[i], volumes_ml_[i]}; }
  std::vector<PVSample> samples() const;

  /// dV/V0, negative during deflation.
  Eigen::VectorXd volume_fraction() const { return -volumes_ml_ / initial_volume_ml_; }
  /// |dV/V0|
  Eigen::VectorXd abs_volume_fraction() const { return volumes_ml_.cwiseAbs() / initial_volume_ml_; }

  /// Same samples and metadata with replaced pressures or volumes.
  PVCurve with_pressures(const Eigen::VectorXd& pressures_pa) const;
  PVCurve with_volumes(const Eigen::VectorXd& volumes_ml) const;

 private:
  Eigen::VectorXd times_;
  Eigen::VectorXd pressures_;
  Eigen::VectorXd volumes_ml_;
  SweepDirection direction_;
  GripperDesignd design_;
  double initial_volume_ml_;
};

/// Cavity volume of the design's dome in mL.
double design_cavity_volume_ml(const GripperDesignd& design);

/// P / (E h_bar^3) per sample.
Eigen::VectorXd normalize_pressure(const PVCurve& curve);
Eigen::VectorXd denormalize_pressure(const Eigen::VectorXd& normalized, const GripperDesignd& design);

/// Hemisphere volume change per sample (mL) from Boyle's law on the closed
/// syringe/tube/cavity system:
///   dV_hem = dV_syringe + (P_sys - P0_sys) / P_sys * V0_sys
/// with P_sys = gauge + ambient.
Eigen::VectorXd compressibility_correct(const PVCurve& curve, double v0_system_ml, double p0_abs_pa,
                                        double ambient_pa = kStandardAtmospherePa);

/// dV/V0 = 3 alpha_T dT
double volume_from_temperature(double delta_temperature, double thermal_expansion);

/// Two curves linearly interpolated onto one |dV/V0| grid.
struct ResampledPair {
  Eigen::VectorXd grid;
  Eigen::VectorXd first;
  Eigen::VectorXd second;
};

/// Resamples the pressures of both curves onto a shared |dV/V0| grid over
/// their overlap. Grid spacing is the smaller of the two native mean spacings;
/// the grid runs in the traversal order of `a`.
ResampledPair resample_to_common_grid(const PVCurve& a, const PVCurve& b);

struct ForceSample {
  double time_s;
  double force_n;
};

class ForceTrace {
 public:
  explicit ForceTrace(std::vector<ForceSample> samples);
  const std::vector<ForceSample>& samples() const { return samples_; }

 private:
  std::vector<ForceSample> samples_;
};

/// max(F) / (m g)
double max_payload_ratio(const ForceTrace& trace, const GripperDesignd& design,
                         double gravity = kStandardGravity);

}  // namespace domegrip

#pragma once

// Classification of a gripper's deflation response into destructive buckling,
// constructive buckling, or film deformation.

#include <Eigen/Core>
#include <optional>
#include <string_view>

#include "domegrip/pv_data.hpp"

namespace domegrip {

enum class Regime {
  DestructiveBuckling = 1,
  ConstructiveBuckling = 2,
  FilmDeformation = 3,
};

std::string_view to_string(Regime regime);

/// Four equatorial markers, columns r1..r4. r1/r3 span the major axis and
/// r2/r4 the minor axis.
template <typename Scalar>
struct MarkerQuad {
  Eigen::Matrix<Scalar, 3, 4> undeformed;
  Eigen::Matrix<Scalar, 3, 4> deformed;
};

using MarkerQuadd = MarkerQuad<double>;

struct RegimeThresholds {
  double mdc = 0.15;
  double mcf = 0.10;
};

struct RegimeReport {
  double m_dc;
  /// Not evaluated when m_dc already places the design in Regime 1.
  std::optional<double> m_cf;
  Regime regime;
  RegimeThresholds thresholds;
};

/// Largest consecutive pressure drop relative to the pressure it dropped from.
///
/// A drop is a decrease of |P| between consecutive samples. The pair with the
/// largest drop |P_i| - |P_i+1| is selected first (pairs with P_i = 0 are
/// skipped; ties keep the earliest pair) and the result is
/// |(P_i - P_i+1) / P_i| for that pair, or 0 when |P| never decreases.
double metric_mdc(const Eigen::VectorXd& pressures);
double metric_mdc(const PVCurve& deflation);

/// Index i of the pair selected by metric_mdc.
Eigen::Index metric_mdc_pair(const Eigen::VectorXd& pressures);

/// | |r1-r3|_def / |r1-r3|_undef - |r2-r4|_def / |r2-r4|_undef |
template <typename Scalar>
Scalar metric_mcf(const MarkerQuad<Scalar>& markers) {
  const Scalar major_undef = (markers.undeformed.col(0) - markers.undeformed.col(2)).norm();
  const Scalar minor_undef = (markers.undeformed.col(1) - markers.undeformed.col(3)).norm();
  detail::require(major_undef > Scalar(0) && minor_undef > Scalar(0),
                  "undeformed marker pairs must be separated");
  const Scalar major_def = (markers.deformed.col(0) - markers.deformed.col(2)).norm();
  const Scalar minor_def = (markers.deformed.col(1) - markers.deformed.col(3)).norm();
  return std::abs(major_def / major_undef - minor_def / minor_undef);
}

/// Regime 1 if M_DC > thresholds.mdc, else Regime 2 if M_CF > thresholds.mcf,
/// else Regime 3.
RegimeReport classify_regime(const PVCurve& deflation, const MarkerQuadd& markers,
                             RegimeThresholds thresholds = {});

}  // namespace domegrip

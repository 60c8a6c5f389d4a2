#pragma once

// Critical pressure of free thin-shell domes from the ring-projection model,
// plus the classical complete-sphere (Zoelly) reference.

#include <Eigen/Core>
#include <cmath>
#include <numbers>

#include "domegrip/core.hpp"
#include "domegrip/errors.hpp"

namespace domegrip {

template <typename Scalar>
struct BucklingPrediction {
  Scalar critical_pressure_pa;
  /// P_c / (E h_bar^3)
  Scalar normalized_pressure;
  /// theta / sqrt(h_bar)
  Scalar normalized_cap_angle;
};

namespace detail {

template <typename Scalar>
void check_elastic_constants(Scalar E, Scalar nu) {
  require(std::isfinite(E) && E > Scalar(0), "Young's modulus must be positive");
  require(std::isfinite(nu) && nu >= Scalar(0) && nu < Scalar(1),
          "Poisson ratio must lie in [0, 1)");
}

template <typename Derived>
void check_unit_interval(const Eigen::ArrayBase<Derived>& ratio, const char* what) {
  require(ratio.allFinite() && (ratio > 0).all() && (ratio < 1).all(), what);
}

}  // namespace detail

/// External pressure at which a circular ring of thickness-to-radius ratio
/// h/r buckles into its lobed elliptical mode: E / (4 (1 - nu^2)) (h/r)^3.
template <typename Scalar>
Scalar ring_critical_pressure(Scalar E, Scalar nu, Scalar h_over_r) {
  detail::check_elastic_constants(E, nu);
  detail::require(std::isfinite(h_over_r) && h_over_r > Scalar(0) && h_over_r < Scalar(1),
                  "h/r must lie in (0, 1)");
  return E / (Scalar(4) * (Scalar(1) - nu * nu)) * (h_over_r * h_over_r * h_over_r);
}

/// Element-wise overload; returns an expression.
template <typename Derived>
auto ring_critical_pressure(typename Derived::Scalar E, typename Derived::Scalar nu,
                            const Eigen::ArrayBase<Derived>& h_over_r) {
  using Scalar = typename Derived::Scalar;
  detail::check_elastic_constants(E, nu);
  detail::check_unit_interval(h_over_r, "h/r must lie in (0, 1)");
  return (E / (Scalar(4) * (Scalar(1) - nu * nu))) * h_over_r.cube();
}

/// Thickness-to-radius ratio of the dome's base ring: (h/R) csc(theta).
template <typename Scalar>
Scalar projected_slenderness(const ShellGeometry<Scalar>& geometry) {
  const Scalar theta = geometry.cap_angle();
  detail::require(theta > Scalar(0) && theta < std::numbers::pi_v<Scalar>,
                  "cap angle must lie in (0, pi): projection is singular at the endpoints");
  const Scalar s = std::sin(theta);
  detail::require(s > Scalar(0), "cap angle too close to pi: projection is singular");
  return geometry.slenderness() / s;
}

template <typename Scalar>
BucklingPrediction<Scalar> dome_critical_pressure(const ShellGeometry<Scalar>& geometry,
                                                  const ElasticMaterial<Scalar>& material) {
  const Scalar E = young_modulus(material);
  const Scalar pressure =
      ring_critical_pressure(E, material.poisson_ratio(), projected_slenderness(geometry));
  const Scalar h_bar = geometry.slenderness();
  return {pressure, pressure / (E * h_bar * h_bar * h_bar),
          geometry.cap_angle() / std::sqrt(h_bar)};
}

/// Classical buckling pressure of a complete sphere: 2 E h_bar^2 / sqrt(3 (1 - nu^2)).
template <typename Scalar>
Scalar zoelly_sphere_pressure(Scalar E, Scalar nu, Scalar h_bar) {
  detail::check_elastic_constants(E, nu);
  detail::require(std::isfinite(h_bar) && h_bar > Scalar(0) && h_bar < Scalar(1),
                  "h_bar must lie in (0, 1)");
  return Scalar(2) * E * h_bar * h_bar / std::sqrt(Scalar(3) * (Scalar(1) - nu * nu));
}

template <typename Derived>
auto zoelly_sphere_pressure(typename Derived::Scalar E, typename Derived::Scalar nu,
                            const Eigen::ArrayBase<Derived>& h_bar) {
  using Scalar = typename Derived::Scalar;
  detail::check_elastic_constants(E, nu);
  detail::check_unit_interval(h_bar, "h_bar must lie in (0, 1)");
  return (Scalar(2) * E / std::sqrt(Scalar(3) * (Scalar(1) - nu * nu))) * h_bar.square();
}

}  // namespace domegrip

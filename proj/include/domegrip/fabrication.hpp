#pragma once

// Thickness of shells made by pouring a curing polymer over a spherical mold,
// including the multi-layer pour-over build-up.

#include <Eigen/Core>
#include <cmath>
#include <numbers>

#include "domegrip/errors.hpp"

namespace domegrip {

/// Defaults are the VPS-32 fit (mu0, alpha, beta, tau_c), a five-minute
/// setting time, the rubber density 1070 kg/m^3 and g = 9.81 m/s^2.
template <typename Scalar>
struct CoatingParams {
  Scalar initial_viscosity_pa_s = Scalar(7.1);
  Scalar density_kg_m3 = Scalar(1070);
  Scalar gravity_m_s2 = Scalar(9.81);
  Scalar alpha = Scalar(5.3);
  Scalar beta = Scalar(2.06e-3);
  Scalar cure_time_s = Scalar(574);
  Scalar wait_time_s = Scalar(300);

  void validate() const {
    using detail::require;
    require(initial_viscosity_pa_s > 0 && density_kg_m3 > 0 && gravity_m_s2 > 0,
            "viscosity, density and gravity must be positive");
    require(alpha > 1, "alpha must exceed 1");
    require(beta > 0, "beta must be positive");
    require(cure_time_s > 0, "cure time must be positive");
    require(wait_time_s >= 0, "wait time must be non-negative");
  }
};

using CoatingParamsd = CoatingParams<double>;

/// Effective drainage time K (s) of the curing film:
///   k = exp(-beta tau_w)
///   K = (k - exp(-beta tau_c)) / beta + tau_c exp(-beta tau_c) / (alpha - 1)
template <typename Scalar>
Scalar cure_kernel(const CoatingParams<Scalar>& params) {
  params.validate();
  const Scalar b = params.beta;
  const Scalar tc = params.cure_time_s;
  const Scalar tw = params.wait_time_s;
  // (exp(-b tw) - exp(-b tc)) / b via expm1
  const Scalar drainage = -std::exp(-b * tw) * std::expm1(-b * (tc - tw)) / b;
  const Scalar K = drainage + tc * std::exp(-b * tc) / (params.alpha - Scalar(1));
  detail::require(std::isfinite(K) && K > Scalar(0),
                  "cure kernel is not positive: inconsistent coating parameters");
  return K;
}

namespace detail {

template <typename Scalar>
Scalar polar_factor(Scalar zenith_angle_rad) {
  require(zenith_angle_rad >= Scalar(0) && zenith_angle_rad <= std::numbers::pi_v<Scalar> / 2,
          "zenith angle must lie in [0, pi/2]");
  return Scalar(1) + zenith_angle_rad * zenith_angle_rad / Scalar(10);
}

template <typename Scalar>
Scalar layer_thickness_with_kernel(Scalar radius, Scalar polar, Scalar K,
                                   const CoatingParams<Scalar>& p) {
  require(std::isfinite(radius) && radius > Scalar(0), "sphere radius must be positive");
  return std::sqrt(Scalar(3) * p.initial_viscosity_pa_s * radius /
                   (Scalar(4) * p.density_kg_m3 * p.gravity_m_s2 * K)) *
         polar;
}

}  // namespace detail

/// Film thickness left by one pour over a sphere of the given radius, at
/// zenith angle phi measured from the pole.
template <typename Scalar>
Scalar layer_thickness(Scalar sphere_radius_m, Scalar zenith_angle_rad,
                       const CoatingParams<Scalar>& params) {
  const Scalar polar = detail::polar_factor(zenith_angle_rad);
  return detail::layer_thickness_with_kernel(sphere_radius_m, polar, cure_kernel(params), params);
}

/// Thickness of each of n successive pours; layer i is cast on the sphere
/// grown by layers 1..i-1.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> layer_profile(Eigen::Index n_layers,
                                                       Scalar initial_radius_m,
                                                       Scalar zenith_angle_rad,
                                                       const CoatingParams<Scalar>& params) {
  detail::require(n_layers >= 0, "layer count must be non-negative");
  detail::require(std::isfinite(initial_radius_m) && initial_radius_m > Scalar(0),
                  "initial radius must be positive");
  const Scalar polar = detail::polar_factor(zenith_angle_rad);
  const Scalar K = cure_kernel(params);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> layers(n_layers);
  Scalar radius = initial_radius_m;
  for (Eigen::Index i = 0; i < n_layers; ++i) {
    layers[i] = detail::layer_thickness_with_kernel(radius, polar, K, params);
    radius += layers[i];
  }
  return layers;
}

/// Total thickness R_N - R_0 after n pours.
template <typename Scalar>
Scalar stack_thickness(Eigen::Index n_layers, Scalar initial_radius_m, Scalar zenith_angle_rad,
                       const CoatingParams<Scalar>& params) {
  return layer_profile(n_layers, initial_radius_m, zenith_angle_rad, params).sum();
}

}  // namespace domegrip

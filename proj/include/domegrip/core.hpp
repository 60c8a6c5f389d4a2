#pragma once

// Geometry, material, fluid and design records shared by every module.
// All quantities are SI (m, Pa, kg, s); I/O layers convert.

#include <cmath>
#include <numbers>
#include <optional>

#include "domegrip/errors.hpp"

namespace domegrip {

template <typename Scalar>
class ShellGeometry {
 public:
  ShellGeometry(Scalar radius_m, Scalar thickness_m, Scalar cap_angle_rad,
                std::optional<Scalar> film_thickness_m = std::nullopt)
      : radius_(radius_m),
        thickness_(thickness_m),
        cap_angle_(cap_angle_rad),
        film_thickness_(film_thickness_m) {
    using detail::require;
    require(std::isfinite(radius_) && radius_ > Scalar(0), "radius must be positive");
    require(std::isfinite(thickness_) && thickness_ > Scalar(0) && thickness_ < radius_,
            "thickness must lie in (0, radius)");
    require(std::isfinite(cap_angle_) && cap_angle_ > Scalar(0) &&
                cap_angle_ <= std::numbers::pi_v<Scalar>,
            "cap angle must lie in (0, pi]");
    if (film_thickness_) {
      require(std::isfinite(*film_thickness_) && *film_thickness_ > Scalar(0) &&
                  *film_thickness_ < radius_,
              "film thickness must lie in (0, radius)");
    }
  }

  Scalar radius() const { return radius_; }
  Scalar thickness() const { return thickness_; }
  Scalar cap_angle() const { return cap_angle_; }
  std::optional<Scalar> film_thickness() const { return film_thickness_; }

  /// h/R
  Scalar slenderness() const { return thickness_ / radius_; }

  /// t/R, absent for free shells.
  std::optional<Scalar> film_slenderness() const {
    if (!film_thickness_) return std::nullopt;
    return *film_thickness_ / radius_;
  }

  /// Volume enclosed by the spherical cap and its base plane (m^3).
  /// Reduces to (2/3) pi R^3 for the hemisphere.
  Scalar cavity_volume() const {
    const Scalar cap_height = radius_ * (Scalar(1) - std::cos(cap_angle_));
    return std::numbers::pi_v<Scalar> * cap_height * cap_height *
           (Scalar(3) * radius_ - cap_height) / Scalar(3);
  }

 private:
  Scalar radius_;
  Scalar thickness_;
  Scalar cap_angle_;
  std::optional<Scalar> film_thickness_;
};

/// Isotropic rubber parameters. Young's modulus is always derived from (G, nu).
template <typename Scalar>
class ElasticMaterial {
 public:
  ElasticMaterial(Scalar shear_modulus_pa, Scalar poisson_ratio, Scalar density_kg_m3,
                  std::optional<Scalar> gent_extension_limit = std::nullopt)
      : shear_modulus_(shear_modulus_pa),
        poisson_ratio_(poisson_ratio),
        density_(density_kg_m3),
        gent_extension_limit_(gent_extension_limit) {
    using detail::require;
    require(std::isfinite(shear_modulus_) && shear_modulus_ > Scalar(0),
            "shear modulus must be positive");
    // nu = 0.5 is admitted as the incompressible limit.
    require(std::isfinite(poisson_ratio_) && poisson_ratio_ >= Scalar(0) &&
                poisson_ratio_ <= Scalar(0.5),
            "Poisson ratio must lie in [0, 0.5]");
    require(std::isfinite(density_) && density_ > Scalar(0), "density must be positive");
    if (gent_extension_limit_) {
      require(std::isfinite(*gent_extension_limit_) && *gent_extension_limit_ > Scalar(0),
              "Gent extension limit must be positive");
    }
  }

  Scalar shear_modulus() const { return shear_modulus_; }
  Scalar poisson_ratio() const { return poisson_ratio_; }
  Scalar density() const { return density_; }
  std::optional<Scalar> gent_extension_limit() const { return gent_extension_limit_; }

 private:
  Scalar shear_modulus_;
  Scalar poisson_ratio_;
  Scalar density_;
  std::optional<Scalar> gent_extension_limit_;
};

template <typename Scalar>
Scalar young_modulus(const ElasticMaterial<Scalar>& material) {
  return Scalar(2) * material.shear_modulus() * (Scalar(1) + material.poisson_ratio());
}

template <typename Scalar>
struct FluidProperties {
  Scalar bulk_modulus_pa;
  Scalar density_kg_m3;
  Scalar thermal_expansion_coeff;
  Scalar ambient_pressure_pa;

  FluidProperties(Scalar bulk_modulus, Scalar density, Scalar expansion, Scalar ambient)
      : bulk_modulus_pa(bulk_modulus),
        density_kg_m3(density),
        thermal_expansion_coeff(expansion),
        ambient_pressure_pa(ambient) {
    detail::require(bulk_modulus > 0 && density > 0 && expansion > 0 && ambient > 0,
                    "fluid properties must be strictly positive");
  }
};

template <typename Scalar>
class GripperDesign {
 public:
  GripperDesign(ShellGeometry<Scalar> geometry, ElasticMaterial<Scalar> shell_material,
                ElasticMaterial<Scalar> film_material, Scalar mass_kg)
      : geometry_(geometry),
        shell_material_(shell_material),
        film_material_(film_material),
        mass_(mass_kg) {
    detail::require(std::isfinite(mass_) && mass_ > Scalar(0), "mass must be positive");
  }

  const ShellGeometry<Scalar>& geometry() const { return geometry_; }
  const ElasticMaterial<Scalar>& shell_material() const { return shell_material_; }
  const ElasticMaterial<Scalar>& film_material() const { return film_material_; }
  Scalar mass() const { return mass_; }

  /// E * (h/R)^3, the pressure scale shared by buckling and sensing.
  Scalar pressure_scale() const {
    const Scalar h_bar = geometry_.slenderness();
    return young_modulus(shell_material_) * h_bar * h_bar * h_bar;
  }

 private:
  ShellGeometry<Scalar> geometry_;
  ElasticMaterial<Scalar> shell_material_;
  ElasticMaterial<Scalar> film_material_;
  Scalar mass_;
};

using ShellGeometryd = ShellGeometry<double>;
using ElasticMateriald = ElasticMaterial<double>;
using FluidPropertiesd = FluidProperties<double>;
using GripperDesignd = GripperDesign<double>;

namespace materials {

/// Shell rubber (Elite Double 32) modelled as near-incompressible neo-Hookean.
template <typename Scalar = double>
ElasticMaterial<Scalar> elite_double_32() {
  return {Scalar(0.375e6), Scalar(0.4998), Scalar(1070)};
}

/// Film rubber (Ecoflex 00-30) modelled as incompressible Gent.
template <typename Scalar = double>
ElasticMaterial<Scalar> ecoflex_00_30() {
  return {Scalar(19.43e3), Scalar(0.5), Scalar(1070), Scalar(37.54)};
}

}  // namespace materials
}  // namespace domegrip

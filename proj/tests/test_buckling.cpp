#include <gtest/gtest.h>

#include <random>

#include "domegrip/buckling.hpp"
#include "domegrip/errors.hpp"
#include "fixtures.hpp"

namespace domegrip {
namespace {

using testing::kHalfPi;
using testing::relative_error;

constexpr double kE = 1124850.0;
constexpr double kNu = 0.4998;

double loglog_slope(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y) {
  const Eigen::ArrayXd lx = x.log(), ly = y.log();
  const double mx = lx.mean(), my = ly.mean();
  return ((lx - mx) * (ly - my)).sum() / (lx - mx).square().sum();
}

TEST(RingCriticalPressure, Oracle) {
  EXPECT_LT(relative_error(ring_critical_pressure(kE, kNu, 0.05), 46.85625749700120), 1e-12);
  EXPECT_NEAR(ring_critical_pressure(4.0, 0.0, 1e-1), 1e-3, 1e-18);
}

TEST(RingCriticalPressure, DoublingSlendernessMultipliesByEight) {
  for (double h : {0.001, 0.013, 0.05, 0.2}) {
    EXPECT_EQ(ring_critical_pressure(kE, kNu, 2 * h), 8 * ring_critical_pressure(kE, kNu, h));
  }
}

TEST(RingCriticalPressure, ArrayOverloadMatchesScalar) {
  const Eigen::ArrayXd h = Eigen::ArrayXd::LinSpaced(7, 0.01, 0.3);
  const Eigen::ArrayXd p = ring_critical_pressure(kE, kNu, h);
  for (Eigen::Index i = 0; i < h.size(); ++i) EXPECT_EQ(p[i], ring_critical_pressure(kE, kNu, h[i]));
  EXPECT_THROW(ring_critical_pressure(kE, kNu, Eigen::ArrayXd::Constant(2, 1.5)), DomainError);
}

TEST(RingCriticalPressure, RejectsInvalidInputs) {
  EXPECT_THROW(ring_critical_pressure(0.0, 0.3, 0.05), DomainError);
  EXPECT_THROW(ring_critical_pressure(kE, 1.0, 0.05), DomainError);
  EXPECT_THROW(ring_critical_pressure(kE, kNu, 0.0), DomainError);
  EXPECT_THROW(ring_critical_pressure(kE, kNu, 1.0), DomainError);
}

TEST(ProjectedSlenderness, Examples) {
  EXPECT_DOUBLE_EQ(projected_slenderness(ShellGeometryd(1.0, 0.05, kHalfPi)), 0.05);
  EXPECT_NEAR(projected_slenderness(ShellGeometryd(1.0, 0.05, std::numbers::pi / 6)), 0.10, 1e-15);
  EXPECT_LT(relative_error(projected_slenderness(ShellGeometryd(1.0, 0.03, std::numbers::pi / 4)),
                           0.04242640687119285),
            1e-14);
}

TEST(ProjectedSlenderness, SingularAtFullSphere) {
  EXPECT_THROW(projected_slenderness(ShellGeometryd(1.0, 0.05, std::numbers::pi)), DomainError);
}

TEST(DomeCriticalPressure, HemisphereEqualsRing) {
  const ElasticMateriald m(0.375e6, kNu, 1070);
  const auto p = dome_critical_pressure(ShellGeometryd(0.02, 0.001, kHalfPi), m);
  EXPECT_EQ(p.critical_pressure_pa, ring_critical_pressure(young_modulus(m), kNu, 0.05));
}

TEST(DomeCriticalPressure, CscCubedFactor) {
  const ElasticMateriald m(0.375e6, kNu, 1070);
  const double ratio = dome_critical_pressure(ShellGeometryd(0.02, 0.001, std::numbers::pi / 6), m).critical_pressure_pa /
                       dome_critical_pressure(ShellGeometryd(0.02, 0.001, kHalfPi), m).critical_pressure_pa;
  EXPECT_NEAR(ratio, 8.0, 1e-12);
}

TEST(DomeCriticalPressure, IncompressibleHemisphereNormalizesToOneThird) {
  const ElasticMateriald m(19.43e3, 0.5, 1070);
  for (double h : {0.005, 0.02, 0.05, 0.1, 0.3}) {
    const auto p = dome_critical_pressure(ShellGeometryd(1.0, h, kHalfPi), m);
    EXPECT_NEAR(p.normalized_pressure, 1.0 / 3.0, 1e-14);
    EXPECT_DOUBLE_EQ(p.normalized_cap_angle, kHalfPi / std::sqrt(h));
  }
}

TEST(DomeCriticalPressure, CubicLogLogSlope) {
  const ElasticMateriald m(0.375e6, kNu, 1070);
  const Eigen::ArrayXd h = Eigen::ArrayXd::LinSpaced(20, 0.005, 0.1);
  Eigen::ArrayXd p(h.size());
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    p[i] = dome_critical_pressure(ShellGeometryd(1.0, h[i], 1.1), m).critical_pressure_pa;
  }
  EXPECT_NEAR(loglog_slope(h, p), 3.0, 1e-9);
}

TEST(DomeCriticalPressure, MinimumAtHemisphere) {
  const ElasticMateriald m(0.375e6, kNu, 1070);
  const auto at = [&](double theta) {
    return dome_critical_pressure(ShellGeometryd(1.0, 0.02, theta), m).critical_pressure_pa;
  };
  const Eigen::VectorXd rising = Eigen::VectorXd::LinSpaced(200, 0.03, kHalfPi);
  for (Eigen::Index i = 1; i < rising.size(); ++i) EXPECT_LT(at(rising[i]), at(rising[i - 1]));
  const Eigen::VectorXd falling = Eigen::VectorXd::LinSpaced(200, kHalfPi, std::numbers::pi - 0.03);
  for (Eigen::Index i = 1; i < falling.size(); ++i) EXPECT_GT(at(falling[i]), at(falling[i - 1]));
  const auto thin = [&](double theta) {
    return dome_critical_pressure(ShellGeometryd(1.0, 1e-8, theta), m).critical_pressure_pa;
  };
  EXPECT_GT(thin(1e-6), 1e12 * thin(kHalfPi));
  EXPECT_GT(thin(std::numbers::pi - 1e-6), 1e12 * thin(kHalfPi));
  EXPECT_THROW(at(1e-3), DomainError);
}

TEST(DomeCriticalPressure, NormalizedPressureIndependentOfModulusAndRadius) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> g(1e3, 1e7), r(1e-3, 1.0), h(0.005, 0.2), th(0.3, 2.8);
  for (int trial = 0; trial < 500; ++trial) {
    const double hb = h(rng), theta = th(rng), R1 = r(rng), R2 = r(rng);
    const auto a = dome_critical_pressure(ShellGeometryd(R1, hb * R1, theta), ElasticMateriald(g(rng), kNu, 1000));
    const auto b = dome_critical_pressure(ShellGeometryd(R2, hb * R2, theta), ElasticMateriald(g(rng), kNu, 1000));
    EXPECT_NEAR(a.normalized_pressure, b.normalized_pressure, 1e-12 * a.normalized_pressure);
  }
}

TEST(ZoellySpherePressure, Oracle) {
  EXPECT_LT(relative_error(zoelly_sphere_pressure(kE, kNu, 0.05), 3749.000266577809), 1e-12);
}

TEST(ZoellySpherePressure, IncompressibleClosedForm) {
  for (double h : {0.01, 0.05, 0.1}) {
    EXPECT_NEAR(zoelly_sphere_pressure(3.0e5, 0.5, h), 4.0 / 3.0 * 3.0e5 * h * h, 1e-12 * 3.0e5 * h * h);
  }
}

TEST(ZoellySpherePressure, QuadraticInSlenderness) {
  EXPECT_EQ(zoelly_sphere_pressure(kE, kNu, 0.1), 4 * zoelly_sphere_pressure(kE, kNu, 0.05));
  const Eigen::ArrayXd h = Eigen::ArrayXd::LinSpaced(20, 0.005, 0.1);
  EXPECT_NEAR(loglog_slope(h, zoelly_sphere_pressure(kE, kNu, h)), 2.0, 1e-9);
}

}  // namespace
}  // namespace domegrip

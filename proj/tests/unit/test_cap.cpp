#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "roughdrop/cap.hpp"
#include "roughdrop/errors.hpp"

using namespace roughdrop;

namespace {

// Ball of radius rho centered at height rho*c, cut at z = 0.
double quad_area_2d(double rho, double c) {
  const double z0 = rho * c;
  return oracle::integrate([&](double z) { return 2.0 * std::sqrt(std::max(0.0, rho * rho - (z - z0) * (z - z0))); },
                           std::max(0.0, z0 - rho), z0 + rho);
}

double quad_volume_3d(double rho, double c) {
  const double z0 = rho * c;
  return oracle::integrate(
      [&](double z) { return std::numbers::pi * std::max(0.0, rho * rho - (z - z0) * (z - z0)); },
      std::max(0.0, z0 - rho), z0 + rho);
}

// Arc length of the part of the circle above z = 0.
double quad_arc_2d(double rho, double c) {
  const double lo = std::asin(std::clamp(-c, -1.0, 1.0));
  return oracle::integrate([&](double) { return 2.0 * rho; }, lo, std::numbers::pi / 2);
}

std::shared_ptr<const Domain> flat_box(int dim, int n, double width, double height) {
  Extents e;
  e.lo = {0.0, 0.0};
  e.hi = {width, width};
  e.z_lo = -2.0 / n;
  e.z_hi = height;
  return Domain::build(SurfaceSpec::flat(dim - 1), e, 1.0 / n, 1.0 / n);
}

}  // namespace

TEST(Cap, FormulasMatchQuadrature) {
  for (double c : {-0.9, -0.5, 0.0, 0.3, 0.5, 0.9}) {
    for (double rho : {0.3, 1.0, 2.5}) {
      EXPECT_NEAR(cap_volume(2, rho, c), quad_area_2d(rho, c), 1e-9 * rho * rho) << c;
      EXPECT_NEAR(cap_volume(3, rho, c), quad_volume_3d(rho, c), 1e-9 * rho * rho * rho) << c;
      EXPECT_NEAR(cap_lv_area(2, rho, c), quad_arc_2d(rho, c), 1e-9 * rho) << c;
      EXPECT_NEAR(cap_base_area(2, rho, c), 2.0 * rho * std::sqrt(1 - c * c), 1e-12);
    }
  }
  // Spherical zone area 2 pi rho * height.
  EXPECT_NEAR(cap_lv_area(3, 1.0, 0.5), 2 * std::numbers::pi * 1.5, 1e-12);
}

TEST(Cap, HalfBallExamples) {
  auto c2 = homogenized_cap(0.0, std::numbers::pi / 2, 2);
  EXPECT_NEAR(c2.rho0, 1.0, 1e-12);
  EXPECT_NEAR(c2.z0, 0.0, 1e-15);
  auto c3 = homogenized_cap(0.0, 2 * std::numbers::pi / 3, 3);
  EXPECT_NEAR(c3.rho0, 1.0, 1e-12);
  EXPECT_NEAR(c3.z0, 0.0, 1e-15);
}

TEST(Cap, VolumeInversionAgainstBisection) {
  for (int d : {2, 3}) {
    for (double c : {-0.7, 0.5, 0.95}) {
      const double vol = 1.0;
      auto cap = homogenized_cap(c, vol, d);
      EXPECT_NEAR(cap.z0, cap.rho0 * c, 1e-15);
      double lo = 1e-3, hi = 10.0;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double v = d == 2 ? quad_area_2d(mid, c) : quad_volume_3d(mid, c);
        (v < vol ? lo : hi) = mid;
      }
      EXPECT_NEAR(cap.rho0, 0.5 * (lo + hi), 1e-8);
      EXPECT_NEAR(cap_volume(d, cap.rho0, c) / vol, 1.0, 1e-8);
    }
  }
}

TEST(Cap, EnergyExcess) {
  auto cap = homogenized_cap(0.0, std::numbers::pi / 2, 2);
  EXPECT_NEAR(cap_energy_excess(cap, 2.0), 2.0 * std::numbers::pi, 1e-12);
  auto c3 = homogenized_cap(0.5, 1.0, 3);
  EXPECT_NEAR(cap_energy_excess(c3, 1.0), cap_lv_area(3, c3.rho0, 0.5) + 0.5 * cap_base_area(3, c3.rho0, 0.5), 1e-12);
}

TEST(Cap, RejectsBadInput) {
  EXPECT_THROW(homogenized_cap(1.0, 1.0, 2), InvalidArgument);
  EXPECT_THROW(homogenized_cap(0.2, 0.0, 2), InvalidArgument);
  EXPECT_THROW(homogenized_cap(0.2, 1.0, 4), InvalidArgument);
}

TEST(Cap, RasterizedHalfDiskVolume) {
  for (int n : {32, 64, 128}) {
    auto dom = flat_box(2, n, 2.0, 1.25);
    auto cap = homogenized_cap(0.0, std::numbers::pi / 2, 2, {1.0, 0.0});
    auto r = rasterize_cap(cap, dom);
    EXPECT_FALSE(r.degenerate);
    const double h = 1.0 / n;
    // O(h) times the interface length.
    EXPECT_LE(std::abs(r.field.volume() - std::numbers::pi / 2), 2.0 * h * (std::numbers::pi + 2.0)) << n;
  }
}

TEST(Cap, RasterizedHalfBallVolume) {
  auto dom = flat_box(3, 24, 2.5, 1.25);
  auto cap = homogenized_cap(0.0, 2 * std::numbers::pi / 3, 3, {1.25, 1.25});
  auto r = rasterize_cap(cap, dom);
  const double h = 1.0 / 24;
  EXPECT_LE(std::abs(r.field.volume() - 2 * std::numbers::pi / 3), 2.0 * h * 3.0 * std::numbers::pi);
}

TEST(Cap, TinyCapIsDegenerate) {
  auto dom = flat_box(2, 16, 1.0, 1.0);
  auto cap = homogenized_cap(0.0, 1e-4, 2, {0.5, 0.0});
  auto r = rasterize_cap(cap, dom);
  EXPECT_TRUE(r.degenerate);
  EXPECT_LE(r.field.liquid_count(), 1u);
}

TEST(Cap, TranslationByLatticeVectorKeepsCount) {
  auto dom = flat_box(2, 64, 2.0, 1.0);
  auto a = rasterize_cap(homogenized_cap(0.3, 0.4, 2, {0.75, 0.0}), dom);
  auto b = rasterize_cap(homogenized_cap(0.3, 0.4, 2, {0.75 + 5.0 / 64, 0.0}), dom);
  EXPECT_EQ(a.field.liquid_count(), b.field.liquid_count());
  // And cell for cell after the shift.
  for (int k = 0; k < dom->nz(); ++k)
    for (int i = 0; i + 5 < dom->nx(); ++i) EXPECT_EQ(a.field.at(i, 0, k), b.field.at(i + 5, 0, k));
}

TEST(Cap, CapExceedingBoxThrows) {
  auto dom = flat_box(2, 16, 1.0, 0.5);
  EXPECT_THROW(rasterize_cap(homogenized_cap(0.0, std::numbers::pi / 2, 2, {0.5, 0.0}), dom), InvalidArgument);
  auto tall = flat_box(2, 16, 1.0, 2.0);
  EXPECT_THROW(rasterize_cap(homogenized_cap(0.0, 0.3, 2, {0.05, 0.0}), tall), InvalidArgument);
}

#pragma once

#include <array>
#include <memory>

#include "roughdrop/lattice.hpp"

namespace roughdrop {

// B+_{rho0}((center_x, z0)): the part above z = 0 of the ball of radius rho0
// centered at height z0 = rho0 * cos_theta_bar. ambient_dim is 2 or 3.
struct SphericalCap {
  int ambient_dim = 2;
  double rho0 = 1.0;
  double z0 = 0.0;
  std::array<double, 2> center_x{0.0, 0.0};
  double cos_theta_bar = 0.0;
};

// Volume, liquid-vapor area and base area of a cap of radius rho with the
// given cos theta (area and length in 2D).
double cap_volume(int ambient_dim, double rho, double cos_theta);
double cap_lv_area(int ambient_dim, double rho, double cos_theta);
double cap_base_area(int ambient_dim, double rho, double cos_theta);

// Homogenized energy of the cap relative to the dry surface:
// sigma_LV * (LV area + cos_theta_bar * base area).
double cap_energy_excess(const SphericalCap& cap, double sigma_LV);

// Cap of volume vol with the given effective angle; |cos_theta_bar| < 1.
SphericalCap homogenized_cap(double cos_theta_bar, double vol, int ambient_dim,
                             std::array<double, 2> center_x = {0.0, 0.0});

struct RasterizedCap {
  LabelField field;
  bool degenerate = false;  // fewer than two cells
};

// Cells with center above z = 0 inside the ball; solid cells stay solid.
// Throws InvalidArgument when the cap leaves the box.
RasterizedCap rasterize_cap(const SphericalCap& cap, std::shared_ptr<const Domain> domain);

}  // namespace roughdrop

#include "roughdrop/cap.hpp"

#include <cmath>
#include <numbers>

#include "roughdrop/errors.hpp"

namespace roughdrop {

namespace {

void check_dim(int d) {
  if (d != 2 && d != 3) throw InvalidArgument("cap dimension must be 2 or 3");
}

}  // namespace

double cap_volume(int d, double rho, double c) {
  check_dim(d);
  const double pi = std::numbers::pi;
  if (d == 2) return rho * rho * (pi - std::acos(c) + c * std::sqrt(1.0 - c * c));
  return pi * rho * rho * rho * (1.0 + c) * (1.0 + c) * (2.0 - c) / 3.0;
}

double cap_lv_area(int d, double rho, double c) {
  check_dim(d);
  const double pi = std::numbers::pi;
  if (d == 2) return 2.0 * rho * (pi - std::acos(c));
  return 2.0 * pi * rho * rho * (1.0 + c);
}

double cap_base_area(int d, double rho, double c) {
  check_dim(d);
  const double a = rho * std::sqrt(1.0 - c * c);
  if (d == 2) return 2.0 * a;
  return std::numbers::pi * a * a;
}

double cap_energy_excess(const SphericalCap& cap, double sigma_LV) {
  const int d = cap.ambient_dim;
  return sigma_LV * (cap_lv_area(d, cap.rho0, cap.cos_theta_bar) +
                     cap.cos_theta_bar * cap_base_area(d, cap.rho0, cap.cos_theta_bar));
}

SphericalCap homogenized_cap(double cos_theta_bar, double vol, int d, std::array<double, 2> center_x) {
  check_dim(d);
  if (!(std::abs(cos_theta_bar) < 1.0)) throw InvalidArgument("cap needs |cos theta_bar| < 1");
  if (!(vol > 0.0)) throw InvalidArgument("cap volume must be positive");
  SphericalCap cap;
  cap.ambient_dim = d;
  cap.cos_theta_bar = cos_theta_bar;
  cap.center_x = center_x;
  // Volume is homogeneous of degree d in rho.
  cap.rho0 = std::pow(vol / cap_volume(d, 1.0, cos_theta_bar), 1.0 / d);
  cap.z0 = cap.rho0 * cos_theta_bar;
  return cap;
}

RasterizedCap rasterize_cap(const SphericalCap& cap, std::shared_ptr<const Domain> domain) {
  const Domain& d = *domain;
  if (d.ambient_dim() != cap.ambient_dim) throw InvalidArgument("cap and domain dimensions differ");
  const auto& e = d.extents();
  const double top = cap.z0 + cap.rho0;
  const double half = cap.rho0 * (cap.z0 >= 0.0 ? 1.0 : std::sqrt(1.0 - cap.cos_theta_bar * cap.cos_theta_bar));
  bool inside = top <= e.z_hi && cap.center_x[0] - half >= e.lo[0] && cap.center_x[0] + half <= e.hi[0];
  if (d.ambient_dim() == 3)
    inside = inside && cap.center_x[1] - half >= e.lo[1] && cap.center_x[1] + half <= e.hi[1];
  if (!inside) throw InvalidArgument("cap exceeds the box");
  RasterizedCap out{LabelField(domain), false};
  const double r2 = cap.rho0 * cap.rho0;
  for (int k = 0; k < d.nz(); ++k) {
    const double z = d.z_center(k);
    if (!(z > 0.0)) continue;
    for (int j = 0; j < d.ny(); ++j) {
      const double dy = d.ambient_dim() == 3 ? d.y_center(j) - cap.center_x[1] : 0.0;
      for (int i = 0; i < d.nx(); ++i) {
        const double dx = d.x_center(i) - cap.center_x[0];
        const double dz = z - cap.z0;
        const std::size_t idx = d.index(i, j, k);
        if (dx * dx + dy * dy + dz * dz <= r2 && !d.solid(idx)) out.field.set(idx, Label::Liquid);
      }
    }
  }
  out.degenerate = out.field.liquid_count() < 2;
  return out;
}

}  // namespace roughdrop

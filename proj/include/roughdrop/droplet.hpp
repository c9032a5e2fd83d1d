#pragma once

#include <array>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "roughdrop/cap.hpp"
#include "roughdrop/lattice.hpp"
#include "roughdrop/maxflow.hpp"

namespace roughdrop {

struct DropletOptions {
  int tol_cells = 0;
  Algorithm algorithm = Algorithm::Auto;
  // Starting sets. Empty selects the best cap_seeds around the Young angle.
  std::vector<LabelField> seeds;
  int scan_keep = 3;
  // Proximal step: moving a cell at distance d from the interface costs
  // d * h^D / tau. tau is given in units of h * Vol^(1/D).
  double tau = 8.0;
  double tau_min = 0.25;
  int max_steps = 400;
  // Cells farther than band cells from the interface keep their label during
  // a step; 0 frees the whole box.
  int band = 8;
};

struct DropletResult {
  std::shared_ptr<LabelField> labeling;
  double volume_real = 0.0;
  long target_cells = 0;
  EnergyBreakdown energy;
  double energy_excess = 0.0;  // total_E minus the dry-box energy
  std::pair<double, double> lambda_bracket{0.0, 0.0};  // per unit volume
  int steps = 0;
  int seed_used = 0;
  std::vector<double> seed_energies;
  bool touches_lid = false;
  bool touches_walls = false;
};

// Volume constrained minimization of the lattice energy: a proximal
// (minimizing-movement) descent in which every step is an exact
// volume-constrained min-cut with a distance penalty; the best run over all
// seeds is returned. Never returns a set with higher energy than a seed
// adjusted to the target volume.
DropletResult minimize_droplet(std::shared_ptr<const Domain> domain, const Coefficients& coeffs, double vol,
                               const DropletOptions& options = {});

// Rasterized caps centered in the box with cos theta in
// [cos_center - half_width, cos_center + half_width] (step apart), each brought
// to the target volume; the `keep` lowest in energy, best first.
std::vector<LabelField> cap_seeds(std::shared_ptr<const Domain> domain, const Coefficients& coeffs, double vol,
                                  double cos_center, int keep, double half_width = 0.2, double step = 0.01);

// seed moved to exactly target liquid cells by the greedy one-cell fix-up.
LabelField volume_matched(std::shared_ptr<const Domain> domain, const Coefficients& coeffs, const LabelField& seed,
                          long target_cells);

// Energy of the all-vapor box.
double dry_energy(std::shared_ptr<const Domain> domain, const Coefficients& coeffs);

// Width along x of the wetted footprint: liquid cells with a solid cell
// directly below.
double contact_width(const LabelField& field);

struct CircleFit {
  std::array<double, 3> center{0.0, 0.0, 0.0};  // (x, y, z); y unused in 2D
  double radius = 0.0;
  double rms = 0.0;
  std::size_t points = 0;
};

// Algebraic least-squares circle (sphere) through the liquid-vapor interface
// points above z_min. The interface is the 1/2 level of the liquid fraction
// box-filtered over fluid cells with radius smooth (0: raw cell faces).
CircleFit fit_interface_circle(const LabelField& field, double z_min, int smooth = 2);

std::string droplet_csv_header();
std::string droplet_csv_row(double epsilon, double vol, const DropletResult& r, double width);

}  // namespace roughdrop

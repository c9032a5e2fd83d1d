#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "roughdrop/cap.hpp"
#include "roughdrop/cellproblem.hpp"
#include "roughdrop/droplet.hpp"
#include "roughdrop/fit.hpp"
#include "roughdrop/lattice.hpp"

namespace roughdrop {

struct SweepOptions {
  double width = 2.0;   // lateral side of U (a multiple of every epsilon)
  double height = 1.0;  // box top; the bottom is placed below the grooves
  int cells_per_epsilon = 8;  // h = epsilon / cells_per_epsilon
  std::vector<double> r_list{2.0, 4.0, 8.0};  // cell windows for cos theta_bar
  std::optional<double> cos_theta_bar;        // skips the cell problems
  DropletOptions droplet;
  double alpha = 0.5;        // stability exponent entering h0
  double h0_constant = 1.0;  // C in h0
  double r0_R0 = 4.0;
  double r0_C1 = 1.0;
  int workers = 1;
  std::shared_ptr<const PerimeterStencil> stencil;  // null selects the standard one
};

struct EpsilonPoint {
  double epsilon = 0.0;
  double h = 0.0;
  double E_droplet = 0.0;  // E_eps(L_eps) minus the dry box
  double E_cap = 0.0;      // homogenized cap energy minus the dry surface
  double E_L0eps = 0.0;    // E_eps(L_{0,eps}) minus the dry box
  bool L0eps_holds = false;  // E_eps(L_eps) <= E_eps(L_{0,eps})
  double energy_gap = 0.0;
  double l1_gap = 0.0;         // |L_eps delta (L_0 + x)| / Vol on {z > 0}
  double hausdorff_gap = 0.0;  // above h0, divided by Vol^(1/(d+1))
  double h0 = 0.0;
  double r0 = 0.0;
  std::array<double, 2> best_shift{0.0, 0.0};
  DropletResult droplet;
  std::shared_ptr<LabelField> cap_field;  // L_0 + best shift
};

struct RateReport {
  double cos_theta_bar = 0.0;
  double vol = 0.0;
  std::vector<double> epsilons;
  std::vector<double> energy_gap;
  std::vector<double> l1_gap;
  std::vector<double> hausdorff_gap;
  std::vector<double> h0_used;
  LineFit energy_slope;  // log gap against log epsilon
  LineFit l1_slope;
  LineFit hausdorff_slope;
  bool degenerate = false;  // flat surface or a zero gap: slopes meaningless
  bool L0eps_holds = true;
  std::vector<EpsilonPoint> points;
};

// r0(eps) = R0 eps exp(C1 |log(Vol^(-1/(d+1)) eps)|^(1/2)).
double r0_scale(double epsilon, double vol, int ambient_dim, double R0 = 4.0, double C1 = 1.0);
// err(eps) = (|U| / Vol + |dU| / Vol^(d/(d+1))) r0(eps).
double homogenization_error(double epsilon, double vol, int ambient_dim, double U_measure, double dU_measure,
                            double R0 = 4.0, double C1 = 1.0);
// h0 = C Vol^((1-beta)/(d+1)) eps^beta err^((1-beta) alpha/(d+1)),
// beta = 2d / ((d+1)(d+2)).
double boundary_layer_h0(double epsilon, double vol, int ambient_dim, double err, double alpha = 0.5,
                         double C = 1.0);

// Box for one sweep point: U = [0, width]^d, bottom aligned with the cell
// problem window so that periodic cell minimizers copy layer by layer.
std::shared_ptr<const Domain> sweep_domain(const SurfaceSpec& surface, double epsilon, const SweepOptions& options);

// L_{0,eps}: the cap above z = 0, the periodic SL minimizer in periods lying
// entirely under the base, the periodic SV minimizer in the remaining
// periods, brought to the target volume.
LabelField build_L0_epsilon(std::shared_ptr<const Domain> domain, const Coefficients& coeffs, const SphericalCap& cap,
                            const LabelField& cell_SL, const LabelField& cell_SV, long target_cells);

struct TranslationFit {
  double l1 = 0.0;  // cells in the symmetric difference, times the cell volume
  std::array<double, 2> shift{0.0, 0.0};  // cap center relative to the centroid
  std::shared_ptr<LabelField> cap_field;
};

// min over lattice shifts within one period of |field delta (cap + x)| on
// {z > 0}; coarse scan, then a unit-step refinement.
TranslationFit best_translation(const LabelField& field, const SphericalCap& cap);

RateReport run_sweep(const SurfaceSpec& surface, const Coefficients& coeffs, double vol,
                     const std::vector<double>& epsilons, const SweepOptions& options = {});

struct PerimeterProfile {
  std::vector<double> t;
  std::vector<double> per_slab;  // Per(L, {t/2 < z < 3t/2})
  double r0_epsilon = 0.0;
  double C_fit = 0.0;  // least squares through the origin over t >= r0
  double envelope_factor = 2.0;
  std::vector<double> violations_above_r0;  // t with per_slab > factor C t
  std::vector<double> violations_below_r0;  // reported only
};

PerimeterProfile perimeter_profile(const DropletResult& droplet, const std::vector<double>& t_list,
                                   double R0 = 4.0, double C1 = 1.0, double envelope_factor = 2.0);

struct PerimeterEnvelope {
  double C = 0.0;  // single coefficient fitted across all profiles
  int points_above_r0 = 0;
  int violations_above_r0 = 0;
  int violations_below_r0 = 0;
};

PerimeterEnvelope perimeter_envelope(const std::vector<PerimeterProfile>& profiles, double envelope_factor = 2.0);

struct LayerProbe {
  std::vector<double> h;
  std::vector<double> distance;  // Hausdorff above h, macroscopic units
  double plateau = 0.0;
  double layer = 0.0;  // smallest h from which the distance stays within one cell of the plateau
};

LayerProbe boundary_layer_probe(const LabelField& droplet, const LabelField& cap_field,
                                const std::vector<double>& h_candidates);

std::string rate_csv_header();
std::string rate_csv_row(const EpsilonPoint& p);
std::string perimeter_csv_header();
std::string perimeter_csv_row(double epsilon, const PerimeterProfile& p, std::size_t i);

}  // namespace roughdrop

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "roughdrop/lattice.hpp"
#include "roughdrop/maxflow.hpp"

namespace roughdrop {

enum class CellKind { SL, SV };
enum class Regime { Wenzel, CassieBaxter, Intermediate };

const char* to_string(CellKind k);
const char* to_string(Regime r);

// Cell problems are posed with epsilon = 1: one period is the unit square,
// window sizes r count periods and h = 1 / cells_per_period.
struct CellOptions {
  int cells_per_period = 8;
  double t = 0.0;  // hard phase imposed on cells with center above t
  Boundary lateral = Boundary::Free;
  Algorithm algorithm = Algorithm::Auto;
  double scale = 0.0;  // fixed-point scale; 0 = automatic
  std::shared_ptr<const PerimeterStencil> stencil;
  int workers = 1;
  double regime_tol = 0.02;
};

struct CellPartial {
  CellKind kind = CellKind::SL;
  double window_size_r = 0.0;
  double total = 0.0;           // minimal energy of the window
  double per_area = 0.0;        // total / r^d
  Capacity value = 0;           // same minimum in fixed point
  double scale = 1.0;
  std::shared_ptr<LabelField> minimizer;  // SinkSide (maximal) minimizer
};

struct CellResult {
  double window_size_r = 0.0;
  double Sigma_SL = 0.0;  // per unit window area
  double Sigma_SV = 0.0;
  double cos_Theta_Y = 0.0;      // clamped to [-1, 1]
  double cos_Theta_Y_raw = 0.0;  // before clamping
  std::shared_ptr<LabelField> minimizer_SL;
  std::shared_ptr<LabelField> minimizer_SV;
};

CellPartial sigma_SL(const SurfaceSpec& surface, const Coefficients& coeffs, double window_r,
                     const CellOptions& options = {});
CellPartial sigma_SV(const SurfaceSpec& surface, const Coefficients& coeffs, double window_r,
                     const CellOptions& options = {});
CellResult cell_result(const SurfaceSpec& surface, const Coefficients& coeffs, double window_r,
                       const CellOptions& options = {});

// The window box used for a cell problem of size r.
std::shared_ptr<const Domain> cell_domain(const SurfaceSpec& surface, double window_r, const CellOptions& options);

struct ClosedForms {
  double rho = 1.0;
  double f = 1.0;
  double cos_theta_W = 0.0;
  // Hydrophobic branch cos f + (1 - f); mirrored as cos f - (1 - f) for cos < 0.
  double cos_theta_CB = 0.0;
};

ClosedForms closed_forms(const SurfaceSpec& surface, double cos_theta_Y);

struct EffectiveAngles {
  double cos_theta_Y = 0.0;
  double cos_theta_bar = 0.0;
  double cos_theta_W = 0.0;
  double cos_theta_CB = 0.0;
  Regime regime = Regime::Intermediate;
  double extrapolation_residual = 0.0;  // max |cos Theta(r) - (a + b/r)|
  double finite_size_b = 0.0;           // fitted b
  double sigma_bar_SL = 0.0;            // extrapolated, per unit area
  double sigma_bar_SV = 0.0;
  double rho = 1.0;
  double f = 1.0;
  // Flat-top pillar covering threshold 1 / (1 + 2d). Recorded only: on
  // vertical-walled pillars the Cassie-Baxter state is already cheaper than
  // Wenzel above wenzel_cb_crossover, which can be smaller.
  double wenzel_threshold = 0.0;
  // |cos theta_Y| at which the Wenzel and Cassie-Baxter test energies cross,
  // (1 - f) / (rho - f); an upper bound for any exact-Wenzel threshold.
  double wenzel_cb_crossover = 0.0;
  std::vector<CellResult> windows;
};

// Needs at least three increasing integer window sizes.
EffectiveAngles effective_angles(const SurfaceSpec& surface, const Coefficients& coeffs,
                                 const std::vector<double>& r_list, const CellOptions& options = {});

struct SweepPoint {
  double cos_theta_Y = 0.0;
  double cos_theta_bar = 0.0;
  double cos_theta_W = 0.0;
  double cos_theta_CB = 0.0;
  Regime regime = Regime::Intermediate;
  double second_difference = 0.0;  // 0 at the ends
  double residual = 0.0;
};

struct SweepReport {
  std::vector<SweepPoint> points;
  double max_second_difference = 0.0;  // hydrophobic half
  double min_secant_slope = 0.0;
  double max_secant_slope = 0.0;
  double max_bound_excess = 0.0;   // cos_bar beyond the Wenzel/CB bound
  double max_symmetry_error = 0.0;  // |cos_bar(-x) + cos_bar(x)|
  double min_gap = 1.0;            // min 1 - |cos_bar|
  double rho = 1.0;
  double f = 1.0;
  bool concave = true;
  bool slopes_bounded = true;
  bool bounded = true;
  bool symmetric = true;
  bool nondegenerate = true;
};

struct SweepTolerances {
  double concavity = 0.01;
  double slope = 0.05;
  double bound = 0.02;
  double symmetry = 0.02;
  double gap = 0.01;
};

// cos_list must be increasing inside (-1, 1).
SweepReport concavity_sweep(const SurfaceSpec& surface, const std::vector<double>& cos_list,
                            const std::vector<double>& r_list, const CellOptions& options = {},
                            const SweepTolerances& tol = {});

struct PeriodicMinimizer {
  std::shared_ptr<LabelField> field;
  double energy_per_period = 0.0;
  bool checked = false;
  bool matches = true;
};

// One period with periodic lateral boundaries, maximal minimizer. When
// expected_sigma is given, the per-period energy is compared to it.
PeriodicMinimizer periodic_minimizer(const SurfaceSpec& surface, const Coefficients& coeffs, CellKind which,
                                     const CellOptions& options = {},
                                     std::optional<double> expected_sigma = std::nullopt, double tol = 0.02);

std::string cell_csv_header();
std::string cell_csv_row(const std::string& surface_id, double cos_theta_Y, const CellResult& r);

}  // namespace roughdrop

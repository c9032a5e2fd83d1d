#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "roughdrop/acceptance.hpp"
#include "roughdrop/cellproblem.hpp"
#include "roughdrop/droplet.hpp"
#include "roughdrop/errors.hpp"
#include "roughdrop/surface.hpp"

namespace roughdrop {

enum class Task { Cell, SweepAngle, Droplet, Homogenize, Profile };

const char* to_string(Task t);
// Throws ConfigError naming the field.
Task parse_task(const std::string& name, const std::string& field = "task.name");

// Validation failure; what() starts with "section.key: ".
class ConfigError : public InvalidArgument {
 public:
  ConfigError(const std::string& field, const std::string& message)
      : InvalidArgument(field + ": " + message), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// One experiment, as read from an INI file:
//
//   [surface]      kind = flat | pillars | sampled, dim, fraction, depth,
//                  samples, heights
//   [coefficients] sigma_LV, sigma_SL, sigma_SV (all required)
//   [task]         name = cell | sweep-angle | droplet | homogenize | profile,
//                  workers
//   [geometry]     vol, width, height, epsilon, epsilons, cells_per_epsilon
//   [cell]         cells_per_period, window, r_list, t, lateral, cos_theta_bar
//   [sweep]        cos_list
//   [droplet]      band, tau, tau_min, max_steps, seeds
//   [profile]      t_list, layer_h, R0, C1, envelope_factor, alpha, h0_constant
//   [tolerances]   concavity, slope, bound, symmetry, gap, regime, volume_cells
//   [output]       dir
//   [debug]        corrupt_weights
//   [verify]       criteria, enum_free_cells, enum_grids, rough_instances,
//                  enforce_time
struct RunConfig {
  std::string source;       // file path or "<string>"
  std::string text;         // raw file contents
  std::map<std::string, std::string> entries;  // "section.key" -> value as written

  SurfaceSpec surface = SurfaceSpec::flat(1);
  std::string surface_id;
  Coefficients coeffs;
  std::optional<Task> task;
  int workers = 1;

  double vol = 0.1;
  double width = 1.0;
  double height = 0.5;
  double epsilon = 0.125;
  std::vector<double> epsilons{0.125, 0.0625, 0.03125};
  int cells_per_epsilon = 8;

  CellOptions cell;
  double window = 4.0;
  std::vector<double> r_list;  // empty: single window
  std::optional<double> cos_theta_bar;

  std::vector<double> cos_list;
  SweepTolerances sweep_tol;

  DropletOptions droplet;
  int droplet_seeds = 3;

  std::vector<double> t_list;
  std::vector<double> layer_h;
  double R0 = 4.0;
  double C1 = 1.0;
  double envelope_factor = 2.0;
  double alpha = 0.5;
  double h0_constant = 1.0;

  std::string out_dir = "out";
  bool corrupt_weights = false;
  AcceptanceOptions verify;
};

RunConfig parse_config(const std::string& text, const std::string& source = "<string>");
RunConfig load_config(const std::string& path);

// Checks the preconditions of the selected task; throws ConfigError.
void validate_for_task(const RunConfig& config, Task task);

}  // namespace roughdrop

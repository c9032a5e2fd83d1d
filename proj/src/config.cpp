#include "roughdrop/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace roughdrop {

namespace pt = boost::property_tree;

const char* to_string(Task t) {
  switch (t) {
    case Task::Cell: return "cell";
    case Task::SweepAngle: return "sweep-angle";
    case Task::Droplet: return "droplet";
    case Task::Homogenize: return "homogenize";
    case Task::Profile: return "profile";
  }
  return "?";
}

Task parse_task(const std::string& name, const std::string& field) {
  for (Task t : {Task::Cell, Task::SweepAngle, Task::Droplet, Task::Homogenize, Task::Profile})
    if (name == to_string(t)) return t;
  throw ConfigError(field, "unknown task '" + name + "' (expected cell, sweep-angle, droplet, homogenize or profile)");
}

namespace {

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"surface", {"kind", "dim", "fraction", "depth", "samples", "heights"}},
      {"coefficients", {"sigma_LV", "sigma_SL", "sigma_SV"}},
      {"task", {"name", "workers"}},
      {"geometry", {"vol", "width", "height", "epsilon", "epsilons", "cells_per_epsilon"}},
      {"cell", {"cells_per_period", "window", "r_list", "t", "lateral", "cos_theta_bar"}},
      {"sweep", {"cos_list"}},
      {"droplet", {"band", "tau", "tau_min", "max_steps", "seeds"}},
      {"profile", {"t_list", "layer_h", "R0", "C1", "envelope_factor", "alpha", "h0_constant"}},
      {"tolerances", {"concavity", "slope", "bound", "symmetry", "gap", "regime", "volume_cells"}},
      {"output", {"dir"}},
      {"debug", {"corrupt_weights"}},
      {"verify", {"criteria", "enum_free_cells", "enum_grids", "rough_instances", "enforce_time"}},
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// A decimal number or a ratio a/b.
double to_number(const std::string& field, const std::string& raw) {
  const std::string s = trim(raw);
  auto plain = [&](const std::string& t) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      throw ConfigError(field, "not a number: '" + raw + "'");
    }
    if (used != t.size() || !std::isfinite(v)) throw ConfigError(field, "not a number: '" + raw + "'");
    return v;
  };
  const auto slash = s.find('/');
  if (slash == std::string::npos) return plain(s);
  const double den = plain(trim(s.substr(slash + 1)));
  if (den == 0.0) throw ConfigError(field, "zero denominator in '" + raw + "'");
  return plain(trim(s.substr(0, slash))) / den;
}

std::vector<double> to_list(const std::string& field, const std::string& raw) {
  std::string s = raw;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  std::vector<double> out;
  for (std::string tok; in >> tok;) out.push_back(to_number(field, tok));
  if (out.empty()) throw ConfigError(field, "empty list");
  return out;
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  std::optional<std::string> raw(const std::string& field) const {
    if (auto v = tree_.get_optional<std::string>(pt::ptree::path_type(field, '.'))) return trim(*v);
    return std::nullopt;
  }
  bool has(const std::string& field) const { return raw(field).has_value(); }
  std::string require(const std::string& field) const {
    auto v = raw(field);
    if (!v || v->empty()) throw ConfigError(field, "missing");
    return *v;
  }

  void number(const std::string& field, double& out) const {
    if (auto v = raw(field)) out = to_number(field, *v);
  }
  void integer(const std::string& field, int& out) const {
    if (auto v = raw(field)) {
      const double d = to_number(field, *v);
      if (d != std::floor(d) || std::abs(d) > 1e9) throw ConfigError(field, "not an integer: '" + *v + "'");
      out = static_cast<int>(d);
    }
  }
  void list(const std::string& field, std::vector<double>& out) const {
    if (auto v = raw(field)) out = to_list(field, *v);
  }
  void boolean(const std::string& field, bool& out) const {
    if (auto v = raw(field)) {
      std::string s = *v;
      std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
      if (s == "true" || s == "1" || s == "yes" || s == "on")
        out = true;
      else if (s == "false" || s == "0" || s == "no" || s == "off")
        out = false;
      else
        throw ConfigError(field, "not a boolean: '" + *v + "'");
    }
  }

 private:
  const pt::ptree& tree_;
};

void positive(const std::string& field, double v) {
  if (!(v > 0.0)) throw ConfigError(field, "must be positive (got " + std::to_string(v) + ")");
}

void at_least(const std::string& field, int v, int lo) {
  if (v < lo) throw ConfigError(field, "must be at least " + std::to_string(lo) + " (got " + std::to_string(v) + ")");
}

void open_interval(const std::string& field, double v) {
  if (!(v > -1.0 && v < 1.0)) throw ConfigError(field, "must lie strictly between -1 and 1");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

void read_surface(const Reader& r, RunConfig& c) {
  const std::string kind = r.require("surface.kind");
  int dim = 1;
  r.integer("surface.dim", dim);
  if (dim != 1 && dim != 2) throw ConfigError("surface.dim", "must be 1 or 2");
  try {
    if (kind == "flat") {
      c.surface = SurfaceSpec::flat(dim);
      c.surface_id = "flat-d" + std::to_string(dim);
    } else if (kind == "pillars") {
      const double f = to_number("surface.fraction", r.require("surface.fraction"));
      const double depth = to_number("surface.depth", r.require("surface.depth"));
      int samples = 8;
      r.integer("surface.samples", samples);
      if (!(f > 0.0 && f <= 1.0)) throw ConfigError("surface.fraction", "must lie in (0, 1]");
      positive("surface.depth", depth);
      at_least("surface.samples", samples, 1);
      c.surface = make_pillar_surface(dim, f, depth, samples);
      c.surface_id = "pillars-d" + std::to_string(dim) + "-f" + fmt(f) + "-M" + fmt(depth);
    } else if (kind == "sampled") {
      int samples = 0;
      r.integer("surface.samples", samples);
      if (!r.has("surface.samples")) throw ConfigError("surface.samples", "missing");
      at_least("surface.samples", samples, 1);
      const auto heights = to_list("surface.heights", r.require("surface.heights"));
      const std::size_t expected = dim == 1 ? samples : std::size_t(samples) * samples;
      if (heights.size() != expected)
        throw ConfigError("surface.heights", "expected " + std::to_string(expected) + " values, got " +
                                                 std::to_string(heights.size()));
      const double depth = -*std::min_element(heights.begin(), heights.end());
      try {
        c.surface = SurfaceSpec::sampled(dim, samples, depth, heights);
      } catch (const InvalidArgument& e) {
        throw ConfigError("surface.heights", e.what());
      }
      c.surface_id = "sampled-d" + std::to_string(dim) + "-n" + std::to_string(samples);
    } else {
      throw ConfigError("surface.kind", "unknown kind '" + kind + "' (expected flat, pillars or sampled)");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ConfigError("surface", e.what());
  }
}

void read_coefficients(const Reader& r, RunConfig& c) {
  c.coeffs.sigma_LV = to_number("coefficients.sigma_LV", r.require("coefficients.sigma_LV"));
  c.coeffs.sigma_SL = to_number("coefficients.sigma_SL", r.require("coefficients.sigma_SL"));
  c.coeffs.sigma_SV = to_number("coefficients.sigma_SV", r.require("coefficients.sigma_SV"));
  positive("coefficients.sigma_LV", c.coeffs.sigma_LV);
  try {
    c.coeffs.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError("coefficients", e.what());
  }
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config", "line " + std::to_string(e.line()) + ": " + e.message());
  }

  RunConfig c;
  c.source = source;
  c.text = text;
  const auto& allowed = allowed_keys();
  for (const auto& [section, body] : tree) {
    const auto it = allowed.find(section);
    if (body.empty() && !body.data().empty()) throw ConfigError(section, "key outside of any section");
    if (it == allowed.end()) throw ConfigError(section, "unknown section");
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) throw ConfigError(section + "." + key, "unknown key");
      c.entries[section + "." + key] = trim(value.data());
    }
  }

  const Reader r(tree);
  read_surface(r, c);
  read_coefficients(r, c);

  if (auto t = r.raw("task.name")) c.task = parse_task(*t);
  r.integer("task.workers", c.workers);
  at_least("task.workers", c.workers, 1);

  r.number("geometry.vol", c.vol);
  r.number("geometry.width", c.width);
  r.number("geometry.height", c.height);
  r.number("geometry.epsilon", c.epsilon);
  r.list("geometry.epsilons", c.epsilons);
  r.integer("geometry.cells_per_epsilon", c.cells_per_epsilon);
  positive("geometry.vol", c.vol);
  positive("geometry.width", c.width);
  positive("geometry.height", c.height);
  positive("geometry.epsilon", c.epsilon);
  for (double e : c.epsilons) positive("geometry.epsilons", e);
  at_least("geometry.cells_per_epsilon", c.cells_per_epsilon, 4);

  r.integer("cell.cells_per_period", c.cell.cells_per_period);
  at_least("cell.cells_per_period", c.cell.cells_per_period, 1);
  r.number("cell.window", c.window);
  positive("cell.window", c.window);
  r.list("cell.r_list", c.r_list);
  r.number("cell.t", c.cell.t);
  if (c.cell.t < 0.0) throw ConfigError("cell.t", "must be non-negative");
  if (auto v = r.raw("cell.lateral")) {
    if (*v == "free")
      c.cell.lateral = Boundary::Free;
    else if (*v == "periodic")
      c.cell.lateral = Boundary::Periodic;
    else if (*v == "walled")
      c.cell.lateral = Boundary::Walled;
    else
      throw ConfigError("cell.lateral", "expected free, periodic or walled");
  }
  if (auto v = r.raw("cell.cos_theta_bar")) {
    c.cos_theta_bar = to_number("cell.cos_theta_bar", *v);
    open_interval("cell.cos_theta_bar", *c.cos_theta_bar);
  }

  for (int i = -8; i <= 8; ++i) c.cos_list.push_back(0.12 * i);
  r.list("sweep.cos_list", c.cos_list);
  for (std::size_t i = 0; i < c.cos_list.size(); ++i) {
    open_interval("sweep.cos_list", c.cos_list[i]);
    if (i > 0 && !(c.cos_list[i] > c.cos_list[i - 1])) throw ConfigError("sweep.cos_list", "must be increasing");
  }

  r.integer("droplet.band", c.droplet.band);
  r.number("droplet.tau", c.droplet.tau);
  r.number("droplet.tau_min", c.droplet.tau_min);
  r.integer("droplet.max_steps", c.droplet.max_steps);
  r.integer("droplet.seeds", c.droplet_seeds);
  at_least("droplet.band", c.droplet.band, 0);
  positive("droplet.tau", c.droplet.tau);
  positive("droplet.tau_min", c.droplet.tau_min);
  if (c.droplet.tau_min > c.droplet.tau) throw ConfigError("droplet.tau_min", "exceeds droplet.tau");
  at_least("droplet.max_steps", c.droplet.max_steps, 0);
  at_least("droplet.seeds", c.droplet_seeds, 1);
  c.droplet.scan_keep = c.droplet_seeds;

  for (int i = 1; i <= 24; ++i) c.t_list.push_back(0.05 * i);
  for (int i = 0; i <= 20; ++i) c.layer_h.push_back(0.025 * i);
  r.list("profile.t_list", c.t_list);
  r.list("profile.layer_h", c.layer_h);
  for (double t : c.t_list) positive("profile.t_list", t);
  for (double h : c.layer_h)
    if (h < 0.0) throw ConfigError("profile.layer_h", "must be non-negative");
  r.number("profile.R0", c.R0);
  r.number("profile.C1", c.C1);
  r.number("profile.envelope_factor", c.envelope_factor);
  r.number("profile.alpha", c.alpha);
  r.number("profile.h0_constant", c.h0_constant);
  positive("profile.R0", c.R0);
  if (c.C1 < 0.0) throw ConfigError("profile.C1", "must be non-negative");
  positive("profile.envelope_factor", c.envelope_factor);
  if (!(c.alpha > 0.0 && c.alpha <= 1.0)) throw ConfigError("profile.alpha", "must lie in (0, 1]");
  positive("profile.h0_constant", c.h0_constant);

  r.number("tolerances.concavity", c.sweep_tol.concavity);
  r.number("tolerances.slope", c.sweep_tol.slope);
  r.number("tolerances.bound", c.sweep_tol.bound);
  r.number("tolerances.symmetry", c.sweep_tol.symmetry);
  r.number("tolerances.gap", c.sweep_tol.gap);
  r.number("tolerances.regime", c.cell.regime_tol);
  r.integer("tolerances.volume_cells", c.droplet.tol_cells);
  for (const char* k : {"concavity", "slope", "bound", "symmetry", "gap", "regime", "volume_cells"}) {
    const std::string f = std::string("tolerances.") + k;
    if (auto v = r.raw(f); v && to_number(f, *v) < 0.0) throw ConfigError(f, "must be non-negative");
  }

  if (auto v = r.raw("output.dir")) {
    if (v->empty()) throw ConfigError("output.dir", "empty path");
    c.out_dir = *v;
  }
  r.boolean("debug.corrupt_weights", c.corrupt_weights);

  if (auto v = r.raw("verify.criteria")) {
    for (double d : to_list("verify.criteria", *v)) {
      if (d != std::floor(d) || d < 1 || d > 11) throw ConfigError("verify.criteria", "ids run from 1 to 11");
      c.verify.criteria.push_back(static_cast<int>(d));
    }
  }
  r.integer("verify.enum_free_cells", c.verify.enum_free_cells);
  r.integer("verify.enum_grids", c.verify.enum_grids);
  r.integer("verify.rough_instances", c.verify.rough_instances);
  r.boolean("verify.enforce_time", c.verify.enforce_time);
  at_least("verify.enum_free_cells", c.verify.enum_free_cells, 1);
  at_least("verify.enum_grids", c.verify.enum_grids, 1);
  at_least("verify.rough_instances", c.verify.rough_instances, 1);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config", "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

namespace {

void whole_periods(const std::string& field, double width, double eps) {
  const double p = width / eps;
  if (p < 1.0 || std::abs(p - std::round(p)) > 1e-9)
    throw ConfigError(field, "geometry.width " + fmt(width) + " is not a whole number of periods of " + fmt(eps));
}

void window_list(const std::vector<double>& r) {
  if (r.size() < 3) throw ConfigError("cell.r_list", "needs at least three window sizes");
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] < 1.0 || r[i] != std::floor(r[i])) throw ConfigError("cell.r_list", "window sizes are whole periods");
    if (i > 0 && !(r[i] > r[i - 1])) throw ConfigError("cell.r_list", "must be increasing");
  }
}

}  // namespace

void validate_for_task(const RunConfig& c, Task task) {
  switch (task) {
    case Task::Cell:
      if (!c.r_list.empty()) window_list(c.r_list);
      break;
    case Task::SweepAngle:
      if (!c.r_list.empty()) window_list(c.r_list);
      if (c.cos_list.size() < 3) throw ConfigError("sweep.cos_list", "needs at least three values");
      break;
    case Task::Droplet:
      whole_periods("geometry.epsilon", c.width, c.epsilon);
      break;
    case Task::Homogenize:
    case Task::Profile:
      if (!c.r_list.empty()) window_list(c.r_list);
      try {
        c.coeffs.require_nondegenerate();
      } catch (const InvalidArgument& e) {
        throw ConfigError("coefficients", e.what());
      }
      for (double e : c.epsilons) whole_periods("geometry.epsilons", c.width, e);
      break;
  }
}

}  // namespace roughdrop

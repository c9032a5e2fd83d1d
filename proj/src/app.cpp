#include "roughdrop/app.hpp"

#include <boost/version.hpp>
#include <json.hpp>
#include <openssl/evp.h>
#include <openssl/opensslv.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "roughdrop/acceptance.hpp"
#include "roughdrop/cellproblem.hpp"
#include "roughdrop/config.hpp"
#include "roughdrop/droplet.hpp"
#include "roughdrop/errors.hpp"
#include "roughdrop/homogenize.hpp"

namespace roughdrop {

using nlohmann::json;
namespace fs = std::filesystem;

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw InvariantBreach("SHA-256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

namespace {

// Files written so far, in order, with their digests.
class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) {}

  void write(const std::string& name, const std::string& contents) {
    std::ofstream f(dir_ / name, std::ios::binary);
    f << contents;
    if (!f) throw std::runtime_error("cannot write " + (dir_ / name).string());
    files_.push_back({{"file", name}, {"bytes", contents.size()}, {"sha256", sha256_hex(contents)}});
  }
  void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }

  const json& files() const { return files_; }
  std::string digest() const {
    std::string all;
    for (const auto& f : files_) all += f["file"].get<std::string>() + " " + f["sha256"].get<std::string>() + "\n";
    return sha256_hex(all);
  }
  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  json files_ = json::array();
};

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::shared_ptr<const PerimeterStencil> stencil_for(const RunConfig& c) {
  if (!c.corrupt_weights) return nullptr;
  return std::make_shared<PerimeterStencil>(PerimeterStencil::standard(c.surface.dim() + 1).corrupted());
}

json closed_form_json(const SurfaceSpec& s, double cos_theta) {
  const ClosedForms cf = closed_forms(s, cos_theta);
  return {{"rho", cf.rho}, {"f", cf.f}, {"cos_theta_W", cf.cos_theta_W}, {"cos_theta_CB", cf.cos_theta_CB}};
}

json line_json(const LineFit& f) { return {{"slope", f.slope}, {"slope_stderr", f.slope_stderr}, {"intercept", f.intercept}}; }

void task_cell(const RunConfig& c, int workers, Outputs& out) {
  CellOptions o = c.cell;
  o.workers = workers;
  o.stencil = stencil_for(c);
  const double cos_Y = c.coeffs.cos_theta_Y();
  std::string csv = cell_csv_header() + "\n";
  json summary{{"surface_id", c.surface_id}, {"cos_theta_Y", cos_Y}, {"closed_forms", closed_form_json(c.surface, cos_Y)}};
  if (c.r_list.empty()) {
    const CellResult r = cell_result(c.surface, c.coeffs, c.window, o);
    csv += cell_csv_row(c.surface_id, cos_Y, r) + "\n";
    summary["window_size_r"] = r.window_size_r;
    summary["Sigma_SL"] = r.Sigma_SL;
    summary["Sigma_SV"] = r.Sigma_SV;
    summary["cos_Theta_Y"] = r.cos_Theta_Y;
    summary["cos_Theta_Y_raw"] = r.cos_Theta_Y_raw;
  } else {
    const EffectiveAngles ea = effective_angles(c.surface, c.coeffs, c.r_list, o);
    for (const auto& w : ea.windows) csv += cell_csv_row(c.surface_id, cos_Y, w) + "\n";
    summary["cos_theta_bar"] = ea.cos_theta_bar;
    summary["regime"] = to_string(ea.regime);
    summary["extrapolation_residual"] = ea.extrapolation_residual;
    summary["finite_size_b"] = ea.finite_size_b;
    summary["sigma_bar_SL"] = ea.sigma_bar_SL;
    summary["sigma_bar_SV"] = ea.sigma_bar_SV;
    summary["wenzel_threshold"] = ea.wenzel_threshold;
    summary["wenzel_cb_crossover"] = ea.wenzel_cb_crossover;
  }
  out.write("cell.csv", csv);
  out.write_json("cell.json", summary);
}

void task_sweep_angle(const RunConfig& c, int workers, Outputs& out) {
  CellOptions o = c.cell;
  o.workers = workers;
  o.stencil = stencil_for(c);
  const std::vector<double> r_list = c.r_list.empty() ? std::vector<double>{2, 4, 8} : c.r_list;
  const SweepReport rep = concavity_sweep(c.surface, c.cos_list, r_list, o, c.sweep_tol);
  std::string csv = "cos_theta_Y,cos_theta_bar,cos_theta_W,cos_theta_CB,regime,second_difference,residual\n";
  for (const auto& p : rep.points) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%s,%.17g,%.17g\n", p.cos_theta_Y, p.cos_theta_bar,
                  p.cos_theta_W, p.cos_theta_CB, to_string(p.regime), p.second_difference, p.residual);
    csv += buf;
  }
  out.write("angle_curve.csv", csv);
  out.write_json("regime_flags.json",
                 {{"surface_id", c.surface_id},
                  {"rho", rep.rho},
                  {"f", rep.f},
                  {"concave", rep.concave},
                  {"slopes_bounded", rep.slopes_bounded},
                  {"bounded", rep.bounded},
                  {"symmetric", rep.symmetric},
                  {"nondegenerate", rep.nondegenerate},
                  {"max_second_difference", rep.max_second_difference},
                  {"min_secant_slope", rep.min_secant_slope},
                  {"max_secant_slope", rep.max_secant_slope},
                  {"max_bound_excess", rep.max_bound_excess},
                  {"max_symmetry_error", rep.max_symmetry_error},
                  {"min_gap", rep.min_gap}});
}

SweepOptions sweep_options(const RunConfig& c, int workers) {
  SweepOptions so;
  so.width = c.width;
  so.height = c.height;
  so.cells_per_epsilon = c.cells_per_epsilon;
  if (!c.r_list.empty()) so.r_list = c.r_list;
  so.cos_theta_bar = c.cos_theta_bar;
  so.droplet = c.droplet;
  so.alpha = c.alpha;
  so.h0_constant = c.h0_constant;
  so.r0_R0 = c.R0;
  so.r0_C1 = c.C1;
  so.workers = workers;
  so.stencil = stencil_for(c);
  return so;
}

void task_droplet(const RunConfig& c, int workers, Outputs& out) {
  const SweepOptions so = sweep_options(c, workers);
  const auto dom = sweep_domain(c.surface, c.epsilon, so);
  const DropletResult r = minimize_droplet(dom, c.coeffs, c.vol, c.droplet);
  out.write("droplet.csv", droplet_csv_header() + "\n" + droplet_csv_row(c.epsilon, c.vol, r, contact_width(*r.labeling)) + "\n");
  std::ostringstream field;
  write_field(field, *r.labeling);
  out.write("droplet_field.txt", field.str());
  json j{{"surface_id", c.surface_id},
         {"epsilon", c.epsilon},
         {"h", dom->h()},
         {"vol", c.vol},
         {"volume_real", r.volume_real},
         {"target_cells", r.target_cells},
         {"total_E", r.energy.total_E},
         {"energy_excess", r.energy_excess},
         {"lambda_bracket", {r.lambda_bracket.first, r.lambda_bracket.second}},
         {"steps", r.steps},
         {"seed_used", r.seed_used},
         {"seed_energies", r.seed_energies},
         {"touches_lid", r.touches_lid},
         {"touches_walls", r.touches_walls},
         {"contact_width", contact_width(*r.labeling)}};
  const CircleFit fit = fit_interface_circle(*r.labeling, 2 * dom->h());
  if (fit.points > 0)
    j["circle_fit"] = {{"center_x", fit.center[0]}, {"center_z", fit.center[2]}, {"radius", fit.radius}, {"rms", fit.rms}};
  out.write_json("droplet.json", j);
}

json rate_json(const RunConfig& c, const RateReport& rep) {
  return {{"surface_id", c.surface_id},
          {"cos_theta_bar", rep.cos_theta_bar},
          {"vol", rep.vol},
          {"epsilons", rep.epsilons},
          {"energy_gap", rep.energy_gap},
          {"l1_gap", rep.l1_gap},
          {"hausdorff_gap", rep.hausdorff_gap},
          {"h0_used", rep.h0_used},
          {"energy_slope", line_json(rep.energy_slope)},
          {"l1_slope", line_json(rep.l1_slope)},
          {"hausdorff_slope", line_json(rep.hausdorff_slope)},
          {"degenerate", rep.degenerate},
          {"L0eps_holds", rep.L0eps_holds}};
}

void task_homogenize(const RunConfig& c, int workers, Outputs& out) {
  const RateReport rep = run_sweep(c.surface, c.coeffs, c.vol, c.epsilons, sweep_options(c, workers));
  std::string csv = rate_csv_header() + "\n";
  for (const auto& p : rep.points) csv += rate_csv_row(p) + "\n";
  out.write("rates.csv", csv);
  out.write_json("rates.json", rate_json(c, rep));
}

void task_profile(const RunConfig& c, int workers, Outputs& out) {
  const RateReport rep = run_sweep(c.surface, c.coeffs, c.vol, c.epsilons, sweep_options(c, workers));
  std::vector<PerimeterProfile> profiles;
  std::string per = perimeter_csv_header() + "\n";
  std::string layer = "epsilon,h,distance\n";
  json layers = json::array();
  for (const auto& p : rep.points) {
    profiles.push_back(perimeter_profile(p.droplet, c.t_list, c.R0, c.C1, c.envelope_factor));
    for (std::size_t i = 0; i < profiles.back().t.size(); ++i)
      per += perimeter_csv_row(p.epsilon, profiles.back(), i) + "\n";
    const LayerProbe probe = boundary_layer_probe(*p.droplet.labeling, *p.cap_field, c.layer_h);
    for (std::size_t i = 0; i < probe.h.size(); ++i) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p.epsilon, probe.h[i], probe.distance[i]);
      layer += buf;
    }
    layers.push_back({{"epsilon", p.epsilon},
                      {"plateau", probe.plateau},
                      {"layer", probe.layer},
                      {"h0", p.h0},
                      {"scaling_eps_(1+alpha)/3", std::pow(p.epsilon, (1.0 + c.alpha) / 3.0)},
                      {"r0", profiles.back().r0_epsilon},
                      {"C_fit", profiles.back().C_fit},
                      {"violations_above_r0", profiles.back().violations_above_r0},
                      {"violations_below_r0", profiles.back().violations_below_r0}});
  }
  const PerimeterEnvelope env = perimeter_envelope(profiles, c.envelope_factor);
  out.write("perimeter.csv", per);
  out.write("layer.csv", layer);
  json j = rate_json(c, rep);
  j["envelope"] = {{"C", env.C},
                   {"factor", c.envelope_factor},
                   {"points_above_r0", env.points_above_r0},
                   {"violations_above_r0", env.violations_above_r0},
                   {"violations_below_r0", env.violations_below_r0}};
  j["layers"] = layers;
  out.write_json("profile.json", j);
}

json tolerances_json(const RunConfig& c) {
  return {{"concavity", c.sweep_tol.concavity}, {"slope", c.sweep_tol.slope},       {"bound", c.sweep_tol.bound},
          {"symmetry", c.sweep_tol.symmetry},   {"gap", c.sweep_tol.gap},           {"regime", c.cell.regime_tol},
          {"volume_cells", c.droplet.tol_cells}, {"envelope_factor", c.envelope_factor}};
}

json versions_json() {
  return {{"roughdrop", kVersion},
          {"compiler", __VERSION__},
          {"cplusplus", __cplusplus},
          {"boost", BOOST_LIB_VERSION},
          {"openssl", OPENSSL_VERSION_TEXT},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
}

int run_verify(const RunConfig& c, int workers, Outputs& out, std::ostream& log) {
  AcceptanceOptions o = c.verify;
  o.workers = workers;
  o.stencil = stencil_for(c);
  const AcceptanceReport rep = run_acceptance(o, &log);
  std::string csv = "id,name,status,limit_seconds,detail\n";
  for (const auto& r : rep.results) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%d,%s,%s,%.0f,", r.id, r.name.c_str(), to_string(r.status), r.limit_seconds);
    csv += buf + csv_quote(r.detail) + "\n";
  }
  out.write("verify.csv", csv);
  if (rep.invariant_breach) return 4;
  return rep.all_passed() ? 0 : 1;
}

}  // namespace

int run_app(const AppArgs& args, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (args.config_path.empty()) throw ConfigError("--config", "missing");
    const RunConfig c = load_config(args.config_path);
    const int workers = args.workers.value_or(c.workers);
    if (workers < 1) throw ConfigError("--workers", "must be at least 1");

    std::optional<Task> task = c.task;
    if (args.task) task = parse_task(*args.task, "--task");
    if (!args.verify) {
      if (!task) throw ConfigError("task.name", "missing");
      validate_for_task(c, *task);
    }

    std::string dir = c.out_dir;
    if (const char* env = std::getenv("ROUGHDROP_OUT"); env && *env) dir = env;
    if (args.out_dir) dir = *args.out_dir;
    fs::create_directories(dir);
    Outputs outputs(dir);

    int status = 0;
    if (args.verify) {
      status = run_verify(c, workers, outputs, out);
    } else {
      switch (*task) {
        case Task::Cell: task_cell(c, workers, outputs); break;
        case Task::SweepAngle: task_sweep_angle(c, workers, outputs); break;
        case Task::Droplet: task_droplet(c, workers, outputs); break;
        case Task::Homogenize: task_homogenize(c, workers, outputs); break;
        case Task::Profile: task_profile(c, workers, outputs); break;
      }
    }

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json inputs = json::object();
    for (const auto& [k, v] : c.entries) inputs[k] = v;
    const json manifest{{"tool", "roughdrop"},
                        {"mode", args.verify ? "verify" : to_string(*task)},
                        {"config", {{"path", c.source}, {"sha256", sha256_hex(c.text)}}},
                        {"surface_id", c.surface_id},
                        {"inputs", inputs},
                        {"tolerances", tolerances_json(c)},
                        {"versions", versions_json()},
                        {"workers", workers},
                        {"outputs", outputs.files()},
                        {"outputs_sha256", outputs.digest()},
                        {"status", status},
                        {"wall_time_seconds", wall}};
    std::ofstream(fs::path(dir) / "manifest.json") << manifest.dump(2) << "\n";
    out << "wrote " << outputs.files().size() << " files to " << dir << " (outputs sha256 "
        << outputs.digest().substr(0, 16) << ")" << std::endl;
    return status;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << std::endl;
    return 2;
  } catch (const Infeasible& e) {
    err << "infeasible: " << e.what() << std::endl;
    return 3;
  } catch (const InvariantBreach& e) {
    err << "invariant breach: " << e.what() << std::endl;
    return 4;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << std::endl;
    return 1;
  }
}

}  // namespace roughdrop

#include "roughdrop/cellproblem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "roughdrop/errors.hpp"
#include "roughdrop/fit.hpp"
#include "roughdrop/lattice_cut.hpp"
#include "roughdrop/parallel.hpp"

namespace roughdrop {

const char* to_string(CellKind k) { return k == CellKind::SL ? "SL" : "SV"; }

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Wenzel: return "Wenzel";
    case Regime::CassieBaxter: return "CassieBaxter";
    case Regime::Intermediate: return "Intermediate";
  }
  return "?";
}

namespace {

int window_periods(double r) {
  const double k = std::round(r);
  if (!(r > 0.0) || k < 1.0 || std::abs(r - k) > 1e-9)
    throw InvalidArgument("window not commensurate with epsilon: r must be a positive integer number of periods");
  return static_cast<int>(k);
}

CellPartial solve_cell(const SurfaceSpec& surface, const Coefficients& coeffs, double window_r, CellKind kind,
                       const CellOptions& opt) {
  coeffs.require_nondegenerate();
  auto dom = cell_domain(surface, window_r, opt);
  const Fix above = kind == CellKind::SL ? Fix::Liquid : Fix::Vapor;
  std::vector<Fix> fixed(dom->cell_count(), Fix::Free);
  for (int k = 0; k < dom->nz(); ++k) {
    if (!(dom->z_center(k) > opt.t)) continue;
    for (int j = 0; j < dom->ny(); ++j)
      for (int i = 0; i < dom->nx(); ++i) fixed[dom->index(i, j, k)] = above;
  }
  LatticeCutOptions lo;
  lo.fixed = &fixed;
  lo.scale = opt.scale;
  const LatticeCut cut = build_lattice_cut(*dom, coeffs, lo);
  const CutSolution sol = solve(cut.problem, SideChoice::SinkSide, opt.algorithm);

  CellPartial out;
  out.kind = kind;
  out.window_size_r = window_r;
  out.value = sol.value;
  out.scale = cut.scale;
  out.total = static_cast<double>(sol.value) / cut.scale;
  out.per_area = out.total / std::pow(window_r, surface.dim());
  out.minimizer = std::make_shared<LabelField>(field_from_cut(cut, dom, sol.liquid));
  const double direct = energy(*out.minimizer, coeffs).total_E;
  const double slack = 1e-6 * std::max(1.0, std::abs(direct)) + 4.0 * cut.problem.edges().size() / cut.scale;
  if (std::abs(direct - out.total) > slack)
    throw InvariantBreach("cell minimum disagrees with the lattice energy of its minimizer");
  return out;
}

}  // namespace

std::shared_ptr<const Domain> cell_domain(const SurfaceSpec& surface, double window_r, const CellOptions& opt) {
  const int r = window_periods(window_r);
  if (opt.cells_per_period < 1) throw InvalidArgument("cells_per_period must be >= 1");
  if (!(opt.t >= 0.0)) throw InvalidArgument("constraint plane t must be >= 0");
  const int n = opt.cells_per_period;
  const double h = 1.0 / n;
  DomainOptions dopt;
  dopt.lateral = {opt.lateral, opt.lateral};
  dopt.lid = Lid::Open;
  dopt.stencil = opt.stencil;
  const auto& st = opt.stencil ? *opt.stencil : PerimeterStencil::standard(surface.dim() + 1);
  const long below = static_cast<long>(std::ceil(surface.depth() * n - 1e-9)) + 2;
  const long above = static_cast<long>(std::ceil(opt.t * n - 1e-9)) + std::max(2, st.vertical_reach());
  Extents e;
  e.lo = {0.0, 0.0};
  e.hi = {static_cast<double>(r), static_cast<double>(r)};
  e.z_lo = -below * h;
  e.z_hi = above * h;
  return Domain::build(surface, e, h, 1.0, dopt);
}

CellPartial sigma_SL(const SurfaceSpec& surface, const Coefficients& coeffs, double window_r,
                     const CellOptions& options) {
  return solve_cell(surface, coeffs, window_r, CellKind::SL, options);
}

CellPartial sigma_SV(const SurfaceSpec& surface, const Coefficients& coeffs, double window_r,
                     const CellOptions& options) {
  return solve_cell(surface, coeffs, window_r, CellKind::SV, options);
}

CellResult cell_result(const SurfaceSpec& surface, const Coefficients& coeffs, double window_r,
                       const CellOptions& options) {
  const CellPartial sl = sigma_SL(surface, coeffs, window_r, options);
  const CellPartial sv = sigma_SV(surface, coeffs, window_r, options);
  CellResult r;
  r.window_size_r = window_r;
  r.Sigma_SL = sl.per_area;
  r.Sigma_SV = sv.per_area;
  r.cos_Theta_Y_raw = (sl.per_area - sv.per_area) / coeffs.sigma_LV;
  r.cos_Theta_Y = std::clamp(r.cos_Theta_Y_raw, -1.0, 1.0);
  r.minimizer_SL = sl.minimizer;
  r.minimizer_SV = sv.minimizer;
  return r;
}

ClosedForms closed_forms(const SurfaceSpec& surface, double c) {
  const SurfaceSummary s = summarize(surface);
  ClosedForms out;
  out.rho = s.roughness_rho;
  out.f = s.pillar_fraction_f;
  out.cos_theta_W = c * out.rho;
  out.cos_theta_CB = c >= 0.0 ? c * out.f + (1.0 - out.f) : c * out.f - (1.0 - out.f);
  return out;
}

EffectiveAngles effective_angles(const SurfaceSpec& surface, const Coefficients& coeffs,
                                 const std::vector<double>& r_list, const CellOptions& options) {
  if (r_list.size() < 3) throw InvalidArgument("effective angles need at least three window sizes");
  for (std::size_t i = 0; i < r_list.size(); ++i) {
    window_periods(r_list[i]);
    if (i > 0 && !(r_list[i] > r_list[i - 1])) throw InvalidArgument("window sizes must increase");
  }
  coeffs.require_nondegenerate();
  EffectiveAngles out;
  out.windows.resize(r_list.size());
  parallel_for(r_list.size(), options.workers,
               [&](std::size_t i) { out.windows[i] = cell_result(surface, coeffs, r_list[i], options); });

  std::vector<double> inv, cosv, sl, sv;
  for (const auto& w : out.windows) {
    inv.push_back(1.0 / w.window_size_r);
    cosv.push_back(w.cos_Theta_Y_raw);
    sl.push_back(w.Sigma_SL);
    sv.push_back(w.Sigma_SV);
  }
  const LineFit fc = fit_line(inv, cosv);
  out.cos_theta_Y = coeffs.cos_theta_Y();
  out.cos_theta_bar = std::clamp(fc.intercept, -1.0, 1.0);
  out.finite_size_b = fc.slope;
  out.extrapolation_residual = fc.max_residual;
  out.sigma_bar_SL = fit_line(inv, sl).intercept;
  out.sigma_bar_SV = fit_line(inv, sv).intercept;

  const ClosedForms cf = closed_forms(surface, out.cos_theta_Y);
  out.rho = cf.rho;
  out.f = cf.f;
  out.cos_theta_W = cf.cos_theta_W;
  out.cos_theta_CB = cf.cos_theta_CB;
  out.wenzel_threshold = 1.0 / (1.0 + 2.0 * surface.dim());
  out.wenzel_cb_crossover = cf.rho > cf.f ? (1.0 - cf.f) / (cf.rho - cf.f) : 1.0;

  const double dw = std::abs(out.cos_theta_bar - out.cos_theta_W);
  const double dc = std::abs(out.cos_theta_bar - out.cos_theta_CB);
  const double tol = options.regime_tol;
  if (dw <= tol && (dc > tol || dw <= dc)) out.regime = Regime::Wenzel;
  else if (dc <= tol) out.regime = Regime::CassieBaxter;
  else out.regime = Regime::Intermediate;
  return out;
}

SweepReport concavity_sweep(const SurfaceSpec& surface, const std::vector<double>& cos_list,
                            const std::vector<double>& r_list, const CellOptions& options,
                            const SweepTolerances& tol) {
  if (cos_list.size() < 3) throw InvalidArgument("sweep needs at least three cos theta_Y values");
  for (std::size_t i = 0; i < cos_list.size(); ++i) {
    if (!(std::abs(cos_list[i]) < 1.0)) throw InvalidArgument("sweep values must lie in (-1, 1)");
    if (i > 0 && !(cos_list[i] > cos_list[i - 1])) throw InvalidArgument("sweep values must increase");
  }
  SweepReport rep;
  const std::size_t n = cos_list.size();
  rep.points.resize(n);
  CellOptions inner = options;
  inner.workers = 1;
  parallel_for(n, options.workers, [&](std::size_t i) {
    const EffectiveAngles ea = effective_angles(surface, Coefficients::from_cos(cos_list[i]), r_list, inner);
    SweepPoint& p = rep.points[i];
    p.cos_theta_Y = cos_list[i];
    p.cos_theta_bar = ea.cos_theta_bar;
    p.cos_theta_W = ea.cos_theta_W;
    p.cos_theta_CB = ea.cos_theta_CB;
    p.regime = ea.regime;
    p.residual = ea.extrapolation_residual;
  });
  const ClosedForms cf = closed_forms(surface, 0.5);
  rep.rho = cf.rho;
  rep.f = cf.f;

  auto x = [&](std::size_t i) { return rep.points[i].cos_theta_Y; };
  auto y = [&](std::size_t i) { return rep.points[i].cos_theta_bar; };
  rep.max_second_difference = -1e300;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double a = (x(i + 1) - x(i)) / (x(i + 1) - x(i - 1));
    const double interp = a * y(i - 1) + (1.0 - a) * y(i + 1);
    rep.points[i].second_difference = 2.0 * (interp - y(i));
    if (x(i - 1) >= 0.0) rep.max_second_difference = std::max(rep.max_second_difference, rep.points[i].second_difference);
  }
  if (rep.max_second_difference == -1e300) rep.max_second_difference = 0.0;
  rep.min_secant_slope = 1e300;
  rep.max_secant_slope = -1e300;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double s = (y(i + 1) - y(i)) / (x(i + 1) - x(i));
    rep.min_secant_slope = std::min(rep.min_secant_slope, s);
    rep.max_secant_slope = std::max(rep.max_secant_slope, s);
  }
  rep.max_bound_excess = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = rep.points[i];
    const double excess = p.cos_theta_Y >= 0.0
                              ? p.cos_theta_bar - std::min(p.cos_theta_W, p.cos_theta_CB)
                              : std::max(p.cos_theta_W, p.cos_theta_CB) - p.cos_theta_bar;
    rep.max_bound_excess = std::max(rep.max_bound_excess, excess);
    rep.min_gap = std::min(rep.min_gap, 1.0 - std::abs(p.cos_theta_bar));
    for (std::size_t j = 0; j < n; ++j)
      if (std::abs(x(j) + x(i)) < 1e-12)
        rep.max_symmetry_error = std::max(rep.max_symmetry_error, std::abs(y(j) + y(i)));
  }
  rep.concave = rep.max_second_difference <= tol.concavity;
  rep.slopes_bounded = rep.min_secant_slope >= rep.f - tol.slope && rep.max_secant_slope <= rep.rho + tol.slope;
  rep.bounded = rep.max_bound_excess <= tol.bound;
  rep.symmetric = rep.max_symmetry_error <= tol.symmetry;
  rep.nondegenerate = rep.min_gap >= tol.gap;
  return rep;
}

PeriodicMinimizer periodic_minimizer(const SurfaceSpec& surface, const Coefficients& coeffs, CellKind which,
                                     const CellOptions& options, std::optional<double> expected_sigma,
                                     double tol) {
  CellOptions o = options;
  o.lateral = Boundary::Periodic;
  const CellPartial p = which == CellKind::SL ? sigma_SL(surface, coeffs, 1.0, o) : sigma_SV(surface, coeffs, 1.0, o);
  PeriodicMinimizer out;
  out.field = p.minimizer;
  out.energy_per_period = p.total;
  if (expected_sigma) {
    out.checked = true;
    out.matches = std::abs(p.total - *expected_sigma) <= tol;
  }
  return out;
}

std::string cell_csv_header() { return "surface_id,cos_theta_Y,r,Sigma_SL,Sigma_SV,cos_Theta_Y"; }

std::string cell_csv_row(const std::string& surface_id, double cos_theta_Y, const CellResult& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%.17g,%.17g,%.17g", cos_theta_Y, r.window_size_r, r.Sigma_SL,
                r.Sigma_SV, r.cos_Theta_Y);
  return surface_id + buf;
}

}  // namespace roughdrop

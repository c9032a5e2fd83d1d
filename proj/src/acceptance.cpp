#include "roughdrop/acceptance.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "roughdrop/cap.hpp"
#include "roughdrop/cellproblem.hpp"
#include "roughdrop/droplet.hpp"
#include "roughdrop/errors.hpp"
#include "roughdrop/fit.hpp"
#include "roughdrop/homogenize.hpp"
#include "roughdrop/lattice_cut.hpp"
#include "roughdrop/maxflow.hpp"
#include "roughdrop/surface.hpp"

namespace roughdrop {

const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    case Status::Skip: return "SKIP";
  }
  return "?";
}

bool AcceptanceReport::all_passed() const {
  return std::none_of(results.begin(), results.end(), [](const auto& r) { return r.status == Status::Fail; });
}

std::string format_result(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "[%s] criterion %2d %s: ", to_string(r.status), r.id, r.name.c_str());
  char tail[64];
  std::snprintf(tail, sizeof tail, " (%.1f s, limit %.0f s)", r.seconds, r.limit_seconds);
  return head + r.detail + tail;
}

namespace {

std::string num(double v, int prec = 4) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

// ---- criterion 1: exhaustive enumeration over the free nodes, Gray order.

struct Enumerated {
  Capacity best = 0;
  std::vector<std::uint8_t> uni, inter;
};

Enumerated enumerate_free(const CutProblem& p) {
  const int n = p.node_count();
  std::vector<int> free_nodes;
  std::vector<std::uint8_t> x(n, 0);
  for (int i = 0; i < n; ++i) {
    if (p.hard(i) == Hard::None) free_nodes.push_back(i);
    if (p.hard(i) == Hard::Liquid) x[i] = 1;
  }
  std::vector<std::vector<int>> inc(n);
  const auto& edges = p.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    inc[edges[e].p].push_back(static_cast<int>(e));
    inc[edges[e].q].push_back(static_cast<int>(e));
  }
  auto pair_cost = [&](const CutProblem::Edge& e) -> Capacity {
    if (!x[e.p] && x[e.q]) return e.vl;
    if (x[e.p] && !x[e.q]) return e.lv;
    return 0;
  };
  Capacity cur = p.evaluate(x);
  Enumerated out{cur, x, x};
  const std::uint64_t count = std::uint64_t(1) << free_nodes.size();
  for (std::uint64_t g = 1; g < count; ++g) {
    const int i = free_nodes[std::countr_zero(g)];
    Capacity d = x[i] ? p.cost_vapor(i) - p.cost_liquid(i) : p.cost_liquid(i) - p.cost_vapor(i);
    for (int e : inc[i]) d -= pair_cost(edges[e]);
    x[i] ^= 1;
    for (int e : inc[i]) d += pair_cost(edges[e]);
    cur += d;
    if (cur < out.best) {
      out.best = cur;
      out.uni = x;
      out.inter = x;
    } else if (cur == out.best) {
      for (int k = 0; k < n; ++k) {
        out.uni[k] |= x[k];
        out.inter[k] &= x[k];
      }
    }
  }
  return out;
}

CutProblem random_rational_grid(std::mt19937_64& rng, int max_free) {
  // Rationals a/b with b <= 6, scaled by 60 to exact integers.
  auto rational = [&](int hi) -> Capacity {
    const Capacity a = static_cast<Capacity>(rng() % (hi + 1));
    const Capacity b = 1 + static_cast<Capacity>(rng() % 6);
    return a * (60 / b);
  };
  const int nx = 1 + static_cast<int>(rng() % 5);
  const int ny = std::max(1, static_cast<int>(1 + rng() % std::max(1, max_free / nx)));
  CutProblem p(nx * ny);
  auto id = [&](int i, int j) { return j * nx + i; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      p.add_unary(id(i, j), rational(40), rational(40));
      if (i + 1 < nx) p.add_pairwise(id(i, j), id(i + 1, j), rational(30), rational(30));
      if (j + 1 < ny) p.add_pairwise(id(i, j), id(i, j + 1), rational(30), rational(30));
      const auto r = rng() % 10;
      if (r == 0) p.set_hard(id(i, j), Hard::Liquid);
      if (r == 1) p.set_hard(id(i, j), Hard::Vapor);
    }
  return p;
}

Outcome criterion_mincut(const AcceptanceOptions& opt) {
  std::mt19937_64 rng(20240601);
  int mismatches = 0, grids = 0, max_free = 0;
  for (int g = 0; g < opt.enum_grids; ++g) {
    const CutProblem p = random_rational_grid(rng, opt.enum_free_cells);
    int free_count = 0;
    for (int i = 0; i < p.node_count(); ++i) free_count += p.hard(i) == Hard::None;
    max_free = std::max(max_free, free_count);
    const Enumerated ref = enumerate_free(p);
    for (auto alg : {Algorithm::AugmentingPath, Algorithm::PushRelabel})
      for (auto side : {SideChoice::SourceSide, SideChoice::SinkSide}) {
        const CutSolution s = solve(p, side, alg);
        const bool ok = s.value == ref.best && p.evaluate(s.liquid) == s.value && p.satisfies_hard(s.liquid) &&
                        s.liquid == (side == SideChoice::SinkSide ? ref.uni : ref.inter);
        mismatches += !ok;
      }
    ++grids;
  }
  return {grids >= 200 && mismatches == 0,
          std::to_string(grids) + " grids (<= " + std::to_string(max_free) +
              " free cells), 2 solvers x 2 sides, " + std::to_string(mismatches) + " mismatches"};
}

// ---- cell problem criteria

SurfaceSpec pillar(int dim, double depth, int cells) { return make_pillar_surface(dim, 0.5, depth, cells); }

CellOptions cell_options(const AcceptanceOptions& opt, int cells) {
  CellOptions o;
  o.cells_per_period = cells;
  o.workers = opt.workers;
  o.stencil = opt.stencil;
  return o;
}

Outcome criterion_flat(const AcceptanceOptions& opt) {
  double worst = 0.0;
  for (double c : {-0.8, -0.4, 0.0, 0.4, 0.8}) {
    const CellResult r = cell_result(SurfaceSpec::flat(1), Coefficients::from_cos(c), 4.0, cell_options(opt, 8));
    worst = std::max(worst, std::abs(r.cos_Theta_Y - c));
  }
  return {worst <= 0.02, "max |cos Theta_Y - cos theta_Y| = " + num(worst) + " (tol 0.02)"};
}

bool all_windows_match(const EffectiveAngles& ea, const std::function<LabelField(std::shared_ptr<const Domain>)>& tmpl,
                       long* differing) {
  bool ok = true;
  for (const auto& w : ea.windows) {
    const LabelField t = tmpl(w.minimizer_SL->domain_ptr());
    long diff = 0;
    for (std::size_t i = 0; i < t.raw().size(); ++i) diff += t.raw()[i] != w.minimizer_SL->raw()[i];
    *differing += diff;
    ok = ok && diff == 0;
  }
  return ok;
}

Outcome criterion_wenzel(const AcceptanceOptions& opt) {
  const EffectiveAngles ea =
      effective_angles(pillar(1, 1.0, 8), Coefficients::from_cos(0.1), {2, 4, 8}, cell_options(opt, 8));
  long diff = 0;
  const bool tmpl = all_windows_match(ea, wenzel_state, &diff);
  const bool angle = std::abs(ea.cos_theta_bar - 0.30) <= 0.02;
  return {angle && tmpl, "rho = " + num(ea.rho) + ", cos theta_bar = " + num(ea.cos_theta_bar, 6) +
                             " (target 0.30 +- 0.02); SL minimizer vs groove-filling template: " +
                             std::to_string(diff) + " differing cells"};
}

Outcome criterion_cassie(const AcceptanceOptions& opt) {
  const auto co = Coefficients::from_cos(0.95);
  const EffectiveAngles ea = effective_angles(pillar(1, 2.0, 8), co, {2, 4, 8}, cell_options(opt, 8));
  long diff2 = 0;
  const bool tmpl2 = all_windows_match(ea, cassie_baxter_state, &diff2);
  const bool angle2 = std::abs(ea.cos_theta_bar - 0.975) <= 0.02;

  const SurfaceSpec s3 = pillar(2, 2.0, 4);
  CellOptions o3 = cell_options(opt, 4);
  o3.lateral = Boundary::Periodic;
  if (o3.stencil && o3.stencil->ambient_dim() != 3) o3.stencil = nullptr;
  const CellResult r3 = cell_result(s3, co, 2.0, o3);
  const double target3 = closed_forms(s3, 0.95).cos_theta_CB;
  const bool angle3 = std::abs(r3.cos_Theta_Y - target3) <= 0.04;
  const LabelField t3 = cassie_baxter_state(r3.minimizer_SL->domain_ptr());
  long diff3 = 0;
  for (std::size_t i = 0; i < t3.raw().size(); ++i) diff3 += t3.raw()[i] != r3.minimizer_SL->raw()[i];
  // Excess lattice energy of the template over the minimizer, per unit area.
  double excess = 0.0;
  for (const auto& w : ea.windows) {
    const double et = energy(cassie_baxter_state(w.minimizer_SL->domain_ptr()), co).total_E;
    excess = std::max(excess, (et - energy(*w.minimizer_SL, co).total_E) / w.window_size_r);
  }
  return {angle2 && tmpl2 && angle3 && diff3 == 0,
          "d+1=2: cos theta_bar = " + num(ea.cos_theta_bar, 6) + " (target 0.975 +- 0.02), template diff " +
              std::to_string(diff2) + " cells, template energy above minimizer by " + num(excess) +
              " per unit area; d+1=3 (f = " + num(summarize(s3).pillar_fraction_f) +
              "): cos Theta_Y = " + num(r3.cos_Theta_Y, 6) + " (target " + num(target3, 6) +
              " +- 0.04), template diff " + std::to_string(diff3) + " cells"};
}

Outcome criterion_concavity(const AcceptanceOptions& opt) {
  std::vector<double> grid;
  for (int i = 0; i < 9; ++i) grid.push_back(0.12 * i);
  bool pass = true;
  std::string detail;
  for (double M : {1.0, 2.0}) {
    SweepTolerances tol;
    const SweepReport r = concavity_sweep(pillar(1, M, 8), grid, {2, 4, 8}, cell_options(opt, 8), tol);
    const bool ok = r.max_second_difference <= 0.01 && r.max_bound_excess <= 0.02 && r.min_gap >= 0.01;
    pass = pass && ok;
    detail += (detail.empty() ? "" : "; ") + std::string("M=") + num(M) +
              ": max second difference " + num(r.max_second_difference) + " (<= 0.01), max bound excess " +
              num(r.max_bound_excess) + " (<= 0.02), min gap " + num(r.min_gap) + " (>= 0.01)";
  }
  return {pass, detail};
}

Outcome criterion_finite_size(const AcceptanceOptions& opt) {
  struct Case {
    double depth, c;
  };
  bool pass = true;
  std::string detail;
  for (const Case& k : {Case{2.0, 0.95}, Case{1.0, 0.1}, Case{1.0, 0.5}, Case{2.0, -0.6}}) {
    const EffectiveAngles ea =
        effective_angles(pillar(1, k.depth, 8), Coefficients::from_cos(k.c), {2, 4, 8}, cell_options(opt, 8));
    double worst = 0.0;
    bool ok = true;
    for (const auto& w : ea.windows) {
      const double term = std::abs(ea.finite_size_b / w.window_size_r);
      const double res = std::abs(w.cos_Theta_Y_raw - (ea.cos_theta_bar + ea.finite_size_b / w.window_size_r));
      ok = ok && res <= 0.25 * term + 1e-9;
      worst = std::max(worst, term > 0 ? res / term : (res > 1e-9 ? INFINITY : 0.0));
    }
    pass = pass && ok;
    detail += (detail.empty() ? "" : "; ") + std::string("M=") + num(k.depth) + " cos=" + num(k.c) +
              ": b = " + num(ea.finite_size_b) + ", max residual/(b/r) = " + num(worst);
  }
  return {pass, detail + " (tol 0.25)"};
}

Outcome criterion_additivity(const AcceptanceOptions& opt) {
  long super_viol = 0, almost_viol = 0, checks = 0;
  double worst_margin = INFINITY;
  for (int dim : {1, 2}) {
    const SurfaceSpec s = dim == 1 ? pillar(1, 1.0, 8) : pillar(2, 0.5, 4);
    CellOptions o = cell_options(opt, dim == 1 ? 8 : 4);
    if (o.stencil && o.stencil->ambient_dim() != dim + 1) o.stencil = nullptr;
    o.scale = std::ldexp(1.0, 36);  // common fixed point so values compare exactly
    for (double c : {-0.6, 0.2, 0.8}) {
      const auto co = Coefficients::from_cos(c);
      for (double r : {1.0, 2.0}) {
        for (CellKind kind : {CellKind::SL, CellKind::SV}) {
          const CellPartial small = kind == CellKind::SL ? sigma_SL(s, co, r, o) : sigma_SV(s, co, r, o);
          const CellPartial big = kind == CellKind::SL ? sigma_SL(s, co, 2 * r, o) : sigma_SV(s, co, 2 * r, o);
          const long parts = 1L << dim;
          super_viol += big.value < parts * small.value;
          const double lateral = co.sigma_LV * 2.0 * dim * s.depth() * parts * std::pow(r, dim - 1);
          const double margin = parts * small.total + lateral - big.total;
          almost_viol += margin < -1e-9;
          worst_margin = std::min(worst_margin, margin / lateral);
          ++checks;
        }
      }
    }
  }
  return {super_viol == 0 && almost_viol == 0,
          std::to_string(checks) + " doublings: " + std::to_string(super_viol) + " super-additivity and " +
              std::to_string(almost_viol) + " almost-additivity violations; min slack " + num(worst_margin) +
              " of the lateral constant"};
}

// ---- droplet criteria

Outcome criterion_droplet(const AcceptanceOptions&) {
  const double c = 0.5, rho = 0.3;
  const double vol = cap_volume(2, rho, c);
  const double exact = cap_energy_excess(homogenized_cap(c, vol, 2), 1.0);
  std::vector<double> err;
  double rel_energy = 0.0;
  std::string detail = "z0/rho0 error";
  for (int n : {64, 128, 256}) {
    const double h = 1.0 / n;
    Extents e;
    e.lo = {0.0, 0.0};
    e.hi = {1.0, 1.0};
    e.z_lo = -2 * h;
    e.z_hi = 0.625;
    const auto dom = Domain::build(SurfaceSpec::flat(1), e, h, h);
    const DropletResult r = minimize_droplet(dom, Coefficients::from_cos(c), vol);
    const CircleFit fit = fit_interface_circle(*r.labeling, 2 * h);
    err.push_back(std::abs(fit.center[2] / fit.radius - c));
    rel_energy = std::abs(r.energy_excess - exact) / exact;
    detail += " h=1/" + std::to_string(n) + ": " + num(err.back(), 3);
  }
  bool halving = true;
  detail += "; ratios";
  for (std::size_t i = 0; i + 1 < err.size(); ++i) {
    const double q = err[i] > 0 ? err[i + 1] / err[i] : INFINITY;
    halving = halving && q >= 0.35 && q <= 0.65;
    detail += " " + num(q, 3);
  }
  detail += " (0.5 +- 30%); energy error at h=1/256: " + num(100 * rel_energy, 3) + "% (<= 3%)";
  return {halving && rel_energy <= 0.03, detail};
}

Outcome criterion_parametric(const AcceptanceOptions& opt) {
  std::mt19937_64 rng(4242);
  long violations = 0, solves = 0;
  for (int t = 0; t < opt.rough_instances; ++t) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int cells = 4;
    std::vector<double> h(cells);
    for (auto& v : h) v = -0.25 * std::floor(u(rng) * 5.0);
    h[0] = 0.0;
    h[1 + rng() % (cells - 1)] = -1.0;
    const SurfaceSpec s = SurfaceSpec::sampled(1, cells, 1.0, h);
    Extents e;
    e.lo = {0, 0};
    e.hi = {double(2 + rng() % 3), 1};
    e.z_lo = -1.25;
    e.z_hi = 1.5;
    const auto d = Domain::build(s, e, 0.25, 1.0);
    const LatticeCut cut = build_lattice_cut(*d, Coefficients::from_cos(-0.9 + 1.8 * u(rng)));
    const double unit = cut.scale * d->face_area();
    std::vector<std::uint8_t> prev;
    for (int k = -40; k <= 40; ++k) {
      const CutSolution sol = solve(cut.problem, SideChoice::SinkSide, Algorithm::Auto,
                                    static_cast<Capacity>(k * 0.1 * unit));
      ++solves;
      if (!prev.empty()) {
        bool nested = true;
        for (std::size_t i = 0; i < prev.size(); ++i) nested = nested && (!prev[i] || sol.liquid[i]);
        violations += !nested;
      }
      prev = sol.liquid;
    }
  }
  return {violations == 0, std::to_string(opt.rough_instances) + " instances, " + std::to_string(solves) +
                               " solves, " + std::to_string(violations) + " monotonicity/nesting violations"};
}

struct SweepCache {
  bool done = false;
  RateReport report;
};

const RateReport& sweep(const AcceptanceOptions& opt, SweepCache& cache) {
  if (!cache.done) {
    SweepOptions o;
    o.width = 2.0;
    o.height = 1.0;
    o.cells_per_epsilon = 8;
    o.workers = opt.workers;
    cache.report = run_sweep(pillar(1, 1.0, 8), Coefficients::from_cos(0.1), 1.0, {1.0 / 8, 1.0 / 16, 1.0 / 32}, o);
    cache.done = true;
  }
  return cache.report;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    if (!(v[i + 1] < v[i])) return false;
  return true;
}

std::string list(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : " ") + num(x, 3);
  return s;
}

Outcome criterion_homogenization(const AcceptanceOptions& opt, SweepCache& cache) {
  const RateReport& r = sweep(opt, cache);
  const bool energy = strictly_decreasing(r.energy_gap) && r.energy_slope.slope >= 0.7 && r.energy_slope.slope <= 1.3;
  const bool pass = energy && strictly_decreasing(r.l1_gap) && strictly_decreasing(r.hausdorff_gap) && r.L0eps_holds;
  return {pass, "cos theta_bar " + num(r.cos_theta_bar) + "; energy gap [" + list(r.energy_gap) + "] slope " +
                    num(r.energy_slope.slope, 3) + " +- " + num(r.energy_slope.slope_stderr, 2) +
                    " (in [0.7, 1.3]); l1 gap [" + list(r.l1_gap) + "]; Hausdorff above h0 [" +
                    list(r.hausdorff_gap) + "] with h0 [" + list(r.h0_used) +
                    "]; E(L_eps) <= E(L_0,eps) at every eps: " + (r.L0eps_holds ? "yes" : "no")};
}

Outcome criterion_perimeter(const AcceptanceOptions& opt, SweepCache& cache) {
  const RateReport& r = sweep(opt, cache);
  std::vector<double> ts;
  for (int i = 1; i <= 24; ++i) ts.push_back(0.05 * i);
  std::vector<PerimeterProfile> profiles;
  std::string r0s;
  for (const auto& p : r.points) {
    profiles.push_back(perimeter_profile(p.droplet, ts));
    r0s += (r0s.empty() ? "" : " ") + num(profiles.back().r0_epsilon, 3);
  }
  const PerimeterEnvelope env = perimeter_envelope(profiles);
  return {env.points_above_r0 > 0 && env.violations_above_r0 == 0,
          "r0 (R0=4, C1=1) [" + r0s + "]; " + std::to_string(env.points_above_r0) +
              " slab heights t >= r0, fitted C = " + num(env.C) + ", " + std::to_string(env.violations_above_r0) +
              " above-r0 violations of 2 C t; " + std::to_string(env.violations_below_r0) +
              " below-r0 exceedances (reported only)"};
}

struct Spec {
  int id;
  const char* name;
  double limit;
};

constexpr Spec kCriteria[] = {
    {1, "min-cut exactness", 60},           {2, "flat-surface identity", 10},
    {3, "Wenzel regime", 30},               {4, "Cassie-Baxter regime", 300},
    {5, "concavity and bounds", 300},       {6, "finite-size law", 120},
    {7, "additivity envelope", 60},         {8, "flat droplet", 180},
    {9, "parametric monotonicity", 120},    {10, "homogenization sweep", 1200},
    {11, "near-surface perimeter", 300},
};

}  // namespace

AcceptanceReport run_acceptance(const AcceptanceOptions& opt, std::ostream* log) {
  AcceptanceReport rep;
  SweepCache cache;
  for (const Spec& spec : kCriteria) {
    if (!opt.criteria.empty() && std::find(opt.criteria.begin(), opt.criteria.end(), spec.id) == opt.criteria.end())
      continue;
    CriterionResult res;
    res.id = spec.id;
    res.name = spec.name;
    res.limit_seconds = spec.limit;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      Outcome o;
      bool skipped = false;
      switch (spec.id) {
        case 1:
          if (opt.enum_free_cells > 20) {
            skipped = true;
            o.detail = "grids of " + std::to_string(opt.enum_free_cells) + " free cells exceed the enumeration limit 20";
          } else {
            o = criterion_mincut(opt);
          }
          break;
        case 2: o = criterion_flat(opt); break;
        case 3: o = criterion_wenzel(opt); break;
        case 4: o = criterion_cassie(opt); break;
        case 5: o = criterion_concavity(opt); break;
        case 6: o = criterion_finite_size(opt); break;
        case 7: o = criterion_additivity(opt); break;
        case 8: o = criterion_droplet(opt); break;
        case 9: o = criterion_parametric(opt); break;
        case 10: o = criterion_homogenization(opt, cache); break;
        case 11: o = criterion_perimeter(opt, cache); break;
      }
      res.status = skipped ? Status::Skip : (o.pass ? Status::Pass : Status::Fail);
      res.detail = o.detail;
    } catch (const InvariantBreach& e) {
      res.status = Status::Fail;
      res.detail = std::string("invariant breach: ") + e.what();
      rep.invariant_breach = true;
    } catch (const std::exception& e) {
      res.status = Status::Fail;
      res.detail = std::string("error: ") + e.what();
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (opt.enforce_time && res.status == Status::Pass && res.seconds > res.limit_seconds) {
      res.status = Status::Fail;
      res.detail += "; time limit exceeded";
    }
    if (log) *log << format_result(res) << std::endl;
    rep.results.push_back(std::move(res));
  }
  return rep;
}

}  // namespace roughdrop

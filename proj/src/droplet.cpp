#include "roughdrop/droplet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string_view>
#include <unordered_set>

#include "roughdrop/distance.hpp"
#include "roughdrop/errors.hpp"
#include "roughdrop/lattice_cut.hpp"

namespace roughdrop {

namespace {

std::size_t field_hash(const LabelField& f) {
  const auto& raw = f.raw();
  return std::hash<std::string_view>{}(std::string_view(reinterpret_cast<const char*>(raw.data()), raw.size()));
}

struct Run {
  std::shared_ptr<LabelField> field;
  double energy = 0.0;
  double seed_energy = 0.0;
  std::pair<double, double> lambda{0.0, 0.0};
  int steps = 0;
};

Run descend(const std::shared_ptr<const Domain>& dom, const Coefficients& coeffs, const LabelField& seed, long target,
            double vol, const DropletOptions& opt) {
  const Domain& d = *dom;
  const double h = d.h();
  const double cell = d.cell_volume();
  const double length = std::pow(vol, 1.0 / d.ambient_dim());
  Run run;
  LabelField cur = volume_matched(dom, coeffs, seed, target);
  double e_cur = energy(cur, coeffs).total_E;
  run.seed_energy = e_cur;
  double tau = opt.tau * h * length;
  const double tau_min = opt.tau_min * h * length;
  std::unordered_set<std::size_t> seen{field_hash(cur)};
  VolumeOptions vopt;
  vopt.tol_cells = opt.tol_cells;
  // push-relabel is markedly faster on the dense band graphs
  vopt.algorithm = opt.algorithm == Algorithm::Auto ? Algorithm::PushRelabel : opt.algorithm;

  const std::size_t n = d.cell_count();
  std::vector<std::uint8_t> liq(n), vap(n);
  std::vector<double> extra_l(n), extra_v(n);
  std::vector<Fix> fixed(n);
  while (run.steps < opt.max_steps && tau >= tau_min) {
    for (std::size_t c = 0; c < n; ++c) {
      liq[c] = cur.liquid(c);
      vap[c] = !d.solid(c) && !cur.liquid(c);
    }
    const auto to_vapor = distance_transform(vap, d.shape());
    const auto to_liquid = distance_transform(liq, d.shape());
    long fixed_liquid = 0;
    for (std::size_t c = 0; c < n; ++c) {
      const double dist = liq[c] ? to_vapor[c] : to_liquid[c];
      const double pen = std::max(0.0, std::min(dist, 1e6) - 0.5) * h * cell / tau;
      extra_l[c] = liq[c] ? 0.0 : pen;
      extra_v[c] = liq[c] ? pen : 0.0;
      fixed[c] = Fix::Free;
      if (opt.band > 0 && dist > opt.band && !d.solid(c)) {
        fixed[c] = liq[c] ? Fix::Liquid : Fix::Vapor;
        fixed_liquid += liq[c];
      }
    }
    LatticeCutOptions lo;
    lo.fixed = opt.band > 0 ? &fixed : nullptr;
    lo.extra_liquid = &extra_l;
    lo.extra_vapor = &extra_v;
    const LatticeCut cut = build_lattice_cut(d, coeffs, lo);
    const VolumeSolution vs = solve_volume_constrained(cut.problem, target - fixed_liquid, vopt);
    vopt.has_hint = true;
    vopt.reward_hint = vs.reward_lo;
    LabelField next = field_from_cut(cut, dom, vs.cut.liquid);
    if (next == cur) break;
    const double e_next = energy(next, coeffs).total_E;
    if (e_next < e_cur - 1e-12 * std::max(1.0, std::abs(e_cur))) {
      cur = std::move(next);
      e_cur = e_next;
      run.lambda = {vs.lambda_lo / cell, vs.lambda_hi / cell};
      ++run.steps;
      if (!seen.insert(field_hash(cur)).second) break;
    } else {
      tau *= 0.5;
    }
  }
  run.field = std::make_shared<LabelField>(std::move(cur));
  run.energy = e_cur;
  return run;
}

}  // namespace

LabelField volume_matched(std::shared_ptr<const Domain> dom, const Coefficients& coeffs, const LabelField& seed,
                          long target) {
  const LatticeCut cut = build_lattice_cut(*dom, coeffs);
  std::vector<std::uint8_t> x = cut_labels_from_field(cut, seed);
  adjust_volume_greedy(cut.problem, x, target);
  return field_from_cut(cut, dom, x);
}

std::vector<LabelField> cap_seeds(std::shared_ptr<const Domain> domain, const Coefficients& coeffs, double vol,
                                  double cos_center, int keep, double half_width, double step) {
  const Domain& d = *domain;
  const auto& e = d.extents();
  const std::array<double, 2> mid{0.5 * (e.lo[0] + e.hi[0]), 0.5 * (e.lo[1] + e.hi[1])};
  const long target = std::lround(vol / d.cell_volume());
  const LatticeCut cut = build_lattice_cut(d, coeffs);
  std::vector<std::pair<double, LabelField>> found;
  const int count = static_cast<int>(std::floor(2.0 * half_width / step + 1e-9));
  for (int s = 0; s <= count; ++s) {
    const double c = std::clamp(cos_center - half_width + s * step, -0.95, 0.95);
    LabelField raster(domain);
    try {
      raster = rasterize_cap(homogenized_cap(c, vol, d.ambient_dim(), mid), domain).field;
    } catch (const InvalidArgument&) {
      continue;  // this angle does not fit the box
    }
    std::vector<std::uint8_t> x = cut_labels_from_field(cut, raster);
    adjust_volume_greedy(cut.problem, x, target);
    LabelField f = field_from_cut(cut, domain, x);
    const double en = energy(f, coeffs).total_E;
    bool duplicate = false;
    for (const auto& [other_e, other] : found) duplicate |= other == f;
    if (!duplicate) found.emplace_back(en, std::move(f));
  }
  if (found.empty()) throw InvalidArgument("no cap seed fits the box");
  std::stable_sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<LabelField> out;
  for (int i = 0; i < keep && i < static_cast<int>(found.size()); ++i) out.push_back(found[i].second);
  return out;
}

double dry_energy(std::shared_ptr<const Domain> domain, const Coefficients& coeffs) {
  return energy(LabelField(domain), coeffs).total_E;
}

DropletResult minimize_droplet(std::shared_ptr<const Domain> domain, const Coefficients& coeffs, double vol,
                               const DropletOptions& opt) {
  coeffs.require_nondegenerate();
  const Domain& d = *domain;
  if (!(vol > 0.0)) throw InvalidArgument("droplet volume must be positive");
  const auto& e = d.extents();
  double lateral = e.hi[0] - e.lo[0];
  if (d.ambient_dim() == 3) lateral *= e.hi[1] - e.lo[1];
  const double M = d.surface().depth();
  if (M > 0.0 && !(d.epsilon() < vol / (2.0 * M * lateral)))
    throw Infeasible("feasibility gate violated: epsilon must be < Vol / (2 M |U|)");
  const double cell = d.cell_volume();
  const long target = std::lround(vol / cell);
  if (target <= 0 || target >= static_cast<long>(d.free_count())) throw Infeasible("droplet volume unreachable");
  long above = 0;
  for (int k = 0; k < d.nz(); ++k)
    if (d.z_center(k) > 0.0) above += static_cast<long>(d.nx()) * d.ny();
  if (above * cell < vol) throw Infeasible("box cannot hold the droplet above the surface");

  std::vector<LabelField> seeds = opt.seeds;
  if (seeds.empty()) seeds = cap_seeds(domain, coeffs, vol, coeffs.cos_theta_Y(), std::max(1, opt.scan_keep));
  DropletResult out;
  Run best;
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    if (&seeds[s].domain() != &d) throw InvalidArgument("seed lives on a different domain");
    Run r = descend(domain, coeffs, seeds[s], target, vol, opt);
    out.seed_energies.push_back(r.seed_energy);
    if (!best.field || r.energy < best.energy) {
      best = std::move(r);
      out.seed_used = static_cast<int>(s);
    }
  }
  out.labeling = best.field;
  out.target_cells = target;
  out.volume_real = out.labeling->volume();
  out.energy = energy(*out.labeling, coeffs);
  out.energy_excess = out.energy.total_E - dry_energy(domain, coeffs);
  out.lambda_bracket = best.lambda;
  out.steps = best.steps;
  for (int k = 0; k < d.nz(); ++k)
    for (int j = 0; j < d.ny(); ++j)
      for (int i = 0; i < d.nx(); ++i) {
        if (!out.labeling->liquid(d.index(i, j, k))) continue;
        if (k == d.nz() - 1) out.touches_lid = true;
        if (i == 0 || i == d.nx() - 1 || (d.ambient_dim() == 3 && (j == 0 || j == d.ny() - 1)))
          out.touches_walls = true;
      }
  if (out.touches_lid) throw Infeasible("droplet touches the lid: the height constraint is active");
  if (std::abs(static_cast<long>(out.labeling->liquid_count()) - target) > opt.tol_cells)
    throw InvariantBreach("droplet volume outside tolerance");
  return out;
}

double contact_width(const LabelField& f) {
  const Domain& d = f.domain();
  int lo = d.nx(), hi = -1;
  for (int k = 0; k < d.nz(); ++k)
    for (int j = 0; j < d.ny(); ++j)
      for (int i = 0; i < d.nx(); ++i) {
        if (!f.liquid(d.index(i, j, k))) continue;
        const bool below = k == 0 ? d.solid_at(i, j, -1) : d.solid(d.index(i, j, k - 1));
        if (!below) continue;
        lo = std::min(lo, i);
        hi = std::max(hi, i);
      }
  return hi < lo ? 0.0 : (hi - lo + 1) * d.h();
}

namespace {

std::vector<std::array<double, 3>> interface_points(const LabelField& f, double z_min, int smooth) {
  const Domain& d = f.domain();
  const bool three = d.ambient_dim() == 3;
  const int nx = d.nx(), ny = d.ny(), nz = d.nz();
  std::vector<std::array<double, 3>> pts;
  // Liquid fraction smoothed by a box filter of radius `smooth` over fluid
  // cells; the interface is the 1/2 level, interpolated between centers.
  std::vector<double> s(d.cell_count(), 0.0);
  if (smooth <= 0) {
    for (std::size_t c = 0; c < s.size(); ++c) s[c] = f.liquid(c) ? 1.0 : 0.0;
  } else {
    std::vector<double> val(d.cell_count()), wt(d.cell_count());
    for (std::size_t c = 0; c < s.size(); ++c) {
      val[c] = f.liquid(c) ? 1.0 : 0.0;
      wt[c] = d.solid(c) ? 0.0 : 1.0;
    }
    const std::array<int, 3> n{nx, ny, nz};
    const std::size_t stride[3] = {1, static_cast<std::size_t>(nx), static_cast<std::size_t>(nx) * ny};
    for (int axis = 0; axis < 3; ++axis) {
      if (n[axis] == 1) continue;
      std::vector<double> v2(val.size()), w2(wt.size());
      for (std::size_t c = 0; c < val.size(); ++c) {
        const auto co = d.coords(c);
        double a = 0, b = 0;
        for (int t = -smooth; t <= smooth; ++t) {
          const int u = co[axis] + t;
          if (u < 0 || u >= n[axis]) continue;
          const std::size_t q = c + static_cast<std::ptrdiff_t>(t) * static_cast<std::ptrdiff_t>(stride[axis]);
          a += val[q];
          b += wt[q];
        }
        v2[c] = a;
        w2[c] = b;
      }
      val.swap(v2);
      wt.swap(w2);
    }
    for (std::size_t c = 0; c < s.size(); ++c) s[c] = wt[c] > 0 ? val[c] / wt[c] : 0.0;
  }
  auto center = [&](std::size_t c) {
    const auto co = d.coords(c);
    return std::array<double, 3>{d.x_center(co[0]), three ? d.y_center(co[1]) : 0.0, d.z_center(co[2])};
  };
  for (std::size_t c = 0; c < s.size(); ++c) {
    if (d.solid(c)) continue;
    const auto co = d.coords(c);
    const int nb[3][3] = {{1, 0, 0}, {0, 0, 1}, {0, 1, 0}};
    for (int a = 0; a < (three ? 3 : 2); ++a) {
      const int i = co[0] + nb[a][0], j = co[1] + nb[a][2], k = co[2] + nb[a][1];
      if (i >= nx || j >= ny || k >= nz) continue;
      const std::size_t q = d.index(i, j, k);
      if (d.solid(q)) continue;
      const double s0 = s[c] - 0.5, s1 = s[q] - 0.5;
      if ((s0 < 0) == (s1 < 0)) continue;
      const double t = s0 / (s0 - s1);
      const auto p0 = center(c), p1 = center(q);
      const std::array<double, 3> p{p0[0] + t * (p1[0] - p0[0]), p0[1] + t * (p1[1] - p0[1]),
                                    p0[2] + t * (p1[2] - p0[2])};
      if (p[2] > z_min) pts.push_back(p);
    }
  }
  return pts;
}

}  // namespace

CircleFit fit_interface_circle(const LabelField& f, double z_min, int smooth) {
  const Domain& d = f.domain();
  const bool three = d.ambient_dim() == 3;
  const int m = three ? 4 : 3;  // unknowns: a_x, (a_y), a_z, c
  double A[4][5] = {};
  const auto pts = interface_points(f, z_min, smooth);
  CircleFit out;
  out.points = pts.size();
  if (pts.size() < static_cast<std::size_t>(m)) return out;
  for (const auto& p : pts) {
    double row[4];
    int r = 0;
    row[r++] = p[0];
    if (three) row[r++] = p[1];
    row[r++] = p[2];
    row[r++] = 1.0;
    const double rhs = -(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    for (int u = 0; u < m; ++u) {
      for (int v = 0; v < m; ++v) A[u][v] += row[u] * row[v];
      A[u][m] += row[u] * rhs;
    }
  }
  for (int col = 0; col < m; ++col) {
    int piv = col;
    for (int r = col + 1; r < m; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    for (int v = 0; v <= m; ++v) std::swap(A[col][v], A[piv][v]);
    if (std::abs(A[col][col]) < 1e-300) return out;
    for (int r = 0; r < m; ++r) {
      if (r == col) continue;
      const double f2 = A[r][col] / A[col][col];
      for (int v = col; v <= m; ++v) A[r][v] -= f2 * A[col][v];
    }
  }
  double sol[4];
  for (int u = 0; u < m; ++u) sol[u] = A[u][m] / A[u][u];
  int r = 0;
  out.center[0] = -0.5 * sol[r++];
  if (three) out.center[1] = -0.5 * sol[r++];
  out.center[2] = -0.5 * sol[r++];
  const double c = sol[r];
  const double cc = out.center[0] * out.center[0] + out.center[1] * out.center[1] + out.center[2] * out.center[2];
  out.radius = std::sqrt(std::max(0.0, cc - c));
  double ss = 0.0;
  for (const auto& p : pts) {
    const double dist = std::sqrt((p[0] - out.center[0]) * (p[0] - out.center[0]) +
                                  (p[1] - out.center[1]) * (p[1] - out.center[1]) +
                                  (p[2] - out.center[2]) * (p[2] - out.center[2]));
    ss += (dist - out.radius) * (dist - out.radius);
  }
  out.rms = std::sqrt(ss / pts.size());
  return out;
}

std::string droplet_csv_header() {
  return "epsilon,h,Vol,area_LV,area_SL,area_SV,total_E,energy_excess,lambda_lo,lambda_hi,contact_width";
}

std::string droplet_csv_row(double epsilon, double vol, const DropletResult& r, double width) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", epsilon,
                r.labeling->domain().h(), vol, r.energy.area_LV, r.energy.area_SL, r.energy.area_SV, r.energy.total_E,
                r.energy_excess, r.lambda_bracket.first, r.lambda_bracket.second, width);
  return buf;
}

}  // namespace roughdrop

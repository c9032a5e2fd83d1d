#include "roughdrop/homogenize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <tuple>

#include "roughdrop/distance.hpp"
#include "roughdrop/errors.hpp"
#include "roughdrop/parallel.hpp"
#include "roughdrop/surface.hpp"

namespace roughdrop {

namespace {

std::vector<std::uint8_t> liquid_mask(const LabelField& f) {
  std::vector<std::uint8_t> m(f.raw().size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = f.liquid(i) ? 1 : 0;
  return m;
}

int first_layer_at_or_above(const Domain& d, double z) {
  int k = 0;
  while (k < d.nz() && d.z_center(k) < z) ++k;
  return k;
}

// Cells with center above z = 0 that differ between the two fields.
long difference_above_zero(const LabelField& a, const LabelField& b) {
  const Domain& d = a.domain();
  long count = 0;
  for (int k = 0; k < d.nz(); ++k) {
    if (!(d.z_center(k) > 0.0)) continue;
    for (int j = 0; j < d.ny(); ++j)
      for (int i = 0; i < d.nx(); ++i) {
        const std::size_t idx = d.index(i, j, k);
        count += a.liquid(idx) != b.liquid(idx);
      }
  }
  return count;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double r0_scale(double epsilon, double vol, int ambient_dim, double R0, double C1) {
  const double x = std::pow(vol, -1.0 / ambient_dim) * epsilon;
  return R0 * epsilon * std::exp(C1 * std::sqrt(std::abs(std::log(x))));
}

double homogenization_error(double epsilon, double vol, int ambient_dim, double U_measure, double dU_measure,
                            double R0, double C1) {
  const double d = ambient_dim - 1;
  return (U_measure / vol + dU_measure / std::pow(vol, d / ambient_dim)) *
         r0_scale(epsilon, vol, ambient_dim, R0, C1);
}

double boundary_layer_h0(double epsilon, double vol, int ambient_dim, double err, double alpha, double C) {
  const double d = ambient_dim - 1;
  const double beta = 2.0 * d / ((d + 1.0) * (d + 2.0));
  return C * std::pow(vol, (1.0 - beta) / (d + 1.0)) * std::pow(epsilon, beta) *
         std::pow(err, (1.0 - beta) * alpha / (d + 1.0));
}

std::shared_ptr<const Domain> sweep_domain(const SurfaceSpec& surface, double epsilon, const SweepOptions& opt) {
  const int n = opt.cells_per_epsilon;
  if (n < 4) throw InvalidArgument("unresolved epsilon: need epsilon / h >= 4");
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  const double periods = opt.width / epsilon;
  if (std::abs(periods - std::round(periods)) > 1e-9 || periods < 1.0)
    throw InvalidArgument("unresolved epsilon: box width is not a whole number of periods");
  const double h = epsilon / n;
  Extents e;
  e.lo = {0.0, 0.0};
  e.hi = {opt.width, opt.width};
  e.z_lo = -(std::ceil(surface.depth() * n - 1e-9) + 2.0) * h;
  e.z_hi = std::ceil(opt.height / h - 1e-9) * h;
  DomainOptions dopt;
  dopt.stencil = opt.stencil;
  return Domain::build(surface, e, h, epsilon, dopt);
}

LabelField build_L0_epsilon(std::shared_ptr<const Domain> domain, const Coefficients& coeffs, const SphericalCap& cap,
                            const LabelField& cell_SL, const LabelField& cell_SV, long target_cells) {
  const Domain& d = *domain;
  const int n = d.cells_per_period();
  const bool three = d.ambient_dim() == 3;
  for (const LabelField* c : {&cell_SL, &cell_SV}) {
    const Domain& cd = c->domain();
    if (cd.nx() != n || cd.ny() != (three ? n : 1))
      throw InvalidArgument("cell minimizer does not span exactly one period");
  }
  LabelField out = rasterize_cap(cap, domain).field;
  const double a = cap.rho0 * std::sqrt(std::max(0.0, 1.0 - cap.cos_theta_bar * cap.cos_theta_bar));
  const double eps = d.epsilon();
  auto under_base = [&](int p, int q) {
    // All corners of the period inside the base disk (interval in 1D).
    const double x0 = d.extents().lo[0] + p * eps, x1 = x0 + eps;
    if (!three) return x0 >= cap.center_x[0] - a && x1 <= cap.center_x[0] + a;
    const double y0 = d.extents().lo[1] + q * eps, y1 = y0 + eps;
    for (double x : {x0, x1})
      for (double y : {y0, y1}) {
        const double dx = x - cap.center_x[0], dy = y - cap.center_x[1];
        if (dx * dx + dy * dy > a * a) return false;
      }
    return true;
  };
  for (int k = 0; k < d.nz(); ++k) {
    if (d.z_center(k) > 0.0) continue;
    for (int j = 0; j < d.ny(); ++j)
      for (int i = 0; i < d.nx(); ++i) {
        const std::size_t idx = d.index(i, j, k);
        const LabelField& src = under_base(i / n, j / n) ? cell_SL : cell_SV;
        const Domain& sd = src.domain();
        if (k >= sd.nz()) throw InvalidArgument("cell minimizer does not reach the droplet layers");
        const std::size_t sidx = sd.index(i % n, three ? j % n : 0, k);
        if (sd.solid(sidx) != d.solid(idx)) throw InvariantBreach("cell window and droplet box solids disagree");
        if (src.liquid(sidx)) out.set(idx, Label::Liquid);
      }
  }
  return volume_matched(domain, coeffs, out, target_cells);
}

TranslationFit best_translation(const LabelField& field, const SphericalCap& cap) {
  const Domain& d = field.domain();
  const bool three = d.ambient_dim() == 3;
  const double h = d.h();
  const int n = d.cells_per_period();
  double sx = 0.0, sy = 0.0;
  long count = 0;
  for (int k = 0; k < d.nz(); ++k) {
    if (!(d.z_center(k) > 0.0)) continue;
    for (int j = 0; j < d.ny(); ++j)
      for (int i = 0; i < d.nx(); ++i)
        if (field.liquid(d.index(i, j, k))) {
          sx += d.x_center(i);
          sy += d.y_center(j);
          ++count;
        }
  }
  const std::array<double, 2> centroid =
      count > 0 ? std::array<double, 2>{sx / count, three ? sy / count : 0.0} : cap.center_x;
  const auto dom = field.domain_ptr();

  using Key = std::tuple<long, int, int, int>;  // difference, |shift|, sx, sy
  Key best{std::numeric_limits<long>::max(), 0, 0, 0};
  std::shared_ptr<LabelField> best_field;
  auto evaluate = [&](int a, int b) {
    SphericalCap c = cap;
    c.center_x = {centroid[0] + a * h, centroid[1] + (three ? b * h : 0.0)};
    RasterizedCap r{LabelField(dom), false};
    try {
      r = rasterize_cap(c, dom);
    } catch (const InvalidArgument&) {
      return;
    }
    const Key key{difference_above_zero(field, r.field), std::abs(a) + std::abs(b), a, b};
    if (key < best) {
      best = key;
      best_field = std::make_shared<LabelField>(std::move(r.field));
    }
  };
  const int step = std::max(1, n / 4);
  const int ylim = three ? n : 0;
  for (int b = -ylim; b <= ylim; b += step)
    for (int a = -n; a <= n; a += step) evaluate(a, b);
  if (!best_field) throw InvalidArgument("cap exceeds the box at every shift");
  const int ca = std::get<2>(best), cb = std::get<3>(best);
  for (int b = cb - (three ? step - 1 : 0); b <= cb + (three ? step - 1 : 0); ++b)
    for (int a = ca - step + 1; a <= ca + step - 1; ++a)
      if (std::abs(a) <= n && std::abs(b) <= ylim) evaluate(a, b);
  TranslationFit out;
  out.l1 = static_cast<double>(std::get<0>(best)) * d.cell_volume();
  out.shift = {centroid[0] + std::get<2>(best) * h - cap.center_x[0],
               three ? centroid[1] + std::get<3>(best) * h - cap.center_x[1] : 0.0};
  out.cap_field = best_field;
  return out;
}

RateReport run_sweep(const SurfaceSpec& surface, const Coefficients& coeffs, double vol,
                     const std::vector<double>& epsilons, const SweepOptions& opt) {
  coeffs.require_nondegenerate();
  if (epsilons.empty()) throw InvalidArgument("epsilon list is empty");
  if (!(vol > 0.0)) throw InvalidArgument("droplet volume must be positive");
  for (double e : epsilons) sweep_domain(surface, e, opt);  // validates every point up front
  const int D = surface.dim() + 1;
  const int n = opt.cells_per_epsilon;

  RateReport rep;
  rep.vol = vol;
  CellOptions copt;
  copt.cells_per_period = n;
  copt.workers = opt.workers;
  copt.stencil = opt.stencil;
  if (opt.cos_theta_bar) {
    rep.cos_theta_bar = *opt.cos_theta_bar;
  } else {
    rep.cos_theta_bar = effective_angles(surface, coeffs, opt.r_list, copt).cos_theta_bar;
  }
  const auto cell_SL = periodic_minimizer(surface, coeffs, CellKind::SL, copt).field;
  const auto cell_SV = periodic_minimizer(surface, coeffs, CellKind::SV, copt).field;
  const std::array<double, 2> mid{0.5 * opt.width, 0.5 * opt.width};
  const SphericalCap cap = homogenized_cap(rep.cos_theta_bar, vol, D, mid);
  const double U = std::pow(opt.width, D - 1);
  const double dU = D == 2 ? 2.0 : 4.0 * opt.width;

  rep.points.resize(epsilons.size());
  parallel_for(epsilons.size(), opt.workers, [&](std::size_t s) {
    const double eps = epsilons[s];
    const auto dom = sweep_domain(surface, eps, opt);
    const Domain& d = *dom;
    EpsilonPoint& p = rep.points[s];
    p.epsilon = eps;
    p.h = d.h();
    const long target = std::lround(vol / d.cell_volume());
    const LabelField L0 = build_L0_epsilon(dom, coeffs, cap, *cell_SL, *cell_SV, target);
    DropletOptions dopt = opt.droplet;
    if (dopt.seeds.empty())
      dopt.seeds = cap_seeds(dom, coeffs, vol, rep.cos_theta_bar, std::max(1, dopt.scan_keep));
    dopt.seeds.push_back(L0);
    p.droplet = minimize_droplet(dom, coeffs, vol, dopt);
    const double dry = dry_energy(dom, coeffs);
    const double e_L0 = energy(L0, coeffs).total_E;
    p.E_droplet = p.droplet.energy_excess;
    p.E_L0eps = e_L0 - dry;
    p.L0eps_holds = p.droplet.energy.total_E <= e_L0;
    p.E_cap = cap_energy_excess(cap, coeffs.sigma_LV);
    p.energy_gap = std::abs(p.E_droplet - p.E_cap);

    const TranslationFit tf = best_translation(*p.droplet.labeling, cap);
    p.l1_gap = tf.l1 / vol;
    p.best_shift = tf.shift;
    p.cap_field = tf.cap_field;
    p.r0 = r0_scale(eps, vol, D, opt.r0_R0, opt.r0_C1);
    const double err = homogenization_error(eps, vol, D, U, dU, opt.r0_R0, opt.r0_C1);
    p.h0 = boundary_layer_h0(eps, vol, D, err, opt.alpha, opt.h0_constant);
    const int kmin = first_layer_at_or_above(d, p.h0);
    p.hausdorff_gap = hausdorff(liquid_mask(*p.droplet.labeling), liquid_mask(*tf.cap_field), d.shape(), kmin) *
                      d.h() / std::pow(vol, 1.0 / D);
  });

  for (const auto& p : rep.points) {
    rep.epsilons.push_back(p.epsilon);
    rep.energy_gap.push_back(p.energy_gap);
    rep.l1_gap.push_back(p.l1_gap);
    rep.hausdorff_gap.push_back(p.hausdorff_gap);
    rep.h0_used.push_back(p.h0);
    rep.L0eps_holds = rep.L0eps_holds && p.L0eps_holds;
  }
  auto positive = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0 && std::isfinite(x); });
  };
  rep.degenerate = surface.kind() == SurfaceKind::Flat || epsilons.size() < 2 || !positive(rep.energy_gap);
  if (epsilons.size() >= 2) {
    if (positive(rep.energy_gap)) rep.energy_slope = fit_loglog(rep.epsilons, rep.energy_gap);
    if (positive(rep.l1_gap)) rep.l1_slope = fit_loglog(rep.epsilons, rep.l1_gap);
    if (positive(rep.hausdorff_gap)) rep.hausdorff_slope = fit_loglog(rep.epsilons, rep.hausdorff_gap);
  }
  return rep;
}

PerimeterProfile perimeter_profile(const DropletResult& droplet, const std::vector<double>& t_list, double R0,
                                   double C1, double envelope_factor) {
  if (!droplet.labeling) throw InvalidArgument("droplet not solved");
  const LabelField& f = *droplet.labeling;
  const Domain& d = f.domain();
  PerimeterProfile out;
  out.envelope_factor = envelope_factor;
  out.r0_epsilon = r0_scale(d.epsilon(), droplet.volume_real, d.ambient_dim(), R0, C1);
  Coefficients unit;
  unit.sigma_LV = unit.sigma_SL = unit.sigma_SV = 1.0;
  for (double t : t_list) {
    const int klo = first_layer_at_or_above(d, 0.5 * t);
    int khi = klo;
    while (khi < d.nz() && d.z_center(khi) < 1.5 * t) ++khi;
    int lo = klo;
    if (lo < d.nz() && !(d.z_center(lo) > 0.5 * t)) ++lo;  // open slab
    double per = 0.0;
    if (t > 0.0 && lo < khi) per = energy(f, unit, Region{{0, 0, lo}, {d.nx(), d.ny(), khi}}).area_LV;
    out.t.push_back(t);
    out.per_slab.push_back(per);
  }
  std::vector<double> ta, pa;
  for (std::size_t i = 0; i < out.t.size(); ++i)
    if (out.t[i] >= out.r0_epsilon) {
      ta.push_back(out.t[i]);
      pa.push_back(out.per_slab[i]);
    }
  if (ta.empty()) return out;
  out.C_fit = fit_through_origin(ta, pa);
  for (std::size_t i = 0; i < out.t.size(); ++i) {
    if (!(out.per_slab[i] > envelope_factor * out.C_fit * out.t[i])) continue;
    (out.t[i] >= out.r0_epsilon ? out.violations_above_r0 : out.violations_below_r0).push_back(out.t[i]);
  }
  return out;
}

PerimeterEnvelope perimeter_envelope(const std::vector<PerimeterProfile>& profiles, double factor) {
  PerimeterEnvelope env;
  std::vector<double> ta, pa;
  for (const auto& p : profiles)
    for (std::size_t i = 0; i < p.t.size(); ++i)
      if (p.t[i] >= p.r0_epsilon) {
        ta.push_back(p.t[i]);
        pa.push_back(p.per_slab[i]);
      }
  env.points_above_r0 = static_cast<int>(ta.size());
  if (ta.empty()) return env;
  env.C = fit_through_origin(ta, pa);
  for (const auto& p : profiles)
    for (std::size_t i = 0; i < p.t.size(); ++i) {
      if (!(p.per_slab[i] > factor * env.C * p.t[i])) continue;
      (p.t[i] >= p.r0_epsilon ? env.violations_above_r0 : env.violations_below_r0) += 1;
    }
  return env;
}

LayerProbe boundary_layer_probe(const LabelField& droplet, const LabelField& cap_field,
                                const std::vector<double>& h_candidates) {
  const Domain& d = droplet.domain();
  if (&cap_field.domain() != &d && cap_field.domain().shape() != d.shape())
    throw InvalidArgument("probe fields live on different lattices");
  LayerProbe out;
  out.h = h_candidates;
  std::sort(out.h.begin(), out.h.end());
  const auto a = liquid_mask(droplet), b = liquid_mask(cap_field);
  out.plateau = std::numeric_limits<double>::infinity();
  for (double z : out.h) {
    const double dist = hausdorff(a, b, d.shape(), first_layer_at_or_above(d, z)) * d.h();
    out.distance.push_back(dist);
    out.plateau = std::min(out.plateau, dist);
  }
  if (out.h.empty()) return out;
  out.layer = out.h.back();
  for (std::size_t i = out.h.size(); i-- > 0;) {
    if (!(out.distance[i] <= out.plateau + d.h())) break;
    out.layer = out.h[i];
  }
  return out;
}

std::string rate_csv_header() {
  return "epsilon,h,E_droplet,E_cap,E_L0eps,L0eps_holds,energy_gap,l1_gap,hausdorff_gap,h0,r0,shift_x,shift_y";
}

std::string rate_csv_row(const EpsilonPoint& p) {
  return fmt(p.epsilon) + "," + fmt(p.h) + "," + fmt(p.E_droplet) + "," + fmt(p.E_cap) + "," + fmt(p.E_L0eps) + "," +
         (p.L0eps_holds ? "1" : "0") + "," + fmt(p.energy_gap) + "," + fmt(p.l1_gap) + "," + fmt(p.hausdorff_gap) +
         "," + fmt(p.h0) + "," + fmt(p.r0) + "," + fmt(p.best_shift[0]) + "," + fmt(p.best_shift[1]);
}

std::string perimeter_csv_header() { return "epsilon,t,per_slab,r0,above_r0,violation"; }

std::string perimeter_csv_row(double epsilon, const PerimeterProfile& p, std::size_t i) {
  const bool above = p.t[i] >= p.r0_epsilon;
  // No fitted coefficient (no t >= r0) means nothing to compare against.
  const bool violation = p.C_fit > 0.0 && p.per_slab[i] > p.envelope_factor * p.C_fit * p.t[i];
  return fmt(epsilon) + "," + fmt(p.t[i]) + "," + fmt(p.per_slab[i]) + "," + fmt(p.r0_epsilon) + "," +
         (above ? "1" : "0") + "," + (violation ? "1" : "0");
}

}  // namespace roughdrop

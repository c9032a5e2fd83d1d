#include <gtest/gtest.h>

#include <cmath>

#include "roughdrop/cellproblem.hpp"
#include "roughdrop/errors.hpp"
#include "roughdrop/fit.hpp"

using namespace roughdrop;

namespace {

SurfaceSpec pillar1d(double depth) { return make_pillar_surface(1, 0.5, depth, 8); }

// Exhaustive minimum of the window energy over the cells at or below t.
double enumerate_cell(const SurfaceSpec& s, const Coefficients& c, double r, CellKind kind, const CellOptions& o) {
  auto dom = cell_domain(s, r, o);
  std::vector<std::size_t> free_cells;
  LabelField base(dom);
  for (std::size_t idx = 0; idx < dom->cell_count(); ++idx) {
    if (dom->solid(idx)) continue;
    if (dom->z_center(dom->coords(idx)[2]) > o.t) {
      if (kind == CellKind::SL) base.set(idx, Label::Liquid);
    } else {
      free_cells.push_back(idx);
    }
  }
  EXPECT_LE(free_cells.size(), 20u);
  double best = 1e300;
  for (unsigned long m = 0; m < (1ul << free_cells.size()); ++m) {
    LabelField f = base;
    for (std::size_t b = 0; b < free_cells.size(); ++b)
      if (m >> b & 1) f.set(free_cells[b], Label::Liquid);
    best = std::min(best, energy(f, c).total_E);
  }
  return best;
}

}  // namespace

TEST(Fit, RecoversLine) {
  const std::vector<double> x{0.5, 0.25, 0.125};
  std::vector<double> y;
  for (double v : x) y.push_back(0.3 - 0.1 * v);
  const LineFit f = fit_line(x, y);
  EXPECT_NEAR(f.intercept, 0.3, 1e-14);
  EXPECT_NEAR(f.slope, -0.1, 1e-14);
  EXPECT_LT(f.max_residual, 1e-14);
  const LineFit g = fit_loglog({1, 2, 4}, {3, 6, 12});
  EXPECT_NEAR(g.slope, 1.0, 1e-12);
  EXPECT_THROW(fit_line({1, 1}, {2, 3}), InvalidArgument);
}

TEST(CellProblem, MatchesEnumerationOnSmallWindows) {
  CellOptions o;
  o.cells_per_period = 4;
  const auto s = make_pillar_surface(1, 0.5, 0.5, 4);
  for (double c : {-0.7, -0.2, 0.1, 0.6, 0.9}) {
    const auto co = Coefficients::from_cos(c);
    for (double r : {1.0, 2.0}) {
      EXPECT_NEAR(sigma_SL(s, co, r, o).total, enumerate_cell(s, co, r, CellKind::SL, o), 1e-9) << c;
      EXPECT_NEAR(sigma_SV(s, co, r, o).total, enumerate_cell(s, co, r, CellKind::SV, o), 1e-9) << c;
    }
  }
}

TEST(CellProblem, FlatSurfaceIsExact) {
  const auto flat = SurfaceSpec::flat(1);
  for (double c : {-0.8, -0.4, 0.0, 0.4, 0.8}) {
    const auto co = Coefficients::from_cos(c);
    const CellResult r = cell_result(flat, co, 4.0);
    EXPECT_NEAR(r.Sigma_SL, co.sigma_SL, 1e-12);
    EXPECT_NEAR(r.Sigma_SV, co.sigma_SV, 1e-12);
    EXPECT_NEAR(r.cos_Theta_Y, c, 1e-12);
  }
  const auto ea = effective_angles(flat, Coefficients::from_cos(0.4), {1, 2, 4});
  EXPECT_NEAR(ea.cos_theta_bar, 0.4, 1e-12);
  EXPECT_DOUBLE_EQ(ea.cos_theta_W, ea.cos_theta_CB);
  EXPECT_EQ(ea.regime, Regime::Wenzel);
}

TEST(CellProblem, TrivialMinimizerDichotomy) {
  const auto s = pillar1d(1.0);
  const auto phobic = Coefficients::from_cos(0.3);
  const CellPartial sv = sigma_SV(s, phobic, 2.0);
  EXPECT_EQ(sv.minimizer->liquid_count(), 0u);
  LabelField dry(sv.minimizer->domain_ptr());
  EXPECT_NEAR(sv.total, energy(dry, phobic).total_E, 1e-12);

  const auto philic = Coefficients::from_cos(-0.3);
  const CellPartial sl = sigma_SL(s, philic, 2.0);
  EXPECT_EQ(*sl.minimizer, wenzel_state(sl.minimizer->domain_ptr()));
}

TEST(CellProblem, WenzelRegime) {
  const auto s = pillar1d(1.0);
  for (double c : {0.05, 0.1}) {
    const auto co = Coefficients::from_cos(c);
    const auto ea = effective_angles(s, co, {2, 4, 8});
    EXPECT_NEAR(ea.rho, 3.0, 1e-12);
    EXPECT_NEAR(ea.cos_theta_bar, 3.0 * c, 1e-9);
    EXPECT_NEAR(ea.sigma_bar_SL - ea.sigma_bar_SV, co.sigma_LV * c * 3.0, 1e-9);
    EXPECT_EQ(ea.regime, Regime::Wenzel);
    EXPECT_LE(std::abs(c), ea.wenzel_threshold);
    EXPECT_LE(std::abs(c), ea.wenzel_cb_crossover);
    for (const auto& w : ea.windows) {
      const LabelField tmpl = wenzel_state(w.minimizer_SL->domain_ptr());
      EXPECT_EQ(*w.minimizer_SL, tmpl);
      EXPECT_NEAR(w.Sigma_SL, energy(tmpl, co).total_E / w.window_size_r, 1e-9);
    }
  }
}

TEST(CellProblem, CassieBaxterRegimeWithinDiscretization) {
  const auto s = pillar1d(2.0);
  const auto co = Coefficients::from_cos(0.95);
  const auto ea = effective_angles(s, co, {2, 4, 8});
  EXPECT_NEAR(ea.cos_theta_CB, 0.975, 1e-12);
  EXPECT_NEAR(ea.cos_theta_bar, 0.975, 0.02);
  EXPECT_EQ(ea.regime, Regime::CassieBaxter);
  for (const auto& w : ea.windows) {
    // The template bounds the minimum from above.
    const LabelField tmpl = cassie_baxter_state(w.minimizer_SL->domain_ptr());
    EXPECT_LE(w.Sigma_SL, energy(tmpl, co).total_E / w.window_size_r + 1e-12);
    // The minimizer keeps every groove cell below the first row dry.
    const Domain& d = w.minimizer_SL->domain();
    for (int k = 0; k < d.nz(); ++k)
      for (int i = 0; i < d.nx(); ++i)
        if (d.z_center(k) < -d.h()) {
          EXPECT_NE(w.minimizer_SL->at(i, 0, k), Label::Liquid);
        }
  }
}

TEST(CellProblem, LiquidVaporSwapSymmetry) {
  const auto s = pillar1d(2.0);
  for (double c : {0.2, 0.95}) {
    const auto a = effective_angles(s, Coefficients::from_cos(c), {2, 4, 8});
    const auto b = effective_angles(s, Coefficients::from_cos(-c), {2, 4, 8});
    EXPECT_NEAR(a.cos_theta_bar, -b.cos_theta_bar, 1e-9);
  }
  const auto ea = effective_angles(s, Coefficients::from_cos(-0.95), {2, 4, 8});
  EXPECT_NEAR(ea.cos_theta_CB, -0.975, 1e-12);
  EXPECT_EQ(ea.regime, Regime::CassieBaxter);
  // Grooves fill below a vapor layer.
  const auto& sv = *ea.windows[0].minimizer_SV;
  const Domain& d = sv.domain();
  for (int k = 0; k < d.nz(); ++k)
    for (int i = 0; i < d.nx(); ++i)
      if (d.z_center(k) < -d.h() && !d.solid(d.index(i, 0, k))) {
        EXPECT_EQ(sv.at(i, 0, k), Label::Liquid);
      }
}

TEST(CellProblem, BoundsAndGap) {
  const auto s = pillar1d(1.0);
  for (double c : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const auto ea = effective_angles(s, Coefficients::from_cos(c), {2, 4, 8});
    EXPECT_LE(ea.cos_theta_bar, std::min(ea.cos_theta_W, ea.cos_theta_CB) + 1e-9);
    for (const auto& w : ea.windows) EXPECT_GE(1.0 - std::abs(w.cos_Theta_Y), 0.01);
  }
}

TEST(CellProblem, SuperAndAlmostAdditivity) {
  for (int dim : {1, 2}) {
    const auto s = dim == 1 ? pillar1d(1.0) : make_pillar_surface(2, 0.5, 0.5, 4);
    CellOptions o;
    o.cells_per_period = dim == 1 ? 8 : 4;
    for (double c : {-0.6, 0.2, 0.8}) {
      const auto co = Coefficients::from_cos(c);
      const double M = s.depth();
      for (double r : {1.0, 2.0}) {
        const double small = sigma_SL(s, co, r, o).total;
        const double big = sigma_SL(s, co, 2 * r, o).total;
        const double parts = std::pow(2.0, dim);
        EXPECT_GE(big, parts * small - 1e-9) << dim << " " << c;
        const double lateral = co.sigma_LV * 2.0 * dim * M * parts * std::pow(r, dim - 1);
        EXPECT_LE(big, parts * small + lateral + 1e-9) << dim << " " << c;
      }
    }
  }
}

TEST(CellProblem, ConcavitySweep) {
  const auto flat = SurfaceSpec::flat(1);
  const auto fr = concavity_sweep(flat, {-0.6, -0.3, 0.0, 0.3, 0.6}, {1, 2, 4});
  for (const auto& p : fr.points) {
    EXPECT_NEAR(p.cos_theta_bar, p.cos_theta_Y, 1e-12);
    EXPECT_NEAR(p.second_difference, 0.0, 1e-12);
  }
  EXPECT_TRUE(fr.symmetric);

  std::vector<double> grid;
  for (int i = -4; i <= 4; ++i) grid.push_back(0.2 * i);
  CellOptions o;
  o.workers = 4;
  const auto rep = concavity_sweep(pillar1d(1.0), grid, {2, 4, 8}, o);
  EXPECT_TRUE(rep.concave);
  EXPECT_TRUE(rep.slopes_bounded);
  EXPECT_TRUE(rep.bounded);
  EXPECT_TRUE(rep.symmetric);
  EXPECT_TRUE(rep.nondegenerate);
  EXPECT_LE(rep.max_secant_slope, 3.0 + 1e-9);
  EXPECT_GE(rep.min_secant_slope, 0.5 - 1e-9);
}

TEST(CellProblem, PeriodicMinimizer) {
  const auto co = Coefficients::from_cos(0.1);
  const auto s = pillar1d(1.0);
  const auto ea = effective_angles(s, co, {2, 4, 8});
  const auto sl = periodic_minimizer(s, co, CellKind::SL, {}, ea.sigma_bar_SL, 1e-9);
  EXPECT_TRUE(sl.checked);
  EXPECT_TRUE(sl.matches);
  EXPECT_EQ(*sl.field, wenzel_state(sl.field->domain_ptr()));
  const auto sv = periodic_minimizer(s, co, CellKind::SV, {}, ea.sigma_bar_SV, 1e-9);
  EXPECT_EQ(sv.field->liquid_count(), 0u);
  EXPECT_TRUE(sv.matches);

  const auto s2 = pillar1d(2.0);
  const auto c2 = Coefficients::from_cos(0.95);
  const auto e2 = effective_angles(s2, c2, {2, 4, 8});
  EXPECT_NEAR(periodic_minimizer(s2, c2, CellKind::SL).energy_per_period, e2.sigma_bar_SL, 1e-9);
}

TEST(CellProblem, ParallelMatchesSerial) {
  const auto s = pillar1d(1.0);
  CellOptions par;
  par.workers = 3;
  const auto a = effective_angles(s, Coefficients::from_cos(0.25), {2, 4, 8});
  const auto b = effective_angles(s, Coefficients::from_cos(0.25), {2, 4, 8}, par);
  EXPECT_EQ(a.cos_theta_bar, b.cos_theta_bar);
  for (std::size_t i = 0; i < a.windows.size(); ++i) EXPECT_EQ(*a.windows[i].minimizer_SL, *b.windows[i].minimizer_SL);
}

TEST(CellProblem, RejectsBadInput) {
  const auto s = pillar1d(1.0);
  EXPECT_THROW(sigma_SL(s, Coefficients::from_cos(0.2), 1.5), InvalidArgument);
  EXPECT_THROW(sigma_SL(s, Coefficients::from_cos(1.0), 1.0), InvalidArgument);
  EXPECT_THROW(effective_angles(s, Coefficients::from_cos(0.2), {2, 4}), InvalidArgument);
  EXPECT_THROW(effective_angles(s, Coefficients::from_cos(0.2), {4, 2, 8}), InvalidArgument);
  CellOptions bad;
  bad.stencil = std::make_shared<PerimeterStencil>(PerimeterStencil::standard(2).corrupted());
  EXPECT_THROW(sigma_SL(s, Coefficients::from_cos(0.2), 1.0, bad), InvariantBreach);
}

TEST(CellProblem, CsvRow) {
  CellResult r;
  r.window_size_r = 2;
  r.Sigma_SL = 1.5;
  r.Sigma_SV = 1.0;
  r.cos_Theta_Y = 0.5;
  EXPECT_EQ(cell_csv_header(), "surface_id,cos_theta_Y,r,Sigma_SL,Sigma_SV,cos_Theta_Y");
  EXPECT_EQ(cell_csv_row("p", 0.5, r), "p,0.5,2,1.5,1,0.5");
}

TEST(CellProblem, CoveringThresholdIsNotAGuaranteeOnVerticalWalls) {
  // f = 0.5, rho = 3: Wenzel and Cassie-Baxter cross at 0.2, below 1/3.
  const auto s = pillar1d(1.0);
  const auto ea = effective_angles(s, Coefficients::from_cos(0.24), {2, 4, 8});
  EXPECT_NEAR(ea.wenzel_cb_crossover, 0.2, 1e-12);
  EXPECT_LT(0.24, ea.wenzel_threshold);
  EXPECT_LT(ea.cos_theta_bar, std::min(ea.cos_theta_W, ea.cos_theta_CB));
  EXPECT_NE(ea.regime, Regime::Wenzel);
}

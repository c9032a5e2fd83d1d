#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "roughdrop/errors.hpp"
#include "roughdrop/lattice_cut.hpp"
#include "roughdrop/maxflow.hpp"

using namespace roughdrop;

namespace {

std::shared_ptr<const Domain> column_domain() {
  // Three fluid cells above a flat solid, plain 4-neighbor perimeter.
  auto st = std::make_shared<const PerimeterStencil>(PerimeterStencil::from_orbits(2, {{{0, 1, 0}, 1.0}}));
  Extents e;
  e.lo = {0, 0};
  e.hi = {1, 1};
  e.z_lo = -1;
  e.z_hi = 3;
  DomainOptions o;
  o.lateral = {Boundary::Free, Boundary::Free};
  o.lid = Lid::Open;
  o.stencil = st;
  return Domain::build(SurfaceSpec::flat(1), e, 1.0, 1.0, o);
}

void check_column(const Coefficients& c, std::size_t expect_max, std::size_t expect_min, double expect_energy) {
  auto d = column_domain();
  std::vector<Fix> fixed(d->cell_count(), Fix::Free);
  fixed[d->index(0, 0, 3)] = Fix::Liquid;
  auto cut = build_lattice_cut(*d, c, {&fixed});
  auto sol = solve(cut.problem);
  auto field = field_from_cut(cut, d, sol.liquid);
  EXPECT_EQ(field.liquid_count(), expect_max);
  EXPECT_EQ(solve(cut.problem, SideChoice::SourceSide).liquid_count() + 1, expect_min);
  EXPECT_NEAR(sol.flow_value(), expect_energy, 1e-12);
  EXPECT_NEAR(energy(field, c).total_E, expect_energy, 1e-12);
  // All 2^3 labelings of the free cells as the oracle.
  LabelField best(d);
  const double m = oracle::brute_force_lattice_min(
      d, [&](const LabelField& f) { return f.liquid(d->index(0, 0, 3)) ? energy(f, c).total_E : 1e9; }, &best);
  EXPECT_NEAR(m, expect_energy, 1e-12);
  EXPECT_NEAR(energy(best, c).total_E, energy(field, c).total_E, 1e-12);
}

}  // namespace

TEST(MaxFlow, ColumnWithHardLiquidTop) {
  // |cos| < 1: wetting the solid (sigma_SL) beats sigma_SV + sigma_LV, so
  // the column fills even though the solid is hydrophobic.
  const Coefficients c = Coefficients::from_cos(0.5);
  check_column(c, 3, 3, c.sigma_SL);
  // Past the Young range (cos > 1) the minimal minimizer dewets below the top
  // cell; a two-cell drop ties with it and the maximal one keeps it.
  const Coefficients dry{1.0, 2.5, 1.0};
  check_column(dry, 2, 1, dry.sigma_SV + dry.sigma_LV);
}

TEST(MaxFlow, ZeroUnaryPicksSide) {
  CutProblem p(6);
  for (int i = 0; i + 1 < 6; ++i) p.add_pairwise(i, i + 1, 3, 3);
  for (Algorithm a : {Algorithm::AugmentingPath, Algorithm::PushRelabel}) {
    auto sink = solve(p, SideChoice::SinkSide, a);
    auto source = solve(p, SideChoice::SourceSide, a);
    EXPECT_EQ(sink.liquid_count(), 6u);
    EXPECT_EQ(source.liquid_count(), 0u);
    EXPECT_EQ(sink.value, 0);
  }
}

TEST(MaxFlow, RandomFourByFiveMatchesEnumeration) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 5; ++trial) {
    auto p = oracle::random_grid(rng, 4, 5, false);
    auto ref = oracle::enumerate(p);
    for (Algorithm a : {Algorithm::AugmentingPath, Algorithm::PushRelabel}) {
      auto sink = solve(p, SideChoice::SinkSide, a);
      auto source = solve(p, SideChoice::SourceSide, a);
      EXPECT_EQ(sink.value, ref.best);
      EXPECT_EQ(source.value, ref.best);
      EXPECT_EQ(sink.liquid, ref.union_of_minimizers);
      EXPECT_EQ(source.liquid, ref.intersection_of_minimizers);
    }
  }
}

TEST(MaxFlow, SmallGridsWithHardLabels) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> dim(1, 4);
  for (int trial = 0; trial < 300; ++trial) {
    const int nx = dim(rng), ny = dim(rng);
    auto p = oracle::random_grid(rng, nx, ny, true);
    auto ref = oracle::enumerate(p);
    ASSERT_TRUE(ref.feasible);
    for (Algorithm a : {Algorithm::AugmentingPath, Algorithm::PushRelabel}) {
      auto sink = solve(p, SideChoice::SinkSide, a);
      auto source = solve(p, SideChoice::SourceSide, a);
      ASSERT_EQ(sink.value, ref.best);
      ASSERT_EQ(sink.liquid, ref.union_of_minimizers);
      ASSERT_EQ(source.liquid, ref.intersection_of_minimizers);
    }
  }
}

TEST(MaxFlow, SolversAgreeOnLargeGrids) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 5; ++trial) {
    auto p = oracle::random_grid(rng, 60, 50, true);
    auto a = solve(p, SideChoice::SinkSide, Algorithm::AugmentingPath);
    auto b = solve(p, SideChoice::SinkSide, Algorithm::PushRelabel);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.liquid, b.liquid);
    auto c = solve(p, SideChoice::SourceSide, Algorithm::AugmentingPath);
    auto d = solve(p, SideChoice::SourceSide, Algorithm::PushRelabel);
    EXPECT_EQ(c.liquid, d.liquid);
  }
}

TEST(MaxFlow, DimacsDumpAgreesWithReferenceFlow) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    auto p = oracle::random_grid(rng, 5, 4, true);
    std::stringstream ss;
    p.write_dimacs(ss);
    auto sol = solve(p);
    Capacity base = p.constant();
    for (int i = 0; i < p.node_count(); ++i) {
      if (p.hard(i) == Hard::Liquid) base += p.cost_liquid(i);
      else if (p.hard(i) == Hard::Vapor) base += p.cost_vapor(i);
      else base += std::min(p.cost_liquid(i), p.cost_vapor(i));
    }
    EXPECT_EQ(oracle::dimacs_maxflow(ss.str()) + base, sol.value);
  }
}

TEST(MaxFlow, RejectsNonSubmodularPairs) {
  CutProblem p(2);
  EXPECT_THROW(p.add_pairwise(0, 1, -1, 2), InvariantBreach);
  EXPECT_THROW(p.add_pairwise(0, 0, 1, 2), InvalidArgument);
}

TEST(MaxFlow, Deterministic) {
  std::mt19937_64 rng(17);
  auto p = oracle::random_grid(rng, 40, 40, true);
  auto a = solve(p), b = solve(p);
  EXPECT_EQ(a.liquid, b.liquid);
  EXPECT_EQ(a.flow, b.flow);
}

TEST(LatticeCut, CutEnergyMatchesLatticeEnergy) {
  auto surf = make_pillar_surface(1, 0.5, 1.0, 4);
  Extents e;
  e.lo = {0, 0};
  e.hi = {2, 1};
  e.z_lo = -1.25;
  e.z_hi = 1.0;
  std::mt19937_64 rng(8);
  for (Boundary b : {Boundary::Walled, Boundary::Free, Boundary::Periodic}) {
    DomainOptions o;
    o.lateral = {b, b};
    auto d = Domain::build(surf, e, 0.25, 1.0, o);
    const Coefficients c{1.0, 1.3, 0.8};
    std::vector<Fix> fixed(d->cell_count(), Fix::Free);
    std::uniform_int_distribution<int> pick(0, 5);
    for (std::size_t i = 0; i < fixed.size(); ++i) {
      if (d->solid(i)) continue;
      int v = pick(rng);
      if (v == 0) fixed[i] = Fix::Liquid;
      if (v == 1) fixed[i] = Fix::Vapor;
    }
    auto cut = build_lattice_cut(*d, c, {&fixed});
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<std::uint8_t> x(cut.problem.node_count());
      for (auto& v : x) v = pick(rng) < 3;
      auto f = field_from_cut(cut, d, x);
      const double lattice = energy(f, c).total_E;
      const double fixed_point = static_cast<double>(cut.problem.evaluate(x)) / cut.scale;
      EXPECT_NEAR(lattice, fixed_point, 1e-9 * std::max(1.0, lattice));
      EXPECT_EQ(cut_labels_from_field(cut, f), x);
    }
    // Solver optimum equals the brute-force lattice optimum on a reduced box.
  }
}

TEST(LatticeCut, MinimumMatchesBruteForceOnSmallLattice) {
  auto surf = make_pillar_surface(1, 0.5, 1.0, 4);
  Extents e;
  e.lo = {0, 0};
  e.hi = {1, 1};
  e.z_lo = -1.25;
  e.z_hi = 0.5;
  for (Boundary b : {Boundary::Walled, Boundary::Free, Boundary::Periodic}) {
    DomainOptions o;
    o.lateral = {b, b};
    auto d = Domain::build(surf, e, 0.25, 1.0, o);
    for (double cth : {-0.7, -0.2, 0.15, 0.6}) {
      const Coefficients c = Coefficients::from_cos(cth);
      auto cut = build_lattice_cut(*d, c);
      auto sol = solve(cut.problem);
      LabelField best(d);
      const double ref =
          oracle::brute_force_lattice_min(d, [&](const LabelField& f) { return energy(f, c).total_E; }, &best);
      const auto f = field_from_cut(cut, d, sol.liquid);
      EXPECT_NEAR(energy(f, c).total_E, ref, 1e-9);
      EXPECT_NEAR(sol.flow_value(), ref, 1e-9);
    }
  }
}

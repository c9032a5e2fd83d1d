#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "roughdrop/errors.hpp"
#include "roughdrop/lattice_cut.hpp"
#include "roughdrop/maxflow.hpp"

using namespace roughdrop;

namespace {

std::shared_ptr<const Domain> rough_box(std::mt19937_64& rng, int periods) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> h(4);
  for (auto& v : h) v = -0.25 * std::floor(u(rng) * 5.0);
  h[0] = 0.0;
  h[2] = -1.0;
  auto surf = SurfaceSpec::sampled(1, 4, 1.0, h);
  Extents e;
  e.lo = {0, 0};
  e.hi = {double(periods), 1};
  e.z_lo = -1.25;
  e.z_hi = 1.5;
  return Domain::build(surf, e, 0.25, 1.0);
}

}  // namespace

TEST(Parametric, VolumeMonotoneAndNested) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    auto d = rough_box(rng, 3);
    std::uniform_real_distribution<double> cdist(-0.9, 0.9);
    auto cut = build_lattice_cut(*d, Coefficients::from_cos(cdist(rng)));
    std::vector<std::uint8_t> prev;
    std::size_t prev_vol = 0;
    const double unit = cut.scale * d->face_area();
    for (int k = -40; k <= 40; ++k) {
      const Capacity reward = static_cast<Capacity>(k * 0.1 * unit);
      auto s = solve(cut.problem, SideChoice::SinkSide, Algorithm::AugmentingPath, reward);
      if (!prev.empty()) {
        EXPECT_GE(s.liquid_count(), prev_vol);
        for (std::size_t i = 0; i < prev.size(); ++i)
          if (prev[i]) ASSERT_TRUE(s.liquid[i]);
      }
      prev = s.liquid;
      prev_vol = s.liquid_count();
    }
  }
}

TEST(Parametric, HardLiquidOnlyAtZeroRewardForHydrophobic) {
  // Zero reward, hydrophobic, a nucleus-free box: the empty drop wins.
  std::mt19937_64 rng(1);
  auto d = rough_box(rng, 2);
  auto cut = build_lattice_cut(*d, Coefficients::from_cos(0.4));
  auto s = solve(cut.problem, SideChoice::SinkSide);
  EXPECT_EQ(s.liquid_count(), 0u);
}

TEST(Parametric, FullBoxTarget) {
  std::mt19937_64 rng(2);
  auto d = rough_box(rng, 2);
  auto cut = build_lattice_cut(*d, Coefficients::from_cos(0.3));
  auto v = solve_volume_constrained(cut.problem, cut.problem.node_count());
  EXPECT_EQ(static_cast<int>(v.cut.liquid_count()), cut.problem.node_count());
  EXPECT_THROW(solve_volume_constrained(cut.problem, cut.problem.node_count() + 1), Infeasible);
}

TEST(Parametric, ExactWhenNoPlateau) {
  // When a reward hits the target the result is a constrained global minimum.
  std::mt19937_64 rng(77);
  int exact_hits = 0;
  for (int trial = 0; trial < 60; ++trial) {
    auto p = oracle::random_grid(rng, 4, 4, false);
    for (int target : {3, 7, 11}) {
      auto v = solve_volume_constrained(p, target);
      ASSERT_EQ(static_cast<int>(v.cut.liquid_count()), target);
      auto ref = oracle::enumerate_with_count(p, target);
      EXPECT_GE(v.cut.value, ref.best);
      EXPECT_EQ(v.cut.value, p.evaluate(v.cut.liquid));
      if (v.toggled == 0) {
        EXPECT_EQ(v.cut.value, ref.best);
        ++exact_hits;
      }
    }
  }
  EXPECT_GT(exact_hits, 0);
}

TEST(Parametric, ToleranceIsHonored) {
  std::mt19937_64 rng(78);
  for (int trial = 0; trial < 20; ++trial) {
    auto p = oracle::random_grid(rng, 6, 6, true);
    int lo = 0, hi = 0;
    for (int i = 0; i < p.node_count(); ++i) {
      lo += p.hard(i) == Hard::Liquid;
      hi += p.hard(i) != Hard::Vapor;
    }
    for (int tol : {0, 2}) {
      const int target = (lo + hi) / 2;
      auto v = solve_volume_constrained(p, target, {tol});
      EXPECT_LE(std::abs(static_cast<long>(v.cut.liquid_count()) - target), tol);
      EXPECT_TRUE(p.satisfies_hard(v.cut.liquid));
      EXPECT_LE(v.lambda_lo, v.lambda_hi);
    }
  }
}

TEST(Parametric, HintedSearchAgreesWithColdSearch) {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 10; ++trial) {
    auto p = oracle::random_grid(rng, 8, 8, false);
    auto cold = solve_volume_constrained(p, 30);
    VolumeOptions o;
    o.has_hint = true;
    o.reward_hint = cold.reward_lo + 5;
    auto warm = solve_volume_constrained(p, 30, o);
    EXPECT_EQ(warm.cut.liquid_count(), cold.cut.liquid_count());
    if (cold.toggled == 0 && warm.toggled == 0) EXPECT_EQ(warm.cut.value, cold.cut.value);
  }
}

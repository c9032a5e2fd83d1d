#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace roughdrop {

using Capacity = std::int64_t;

enum class SideChoice { SourceSide, SinkSide };
enum class Algorithm { Auto, AugmentingPath, PushRelabel };
enum class Hard : std::uint8_t { None, Vapor, Liquid };

// Binary energy E(x) = constant + sum_i u_i(x_i) + sum_(p,q) w(x_p, x_q) over
// x in {Vapor, Liquid}^n, in 64-bit fixed point (one unit = 1/scale energy).
// Liquid nodes end on the sink side of the cut.
class CutProblem {
 public:
  struct Edge {
    std::int32_t p;
    std::int32_t q;
    Capacity vl;  // paid when p is Vapor and q is Liquid
    Capacity lv;  // paid when p is Liquid and q is Vapor
  };

  explicit CutProblem(int nodes = 0);

  int add_node();
  int node_count() const { return static_cast<int>(cost_vapor_.size()); }

  void add_unary(int node, Capacity cost_vapor, Capacity cost_liquid);
  void add_pairwise(int p, int q, Capacity vl, Capacity lv);
  void set_hard(int node, Hard h);
  void add_constant(Capacity c) { constant_ += c; }
  void set_scale(double scale) { scale_ = scale; }
  // Ambient dimension of the lattice behind the problem; steers Algorithm::Auto.
  void set_grid_dim(int dim) { grid_dim_ = dim; }

  Capacity cost_vapor(int i) const { return cost_vapor_[i]; }
  Capacity cost_liquid(int i) const { return cost_liquid_[i]; }
  Hard hard(int i) const { return hard_[i]; }
  const std::vector<Edge>& edges() const { return edges_; }
  Capacity constant() const { return constant_; }
  double scale() const { return scale_; }
  int grid_dim() const { return grid_dim_; }

  // Energy of a labeling (1 = Liquid), ignoring hard constraints.
  Capacity evaluate(const std::vector<std::uint8_t>& liquid) const;
  bool satisfies_hard(const std::vector<std::uint8_t>& liquid) const;

  // DIMACS max-flow text; node 1 is the source, 2 the sink, cells from 3.
  void write_dimacs(std::ostream& out) const;

 private:
  std::vector<Capacity> cost_vapor_;
  std::vector<Capacity> cost_liquid_;
  std::vector<Hard> hard_;
  std::vector<Edge> edges_;
  Capacity constant_ = 0;
  double scale_ = 1.0;
  int grid_dim_ = 0;
};

struct CutSolution {
  std::vector<std::uint8_t> liquid;  // 1 = Liquid
  Capacity value = 0;                // minimum energy in fixed point, constant included
  Capacity flow = 0;                 // max-flow value of the normalized network
  double scale = 1.0;
  SideChoice side = SideChoice::SinkSide;
  Algorithm algorithm = Algorithm::AugmentingPath;

  double flow_value() const { return static_cast<double>(value) / scale; }
  std::size_t liquid_count() const;
};

// Global minimizer. SinkSide returns the maximal minimizer (union of all),
// SourceSide the minimal one. reward is added per Liquid node as -reward.
CutSolution solve(const CutProblem& problem, SideChoice side = SideChoice::SinkSide,
                  Algorithm algorithm = Algorithm::Auto, Capacity reward = 0);

struct VolumeOptions {
  // Accepted distance (in nodes) between the returned and the target volume.
  int tol_cells = 0;
  Algorithm algorithm = Algorithm::Auto;
  // Optional starting reward (fixed point) near the expected multiplier.
  bool has_hint = false;
  Capacity reward_hint = 0;
};

struct VolumeSolution {
  CutSolution cut;      // value is the true energy (no reward term)
  Capacity reward_lo = 0;  // bracketing per-node rewards, fixed point
  Capacity reward_hi = 0;
  double lambda_lo = 0.0;  // same bracket in energy units per node
  double lambda_hi = 0.0;
  int toggled = 0;  // nodes changed by the plateau fix-up
  int probes = 0;   // max-flow solves used
};

// Minimizes E(x) subject to #Liquid(x) = target by bisecting a uniform
// per-node liquid reward. The volume of the SinkSide minimizer is
// nondecreasing and nested in the reward; both are asserted on every probe.
// Plateaus are closed by greedy toggles of lowest marginal cost next to the
// interface, from whichever bracket end gives the lower energy.
VolumeSolution solve_volume_constrained(const CutProblem& problem, long target, const VolumeOptions& options = {});

}  // namespace roughdrop

namespace roughdrop {

// Brings a labeling to exactly `target` Liquid nodes by repeatedly toggling
// the cheapest node adjacent to the opposite phase. Returns the toggle count.
int adjust_volume_greedy(const CutProblem& problem, std::vector<std::uint8_t>& liquid, long target);

}  // namespace roughdrop

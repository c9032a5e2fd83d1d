#include <algorithm>
#include <queue>

#include "roughdrop/errors.hpp"
#include "roughdrop/maxflow.hpp"

namespace roughdrop {

namespace {

struct Adjacency {
  std::vector<std::int32_t> first;
  std::vector<std::int32_t> edge;
};

Adjacency build_adjacency(const CutProblem& prob) {
  Adjacency adj;
  const int n = prob.node_count();
  adj.first.assign(n + 1, 0);
  for (const auto& e : prob.edges()) {
    ++adj.first[e.p + 1];
    ++adj.first[e.q + 1];
  }
  for (int i = 0; i < n; ++i) adj.first[i + 1] += adj.first[i];
  adj.edge.assign(adj.first[n], 0);
  std::vector<std::int32_t> fill(adj.first.begin(), adj.first.end() - 1);
  const auto& edges = prob.edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    adj.edge[fill[edges[k].p]++] = static_cast<std::int32_t>(k);
    adj.edge[fill[edges[k].q]++] = static_cast<std::int32_t>(k);
  }
  return adj;
}

// Energy change when node i switches from Vapor to Liquid.
Capacity add_delta(const CutProblem& prob, const Adjacency& adj, const std::vector<std::uint8_t>& x, int i) {
  Capacity d = prob.cost_liquid(i) - prob.cost_vapor(i);
  const auto& edges = prob.edges();
  for (std::int32_t k = adj.first[i]; k < adj.first[i + 1]; ++k) {
    const auto& e = edges[adj.edge[k]];
    if (e.p == i) d += x[e.q] ? -e.vl : e.lv;
    else d += x[e.p] ? -e.lv : e.vl;
  }
  return d;
}

// Moves the labeling towards the target one node at a time, always taking
// the cheapest admissible node touching the opposite phase.
int greedy_close(const CutProblem& prob, const Adjacency& adj, std::vector<std::uint8_t>& x, long target,
                 int tol, bool grow) {
  const int n = prob.node_count();
  long vol = 0;
  for (auto v : x) vol += v;
  const std::uint8_t from = grow ? 0 : 1;
  const Hard locked = grow ? Hard::Vapor : Hard::Liquid;
  auto gap = [&] { return grow ? target - tol - vol : vol - (target + tol); };
  if (gap() <= 0) return 0;

  auto touches_other = [&](int i) {
    const auto& edges = prob.edges();
    for (std::int32_t k = adj.first[i]; k < adj.first[i + 1]; ++k) {
      const auto& e = edges[adj.edge[k]];
      const int j = e.p == i ? e.q : e.p;
      if (x[j] != from) return true;
    }
    return false;
  };
  bool any_other = false;
  for (int i = 0; i < n; ++i) any_other |= (x[i] != from);

  using Item = std::pair<Capacity, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  std::vector<std::uint8_t> queued(n, 0);
  auto delta = [&](int i) { return grow ? add_delta(prob, adj, x, i) : -add_delta(prob, adj, x, i); };
  auto consider = [&](int i) {
    if (x[i] != from || prob.hard(i) == locked) return;
    if (any_other && !touches_other(i)) return;
    heap.push({delta(i), i});
    queued[i] = 1;
  };
  for (int i = 0; i < n; ++i) consider(i);
  int toggled = 0;
  while (gap() > 0) {
    if (heap.empty()) throw Infeasible("volume target unreachable by greedy fix-up");
    auto [d, i] = heap.top();
    heap.pop();
    if (x[i] != from) continue;
    const Capacity now = delta(i);
    if (now != d) {  // stale entry
      heap.push({now, i});
      continue;
    }
    x[i] = 1 - from;
    vol += grow ? 1 : -1;
    ++toggled;
    any_other = true;
    const auto& edges = prob.edges();
    for (std::int32_t k = adj.first[i]; k < adj.first[i + 1]; ++k) {
      const auto& e = edges[adj.edge[k]];
      const int j = e.p == i ? e.q : e.p;
      if (x[j] == from && prob.hard(j) != locked) heap.push({delta(j), j});
    }
  }
  return toggled;
}

bool subset(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] && !b[i]) return false;
  return true;
}

}  // namespace

VolumeSolution solve_volume_constrained(const CutProblem& prob, long target, const VolumeOptions& opt) {
  const int n = prob.node_count();
  long min_vol = 0, max_vol = n;
  for (int i = 0; i < n; ++i) {
    if (prob.hard(i) == Hard::Liquid) ++min_vol;
    if (prob.hard(i) == Hard::Vapor) --max_vol;
  }
  if (target < min_vol || target > max_vol) throw Infeasible("target volume unreachable");
  const Adjacency adj = build_adjacency(prob);

  // Beyond +-bound every free node prefers one phase regardless of neighbors.
  Capacity bound = 1;
  {
    std::vector<Capacity> inc(n, 0);
    for (const auto& e : prob.edges()) {
      inc[e.p] += e.vl + e.lv;
      inc[e.q] += e.vl + e.lv;
    }
    for (int i = 0; i < n; ++i) {
      Capacity d = prob.cost_liquid(i) - prob.cost_vapor(i);
      bound = std::max(bound, (d < 0 ? -d : d) + inc[i] + 1);
    }
  }

  VolumeSolution out;
  auto probe = [&](Capacity reward) {
    ++out.probes;
    return solve(prob, SideChoice::SinkSide, opt.algorithm, reward);
  };
  auto within = [&](const CutSolution& s) {
    const long v = static_cast<long>(s.liquid_count());
    return v >= target - opt.tol_cells && v <= target + opt.tol_cells;
  };
  auto finish = [&](CutSolution s, Capacity lo, Capacity hi, int toggled) {
    s.value = prob.evaluate(s.liquid);
    out.cut = std::move(s);
    out.reward_lo = lo;
    out.reward_hi = hi;
    out.lambda_lo = static_cast<double>(lo) / prob.scale();
    out.lambda_hi = static_cast<double>(hi) / prob.scale();
    out.toggled = toggled;
    return out;
  };

  Capacity lo, hi;
  CutSolution sol_lo, sol_hi;
  if (opt.has_hint) {
    Capacity r = std::clamp(opt.reward_hint, -bound, bound);
    CutSolution s = probe(r);
    if (within(s)) return finish(std::move(s), r, r, 0);
    Capacity step = std::max<Capacity>(1, (r < 0 ? -r : r) / 64 + 1);
    if (static_cast<long>(s.liquid_count()) < target) {
      lo = r;
      sol_lo = std::move(s);
      while (true) {
        hi = std::min(bound, lo + step);
        sol_hi = probe(hi);
        if (!subset(sol_lo.liquid, sol_hi.liquid)) throw InvariantBreach("parametric minimizers are not nested");
        if (within(sol_hi)) return finish(std::move(sol_hi), hi, hi, 0);
        if (static_cast<long>(sol_hi.liquid_count()) > target || hi == bound) break;
        lo = hi;
        sol_lo = std::move(sol_hi);
        step *= 4;
      }
    } else {
      hi = r;
      sol_hi = std::move(s);
      while (true) {
        lo = std::max(-bound, hi - step);
        sol_lo = probe(lo);
        if (!subset(sol_lo.liquid, sol_hi.liquid)) throw InvariantBreach("parametric minimizers are not nested");
        if (within(sol_lo)) return finish(std::move(sol_lo), lo, lo, 0);
        if (static_cast<long>(sol_lo.liquid_count()) < target || lo == -bound) break;
        hi = lo;
        sol_hi = std::move(sol_lo);
        step *= 4;
      }
    }
  } else {
    lo = -bound;
    hi = bound;
    sol_lo = probe(lo);
    if (within(sol_lo)) return finish(std::move(sol_lo), lo, lo, 0);
    sol_hi = probe(hi);
    if (within(sol_hi)) return finish(std::move(sol_hi), hi, hi, 0);
  }
  if (static_cast<long>(sol_lo.liquid_count()) > target || static_cast<long>(sol_hi.liquid_count()) < target)
    throw InvariantBreach("reward bracket does not enclose the target volume");

  while (hi - lo > 1) {
    const Capacity mid = lo + (hi - lo) / 2;
    CutSolution s = probe(mid);
    if (!subset(sol_lo.liquid, s.liquid) || !subset(s.liquid, sol_hi.liquid))
      throw InvariantBreach("parametric minimizers are not nested");
    if (within(s)) return finish(std::move(s), mid, mid, 0);
    if (static_cast<long>(s.liquid_count()) < target) {
      lo = mid;
      sol_lo = std::move(s);
    } else {
      hi = mid;
      sol_hi = std::move(s);
    }
  }

  // Plateau between two adjacent rewards: close the gap from both ends.
  std::vector<std::uint8_t> up = sol_lo.liquid, down = sol_hi.liquid;
  const int t_up = greedy_close(prob, adj, up, target, opt.tol_cells, true);
  const int t_down = greedy_close(prob, adj, down, target, opt.tol_cells, false);
  const Capacity e_up = prob.evaluate(up), e_down = prob.evaluate(down);
  CutSolution s = e_down < e_up ? sol_hi : sol_lo;
  s.liquid = e_down < e_up ? std::move(down) : std::move(up);
  return finish(std::move(s), lo, hi, e_down < e_up ? t_down : t_up);
}

}  // namespace roughdrop

namespace roughdrop {

int adjust_volume_greedy(const CutProblem& prob, std::vector<std::uint8_t>& x, long target) {
  if (static_cast<int>(x.size()) != prob.node_count()) throw InvalidArgument("labeling size mismatch");
  long vol = 0;
  for (auto v : x) vol += v;
  if (vol == target) return 0;
  return greedy_close(prob, build_adjacency(prob), x, target, 0, vol < target);
}

}  // namespace roughdrop

#include "roughdrop/maxflow.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <ostream>

#include "roughdrop/errors.hpp"

namespace roughdrop {

CutProblem::CutProblem(int nodes)
    : cost_vapor_(nodes, 0), cost_liquid_(nodes, 0), hard_(nodes, Hard::None) {}

int CutProblem::add_node() {
  cost_vapor_.push_back(0);
  cost_liquid_.push_back(0);
  hard_.push_back(Hard::None);
  return node_count() - 1;
}

void CutProblem::add_unary(int node, Capacity cost_vapor, Capacity cost_liquid) {
  cost_vapor_.at(node) += cost_vapor;
  cost_liquid_.at(node) += cost_liquid;
}

void CutProblem::add_pairwise(int p, int q, Capacity vl, Capacity lv) {
  if (p == q || p < 0 || q < 0 || p >= node_count() || q >= node_count())
    throw InvalidArgument("pairwise term needs two distinct valid nodes");
  if (vl < 0 || lv < 0) throw InvariantBreach("negative pairwise capacity (non-submodular term)");
  if (vl == 0 && lv == 0) return;
  edges_.push_back({p, q, vl, lv});
}

void CutProblem::set_hard(int node, Hard h) { hard_.at(node) = h; }

Capacity CutProblem::evaluate(const std::vector<std::uint8_t>& x) const {
  Capacity e = constant_;
  for (int i = 0; i < node_count(); ++i) e += x[i] ? cost_liquid_[i] : cost_vapor_[i];
  for (const auto& ed : edges_) {
    if (!x[ed.p] && x[ed.q]) e += ed.vl;
    if (x[ed.p] && !x[ed.q]) e += ed.lv;
  }
  return e;
}

bool CutProblem::satisfies_hard(const std::vector<std::uint8_t>& x) const {
  for (int i = 0; i < node_count(); ++i) {
    if (hard_[i] == Hard::Liquid && !x[i]) return false;
    if (hard_[i] == Hard::Vapor && x[i]) return false;
  }
  return true;
}

std::size_t CutSolution::liquid_count() const {
  std::size_t c = 0;
  for (auto v : liquid) c += v;
  return c;
}

namespace {

constexpr std::int32_t kNone = -1;
constexpr std::int32_t kTerminal = -2;
constexpr std::int32_t kOrphan = -3;

// Residual network in CSR form. tr[i] > 0 is residual source->i, tr[i] < 0 is
// residual i->sink.
struct Network {
  int n = 0;
  std::vector<std::int32_t> first;  // size n + 1
  std::vector<std::int32_t> head;
  std::vector<std::int32_t> sister;
  std::vector<Capacity> r;
  std::vector<Capacity> tr;
  Capacity base = 0;  // energy offset from terminal normalization
  Capacity sentinel = 0;
};

Network build_network(const CutProblem& prob, Capacity reward, bool reversed) {
  Network net;
  const int n = prob.node_count();
  net.n = n;
  __int128 total = 1;
  for (int i = 0; i < n; ++i) {
    __int128 d = static_cast<__int128>(prob.cost_liquid(i)) - reward - prob.cost_vapor(i);
    total += d < 0 ? -d : d;
  }
  for (const auto& e : prob.edges()) total += static_cast<__int128>(e.vl) + e.lv;
  const __int128 limit = static_cast<__int128>(1) << 61;
  if (total >= limit) throw InvalidArgument("capacities overflow the fixed-point range");
  net.sentinel = static_cast<Capacity>(total);

  net.tr.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    Capacity cl = prob.cost_liquid(i) - reward;
    Capacity cv = prob.cost_vapor(i);
    if (prob.hard(i) == Hard::Liquid) cv += net.sentinel;
    if (prob.hard(i) == Hard::Vapor) cl += net.sentinel;
    net.base += std::min(cl, cv);
    net.tr[i] = cl - cv;
  }
  std::vector<std::int32_t> deg(n + 1, 0);
  for (const auto& e : prob.edges()) {
    ++deg[e.p];
    ++deg[e.q];
  }
  net.first.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) net.first[i + 1] = net.first[i] + deg[i];
  const std::size_t m = static_cast<std::size_t>(net.first[n]);
  net.head.assign(m, 0);
  net.sister.assign(m, 0);
  net.r.assign(m, 0);
  std::vector<std::int32_t> fill(net.first.begin(), net.first.end() - 1);
  for (const auto& e : prob.edges()) {
    const std::int32_t a = fill[e.p]++;
    const std::int32_t b = fill[e.q]++;
    net.head[a] = e.q;
    net.head[b] = e.p;
    net.sister[a] = b;
    net.sister[b] = a;
    net.r[a] = e.vl;
    net.r[b] = e.lv;
  }
  if (reversed) {
    // Swap terminals and reverse every arc: residual(a) <-> residual(sister a).
    for (auto& t : net.tr) t = -t;
    for (std::size_t a = 0; a < m; ++a)
      if (static_cast<std::size_t>(net.sister[a]) > a) std::swap(net.r[a], net.r[net.sister[a]]);
  }
  return net;
}

// Boykov-Kolmogorov augmenting paths with search-tree reuse.
class BKSolver {
 public:
  explicit BKSolver(Network& net) : g_(net) {}

  Capacity run() {
    const int n = g_.n;
    parent_.assign(n, kNone);
    sink_.assign(n, 0);
    ts_.assign(n, 0);
    dist_.assign(n, 0);
    active_.assign(n, 0);
    for (int i = 0; i < n; ++i) {
      if (g_.tr[i] > 0) {
        sink_[i] = 0;
      } else if (g_.tr[i] < 0) {
        sink_[i] = 1;
      } else {
        continue;
      }
      parent_[i] = kTerminal;
      dist_[i] = 1;
      ts_[i] = 0;
      activate(i);
    }
    Capacity flow = 0;
    int current = kNone;
    while (true) {
      int i = current;
      if (i == kNone || parent_[i] == kNone) {
        i = next_active();
        if (i == kNone) break;
      }
      current = kNone;
      std::int32_t found = kNone;
      if (!sink_[i]) {
        for (std::int32_t a = g_.first[i]; a < g_.first[i + 1]; ++a) {
          if (!g_.r[a]) continue;
          const int j = g_.head[a];
          if (parent_[j] == kNone) {
            sink_[j] = 0;
            parent_[j] = g_.sister[a];
            ts_[j] = ts_[i];
            dist_[j] = dist_[i] + 1;
            activate(j);
          } else if (sink_[j]) {
            found = a;
            break;
          } else if (ts_[j] <= ts_[i] && dist_[j] > dist_[i]) {
            parent_[j] = g_.sister[a];
            ts_[j] = ts_[i];
            dist_[j] = dist_[i] + 1;
          }
        }
      } else {
        for (std::int32_t a = g_.first[i]; a < g_.first[i + 1]; ++a) {
          if (!g_.r[g_.sister[a]]) continue;
          const int j = g_.head[a];
          if (parent_[j] == kNone) {
            sink_[j] = 1;
            parent_[j] = g_.sister[a];
            ts_[j] = ts_[i];
            dist_[j] = dist_[i] + 1;
            activate(j);
          } else if (!sink_[j]) {
            found = g_.sister[a];
            break;
          } else if (ts_[j] <= ts_[i] && dist_[j] > dist_[i]) {
            parent_[j] = g_.sister[a];
            ts_[j] = ts_[i];
            dist_[j] = dist_[i] + 1;
          }
        }
      }
      ++time_;
      if (found != kNone) {
        current = i;
        flow += augment(found);
        adopt();
      }
    }
    return flow;
  }

 private:
  void activate(int i) {
    if (active_[i]) return;
    active_[i] = 1;
    queue_.push_back(i);
  }

  int next_active() {
    while (!queue_.empty()) {
      const int i = queue_.front();
      queue_.pop_front();
      active_[i] = 0;
      if (parent_[i] != kNone) return i;
    }
    return kNone;
  }

  void orphan_front(int i) {
    parent_[i] = kOrphan;
    orphans_.push_front(i);
  }
  void orphan_rear(int i) {
    parent_[i] = kOrphan;
    orphans_.push_back(i);
  }

  Capacity augment(std::int32_t middle) {
    Capacity bottleneck = g_.r[middle];
    // Source half: walk from the tail of the middle arc up to the source.
    int i = g_.head[g_.sister[middle]];
    while (true) {
      const std::int32_t a = parent_[i];
      if (a == kTerminal) {
        bottleneck = std::min(bottleneck, g_.tr[i]);
        break;
      }
      bottleneck = std::min(bottleneck, g_.r[g_.sister[a]]);
      i = g_.head[a];
    }
    i = g_.head[middle];
    while (true) {
      const std::int32_t a = parent_[i];
      if (a == kTerminal) {
        bottleneck = std::min(bottleneck, -g_.tr[i]);
        break;
      }
      bottleneck = std::min(bottleneck, g_.r[a]);
      i = g_.head[a];
    }
    g_.r[g_.sister[middle]] += bottleneck;
    g_.r[middle] -= bottleneck;
    i = g_.head[g_.sister[middle]];
    while (true) {
      const std::int32_t a = parent_[i];
      if (a == kTerminal) {
        g_.tr[i] -= bottleneck;
        if (!g_.tr[i]) orphan_front(i);
        break;
      }
      g_.r[a] += bottleneck;
      g_.r[g_.sister[a]] -= bottleneck;
      const int next = g_.head[a];
      if (!g_.r[g_.sister[a]]) orphan_front(i);
      i = next;
    }
    i = g_.head[middle];
    while (true) {
      const std::int32_t a = parent_[i];
      if (a == kTerminal) {
        g_.tr[i] += bottleneck;
        if (!g_.tr[i]) orphan_front(i);
        break;
      }
      g_.r[g_.sister[a]] += bottleneck;
      g_.r[a] -= bottleneck;
      const int next = g_.head[a];
      if (!g_.r[a]) orphan_front(i);
      i = next;
    }
    return bottleneck;
  }

  void adopt() {
    while (!orphans_.empty()) {
      const int i = orphans_.front();
      orphans_.pop_front();
      process_orphan(i, sink_[i] != 0);
    }
  }

  void process_orphan(int i, bool sink_tree) {
    constexpr int kInf = std::numeric_limits<int>::max();
    std::int32_t best = kNone;
    int dmin = kInf;
    for (std::int32_t a0 = g_.first[i]; a0 < g_.first[i + 1]; ++a0) {
      const Capacity cap = sink_tree ? g_.r[a0] : g_.r[g_.sister[a0]];
      if (!cap) continue;
      int j = g_.head[a0];
      if (static_cast<bool>(sink_[j]) != sink_tree || parent_[j] == kNone) continue;
      int d = 0;
      while (true) {
        if (ts_[j] == time_) {
          d += dist_[j];
          break;
        }
        const std::int32_t a = parent_[j];
        ++d;
        if (a == kTerminal) {
          ts_[j] = time_;
          dist_[j] = 1;
          break;
        }
        if (a == kOrphan) {
          d = kInf;
          break;
        }
        j = g_.head[a];
      }
      if (d < kInf) {
        if (d < dmin) {
          best = a0;
          dmin = d;
        }
        for (j = g_.head[a0]; ts_[j] != time_; j = g_.head[parent_[j]]) {
          ts_[j] = time_;
          dist_[j] = d--;
        }
      }
    }
    if (best != kNone) {
      parent_[i] = best;
      ts_[i] = time_;
      dist_[i] = dmin + 1;
      return;
    }
    for (std::int32_t a0 = g_.first[i]; a0 < g_.first[i + 1]; ++a0) {
      const int j = g_.head[a0];
      const std::int32_t a = parent_[j];
      if (static_cast<bool>(sink_[j]) != sink_tree || a == kNone) continue;
      const Capacity cap = sink_tree ? g_.r[a0] : g_.r[g_.sister[a0]];
      if (cap) activate(j);
      if (a != kTerminal && a != kOrphan && g_.head[a] == i) orphan_rear(j);
    }
    parent_[i] = kNone;
  }

  Network& g_;
  std::vector<std::int32_t> parent_;
  std::vector<std::uint8_t> sink_;
  std::vector<int> ts_;
  std::vector<int> dist_;
  std::vector<std::uint8_t> active_;
  std::deque<int> queue_;
  std::deque<int> orphans_;
  int time_ = 0;
};

// Highest-label push-relabel, first phase only (maximum preflow). Terminal
// arcs are kept implicit in tr.
class PushRelabel {
 public:
  explicit PushRelabel(Network& net) : g_(net) {}

  Capacity run() {
    const int n = g_.n;
    height_.assign(n, 0);
    excess_.assign(n, 0);
    cur_.assign(g_.first.begin(), g_.first.end() - 1);
    Capacity sink_flow = 0;
    // Saturate source arcs; route what can go straight to the sink.
    for (int i = 0; i < n; ++i) {
      if (g_.tr[i] > 0) {
        excess_[i] = g_.tr[i];
        g_.tr[i] = 0;
      }
    }
    for (int i = 0; i < n; ++i) {
      if (excess_[i] > 0 && g_.tr[i] < 0) {
        const Capacity d = std::min(excess_[i], -g_.tr[i]);
        excess_[i] -= d;
        g_.tr[i] += d;
        sink_flow += d;
      }
    }
    dead_ = n + 1;
    buckets_.assign(n + 2, {});
    count_.assign(n + 2, 0);
    global_relabel();
    long work = 0;
    while (max_active_ >= 0) {
      if (buckets_[max_active_].empty()) {
        --max_active_;
        continue;
      }
      const int u = buckets_[max_active_].back();
      buckets_[max_active_].pop_back();
      if (height_[u] != max_active_ || excess_[u] == 0) continue;
      sink_flow += discharge(u, work);
      if (work > 6L * n + static_cast<long>(g_.head.size())) {
        work = 0;
        global_relabel();
      }
    }
    return sink_flow;
  }

 private:
  void global_relabel() {
    const int n = g_.n;
    std::fill(height_.begin(), height_.end(), dead_);
    std::fill(count_.begin(), count_.end(), 0);
    for (auto& b : buckets_) b.clear();
    std::deque<int> q;
    for (int i = 0; i < n; ++i)
      if (g_.tr[i] < 0) {
        height_[i] = 1;
        q.push_back(i);
      }
    while (!q.empty()) {
      const int v = q.front();
      q.pop_front();
      for (std::int32_t a = g_.first[v]; a < g_.first[v + 1]; ++a) {
        const int u = g_.head[a];
        if (height_[u] == dead_ && g_.r[g_.sister[a]] > 0) {
          height_[u] = height_[v] + 1;
          q.push_back(u);
        }
      }
    }
    max_active_ = -1;
    for (int i = 0; i < n; ++i) {
      cur_[i] = g_.first[i];
      if (height_[i] < dead_) {
        ++count_[height_[i]];
        if (excess_[i] > 0) push_active(i);
      }
    }
  }

  void push_active(int u) {
    buckets_[height_[u]].push_back(u);
    max_active_ = std::max(max_active_, height_[u]);
  }

  Capacity discharge(int u, long& work) {
    Capacity to_sink = 0;
    while (excess_[u] > 0) {
      if (g_.tr[u] < 0 && height_[u] == 1) {
        const Capacity d = std::min(excess_[u], -g_.tr[u]);
        excess_[u] -= d;
        g_.tr[u] += d;
        to_sink += d;
        continue;
      }
      bool pushed = false;
      for (std::int32_t& a = cur_[u]; a < g_.first[u + 1]; ++a) {
        if (g_.r[a] <= 0) continue;
        const int v = g_.head[a];
        if (height_[v] + 1 != height_[u]) continue;
        const Capacity d = std::min(excess_[u], g_.r[a]);
        g_.r[a] -= d;
        g_.r[g_.sister[a]] += d;
        excess_[u] -= d;
        if (excess_[v] == 0) {
          excess_[v] = d;
          push_active(v);
        } else {
          excess_[v] += d;
        }
        pushed = true;
        if (excess_[u] == 0) break;
      }
      if (excess_[u] == 0) break;
      if (pushed && cur_[u] < g_.first[u + 1]) continue;
      // Relabel.
      const int old = height_[u];
      int h = dead_;
      if (g_.tr[u] < 0) h = 1;
      for (std::int32_t a = g_.first[u]; a < g_.first[u + 1]; ++a)
        if (g_.r[a] > 0) h = std::min(h, height_[g_.head[a]] + 1);
      work += 12 + (g_.first[u + 1] - g_.first[u]);
      cur_[u] = g_.first[u];
      --count_[old];
      if (count_[old] == 0 && old > 0) {
        // Gap: nothing at level old, so no node above it can reach the sink.
        for (int i = 0; i < g_.n; ++i)
          if (height_[i] > old && height_[i] < dead_) {
            --count_[height_[i]];
            height_[i] = dead_;
          }
        height_[u] = dead_;
        return to_sink;
      }
      if (h >= dead_) {
        height_[u] = dead_;
        return to_sink;
      }
      height_[u] = h;
      ++count_[h];
    }
    return to_sink;
  }

  Network& g_;
  std::vector<int> height_;
  std::vector<Capacity> excess_;
  std::vector<std::int32_t> cur_;
  std::vector<std::vector<int>> buckets_;
  std::vector<int> count_;
  int dead_ = 0;
  int max_active_ = -1;
};

// Nodes that can still reach the sink in the residual network.
std::vector<std::uint8_t> sink_reachable(const Network& g) {
  std::vector<std::uint8_t> seen(g.n, 0);
  std::deque<int> q;
  for (int i = 0; i < g.n; ++i)
    if (g.tr[i] < 0) {
      seen[i] = 1;
      q.push_back(i);
    }
  while (!q.empty()) {
    const int v = q.front();
    q.pop_front();
    for (std::int32_t a = g.first[v]; a < g.first[v + 1]; ++a) {
      const int u = g.head[a];
      if (!seen[u] && g.r[g.sister[a]] > 0) {
        seen[u] = 1;
        q.push_back(u);
      }
    }
  }
  return seen;
}

// Nodes reachable from the source in the residual network (needs a flow,
// not merely a preflow).
std::vector<std::uint8_t> source_reachable(const Network& g) {
  std::vector<std::uint8_t> seen(g.n, 0);
  std::deque<int> q;
  for (int i = 0; i < g.n; ++i)
    if (g.tr[i] > 0) {
      seen[i] = 1;
      q.push_back(i);
    }
  while (!q.empty()) {
    const int v = q.front();
    q.pop_front();
    for (std::int32_t a = g.first[v]; a < g.first[v + 1]; ++a) {
      const int u = g.head[a];
      if (!seen[u] && g.r[a] > 0) {
        seen[u] = 1;
        q.push_back(u);
      }
    }
  }
  return seen;
}

}  // namespace

CutSolution solve(const CutProblem& problem, SideChoice side, Algorithm algorithm, Capacity reward) {
  if (algorithm == Algorithm::Auto)
    algorithm = problem.grid_dim() == 3 ? Algorithm::PushRelabel : Algorithm::AugmentingPath;
  CutSolution sol;
  sol.side = side;
  sol.scale = problem.scale();
  sol.algorithm = algorithm;
  const int n = problem.node_count();
  sol.liquid.assign(n, 0);
  if (algorithm == Algorithm::AugmentingPath) {
    Network net = build_network(problem, reward, false);
    sol.flow = BKSolver(net).run();
    if (side == SideChoice::SinkSide) {
      auto s = source_reachable(net);
      for (int i = 0; i < n; ++i) sol.liquid[i] = !s[i];
    } else {
      sol.liquid = sink_reachable(net);
    }
    sol.value = sol.flow + net.base + problem.constant();
  } else {
    // Phase one only gives a preflow, so the maximal side is read off the
    // minimal side of the reversed network.
    const bool reversed = side == SideChoice::SinkSide;
    Network net = build_network(problem, reward, reversed);
    sol.flow = PushRelabel(net).run();
    auto t = sink_reachable(net);
    for (int i = 0; i < n; ++i) sol.liquid[i] = reversed ? !t[i] : t[i];
    sol.value = sol.flow + net.base + problem.constant();
  }
  if (!problem.satisfies_hard(sol.liquid)) throw Infeasible("hard label constraints cannot be met");
  const Capacity check = problem.evaluate(sol.liquid) - reward * static_cast<Capacity>(sol.liquid_count());
  if (check != sol.value) throw InvariantBreach("cut value disagrees with the labeling energy");
  return sol;
}

void CutProblem::write_dimacs(std::ostream& out) const {
  // Terminal arcs carry the normalized unary terms; hard labels use a large
  // sentinel. The constant is reported in a comment line.
  Capacity base = constant_;
  Capacity sentinel = 1;
  for (int i = 0; i < node_count(); ++i) {
    Capacity d = cost_liquid_[i] - cost_vapor_[i];
    sentinel += d < 0 ? -d : d;
  }
  for (const auto& e : edges_) sentinel += e.vl + e.lv;
  std::vector<Capacity> cl(node_count()), cv(node_count());
  for (int i = 0; i < node_count(); ++i) {
    cl[i] = cost_liquid_[i];
    cv[i] = cost_vapor_[i];
    if (hard_[i] == Hard::Liquid) cv[i] += sentinel;
    if (hard_[i] == Hard::Vapor) cl[i] += sentinel;
    base += std::min(cl[i], cv[i]);
  }
  std::size_t arcs = 0;
  for (int i = 0; i < node_count(); ++i) arcs += cl[i] != cv[i];
  for (const auto& e : edges_) arcs += (e.vl > 0) + (e.lv > 0);
  out << "c roughdrop cut problem; energy = maxflow + " << base << " ; scale " << scale_ << "\n";
  out << "p max " << node_count() + 2 << " " << arcs << "\n";
  out << "n 1 s\nn 2 t\n";
  for (int i = 0; i < node_count(); ++i) {
    if (cl[i] > cv[i]) out << "a 1 " << i + 3 << " " << cl[i] - cv[i] << "\n";
    if (cv[i] > cl[i]) out << "a " << i + 3 << " 2 " << cv[i] - cl[i] << "\n";
  }
  for (const auto& e : edges_) {
    if (e.vl > 0) out << "a " << e.p + 3 << " " << e.q + 3 << " " << e.vl << "\n";
    if (e.lv > 0) out << "a " << e.q + 3 << " " << e.p + 3 << " " << e.lv << "\n";
  }
}

}  // namespace roughdrop

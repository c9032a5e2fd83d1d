#include "oracles.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace oracle {

using roughdrop::Capacity;
using roughdrop::CutProblem;
using roughdrop::Hard;

namespace {

void enumerate_impl(const CutProblem& prob, Capacity reward, int count, Enumeration& out) {
  const int n = prob.node_count();
  if (n > 24) throw std::runtime_error("too many nodes to enumerate");
  std::vector<std::uint8_t> x(n);
  out.feasible = false;
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
    int ones = 0;
    for (int i = 0; i < n; ++i) {
      x[i] = (mask >> i) & 1;
      ones += x[i];
    }
    if (count >= 0 && ones != count) continue;
    if (!prob.satisfies_hard(x)) continue;
    const Capacity e = prob.evaluate(x) - reward * ones;
    if (!out.feasible || e < out.best) {
      out.feasible = true;
      out.best = e;
      out.union_of_minimizers = x;
      out.intersection_of_minimizers = x;
    } else if (e == out.best) {
      for (int i = 0; i < n; ++i) {
        out.union_of_minimizers[i] |= x[i];
        out.intersection_of_minimizers[i] &= x[i];
      }
    }
  }
}

}  // namespace

Enumeration enumerate(const CutProblem& problem, Capacity reward) {
  Enumeration e;
  enumerate_impl(problem, reward, -1, e);
  return e;
}

Enumeration enumerate_with_count(const CutProblem& problem, int count) {
  Enumeration e;
  enumerate_impl(problem, 0, count, e);
  return e;
}

CutProblem random_grid(std::mt19937_64& rng, int nx, int ny, bool with_hard) {
  CutProblem p(nx * ny);
  std::uniform_int_distribution<int> unary(0, 40), pair(0, 25), coin(0, 9);
  for (int i = 0; i < nx * ny; ++i) {
    p.add_unary(i, unary(rng), unary(rng));
    if (with_hard) {
      const int c = coin(rng);
      if (c == 0) p.set_hard(i, Hard::Liquid);
      else if (c == 1) p.set_hard(i, Hard::Vapor);
    }
  }
  for (int y = 0; y < ny; ++y)
    for (int x = 0; x < nx; ++x) {
      const int i = y * nx + x;
      if (x + 1 < nx) p.add_pairwise(i, i + 1, pair(rng), pair(rng));
      if (y + 1 < ny) p.add_pairwise(i, i + nx, pair(rng), pair(rng));
    }
  p.add_constant(unary(rng));
  return p;
}

Capacity dimacs_maxflow(const std::string& text) {
  std::istringstream in(text);
  std::string tok;
  int n = 0, s = 0, t = 0;
  std::map<std::pair<int, int>, Capacity> cap;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    ls >> tok;
    if (tok == "p") {
      std::string kind;
      long m;
      ls >> kind >> n >> m;
    } else if (tok == "n") {
      int id;
      std::string w;
      ls >> id >> w;
      (w == "s" ? s : t) = id;
    } else if (tok == "a") {
      int u, v;
      Capacity c;
      ls >> u >> v >> c;
      cap[{u, v}] += c;
    }
  }
  std::vector<std::map<int, Capacity>> r(n + 1);
  for (const auto& [k, c] : cap) {
    r[k.first][k.second] += c;
    r[k.second][k.first] += 0;
  }
  Capacity flow = 0;
  while (true) {
    std::vector<int> prev(n + 1, -1);
    prev[s] = s;
    std::deque<int> q{s};
    while (!q.empty() && prev[t] < 0) {
      int u = q.front();
      q.pop_front();
      for (const auto& [v, c] : r[u])
        if (c > 0 && prev[v] < 0) {
          prev[v] = u;
          q.push_back(v);
        }
    }
    if (prev[t] < 0) break;
    Capacity b = std::numeric_limits<Capacity>::max();
    for (int v = t; v != s; v = prev[v]) b = std::min(b, r[prev[v]][v]);
    for (int v = t; v != s; v = prev[v]) {
      r[prev[v]][v] -= b;
      r[v][prev[v]] += b;
    }
    flow += b;
  }
  return flow;
}

double brute_force_lattice_min(const std::shared_ptr<const roughdrop::Domain>& domain,
                               const std::function<double(const roughdrop::LabelField&)>& energy,
                               roughdrop::LabelField* argmin) {
  std::vector<std::size_t> cells;
  for (std::size_t c = 0; c < domain->cell_count(); ++c)
    if (!domain->solid(c)) cells.push_back(c);
  if (cells.size() > 22) throw std::runtime_error("too many free cells to enumerate");
  double best = std::numeric_limits<double>::infinity();
  roughdrop::LabelField f(domain);
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << cells.size()); ++mask) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      f.set(cells[i], (mask >> i) & 1 ? roughdrop::Label::Liquid : roughdrop::Label::Vapor);
    const double e = energy(f);
    if (e < best) {
      best = e;
      if (argmin) *argmin = f;
    }
  }
  return best;
}

namespace {
double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
               double whole, double tol, int depth) {
  const double m = 0.5 * (a + b), lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}
}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson(f, a, b, fa, fm, fb, whole, tol, 50);
}

}  // namespace oracle

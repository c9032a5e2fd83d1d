#pragma once

// Enumeration of the pair terms of the lattice energy, shared by the energy
// evaluator and the graph builder so both see exactly the same terms.

#include <cstddef>

#include "roughdrop/lattice.hpp"

namespace roughdrop::detail {

enum class Neighbor { Inside, Drop, GhostVapor };

struct Resolved {
  Neighbor kind;
  std::size_t idx;
};

inline Resolved resolve(const Domain& d, long i, long j, long k) {
  const auto& n = d.shape();
  const auto& pol = d.options().lateral;
  bool outside = false;
  long c[2] = {i, j};
  for (int a = 0; a < 2; ++a) {
    if (c[a] >= 0 && c[a] < n[a]) continue;
    if (a == 1 && d.ambient_dim() == 2) return {Neighbor::Drop, 0};
    switch (pol[a]) {
      case Boundary::Free: return {Neighbor::Drop, 0};
      case Boundary::Periodic: c[a] = ((c[a] % n[a]) + n[a]) % n[a]; break;
      case Boundary::Walled: outside = true; break;
    }
  }
  if (k < 0) return {Neighbor::Drop, 0};
  if (k >= n[2]) {
    if (d.options().lid == Lid::Open) return {Neighbor::Drop, 0};
    return {Neighbor::GhostVapor, 0};
  }
  if (outside) {
    if (d.solid_at(c[0], c[1], k)) return {Neighbor::Drop, 0};
    return {Neighbor::GhostVapor, 0};
  }
  return {Neighbor::Inside, d.index(static_cast<int>(c[0]), static_cast<int>(c[1]), static_cast<int>(k))};
}

// Calls pair(p, q, w) for owned fluid-fluid pairs, ghost(p, w) for pairs with a
// vapor ghost outside the box and solid(p, faces) with the number of axis
// faces p shares with solid cells. w is the stencil weight (area w * h^d).
template <class PairFn, class GhostFn, class SolidFn>
void visit_terms(const Domain& d, const Region& region, PairFn&& pair, GhostFn&& ghost, SolidFn&& solid) {
  const auto& stencil = d.stencil().half();
  const int reach = d.stencil().reach();
  const auto& n = d.shape();
  const bool three = d.ambient_dim() == 3;
  const long sx = 1, sy = n[0], sz = static_cast<long>(n[0]) * n[1];
  for (int k = region.lo[2]; k < region.hi[2]; ++k) {
    for (int j = region.lo[1]; j < region.hi[1]; ++j) {
      for (int i = region.lo[0]; i < region.hi[0]; ++i) {
        const std::size_t p = d.index(i, j, k);
        if (d.solid(p)) continue;
        const bool interior = i >= reach && i + reach < n[0] && k >= reach && k + reach < n[2] &&
                              (!three || (j >= reach && j + reach < n[1]));
        for (const auto& o : stencil) {
          const int dx = o.delta[0], dy = o.delta[1], dz = o.delta[2];
          if (interior) {
            const std::size_t q = p + dx * sx + dy * sy + dz * sz;
            if (!d.solid(q)) pair(p, q, o.weight);
            continue;
          }
          Resolved f = resolve(d, i + dx, j + dy, k + dz);
          if (f.kind == Neighbor::Inside) {
            if (f.idx != p && !d.solid(f.idx)) pair(p, f.idx, o.weight);
          } else if (f.kind == Neighbor::GhostVapor) {
            ghost(p, o.weight);
          }
          Resolved b = resolve(d, i - dx, j - dy, k - dz);
          if (b.kind == Neighbor::GhostVapor) ghost(p, o.weight);
        }
        int faces = 0;
        const int axes = three ? 3 : 2;
        for (int a = 0; a < axes; ++a) {
          for (int s = -1; s <= 1; s += 2) {
            long ci = i, cj = j, ck = k;
            if (a == 0) ci += s;
            else if (a == 1 && three) cj += s;
            else ck += s;
            if (interior) {
              if (d.solid(d.index(int(ci), int(cj), int(ck)))) ++faces;
              continue;
            }
            if (ck < 0) {
              if (d.solid_at(ci, cj, ck)) ++faces;
              continue;
            }
            Resolved r = resolve(d, ci, cj, ck);
            if (r.kind == Neighbor::Inside && d.solid(r.idx)) ++faces;
          }
        }
        if (faces) solid(p, faces);
      }
    }
  }
}

}  // namespace roughdrop::detail

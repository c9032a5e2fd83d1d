#include "roughdrop/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "roughdrop/errors.hpp"

namespace roughdrop {

namespace {

bool canonical(const std::array<int, 3>& e) {
  for (int c : e) {
    if (c > 0) return true;
    if (c < 0) return false;
  }
  return false;
}

// Minimax fits of the Crofton response over all normals, computed offline.
const std::vector<std::pair<std::array<int, 3>, double>> kOrbits2D = {
    {{0, 1, 0}, 0.10177011095803171},  {{1, 1, 0}, 0.10163859883497925},
    {{1, 2, 0}, 0.033297231975015919}, {{1, 4, 0}, 0.034877609269035041},
    {{2, 3, 0}, 0.014639320683156379},
};

const std::vector<std::pair<std::array<int, 3>, double>> kOrbits3D = {
    {{0, 0, 1}, 0.086928490119},
    {{0, 1, 1}, 0.121949180265},
    {{1, 1, 1}, 0.106318697205},
};

}  // namespace

PerimeterStencil PerimeterStencil::from_orbits(
    int ambient_dim, const std::vector<std::pair<std::array<int, 3>, double>>& orbits) {
  if (ambient_dim != 2 && ambient_dim != 3) throw InvalidArgument("ambient dimension must be 2 or 3");
  PerimeterStencil s;
  s.dim_ = ambient_dim;
  std::set<std::array<int, 3>> seen;
  for (const auto& [rep, w] : orbits) {
    std::array<int, 3> base = rep;
    // In 2D the representative lives in the (x, z) plane; y stays zero.
    std::vector<int> comps = ambient_dim == 2 ? std::vector<int>{base[0], base[1]}
                                              : std::vector<int>{base[0], base[1], base[2]};
    std::sort(comps.begin(), comps.end());
    do {
      const int nsign = 1 << ambient_dim;
      for (int sign = 0; sign < nsign; ++sign) {
        std::array<int, 3> e{0, 0, 0};
        for (int k = 0; k < ambient_dim; ++k) {
          int c = comps[k] * ((sign >> k) & 1 ? -1 : 1);
          if (ambient_dim == 2) e[k == 0 ? 0 : 2] = c;
          else e[k] = c;
        }
        if (!canonical(e) || !seen.insert(e).second) continue;
        s.half_.push_back({e, w});
      }
    } while (std::next_permutation(comps.begin(), comps.end()));
  }
  std::sort(s.half_.begin(), s.half_.end(),
            [](const StencilOffset& a, const StencilOffset& b) { return a.delta < b.delta; });
  // Normalize so that the response to a horizontal plane is exactly 1.
  const double axis = s.response({0.0, 0.0, 1.0});
  for (auto& o : s.half_) o.weight /= axis;
  s.reach_ = 0;
  s.vertical_reach_ = 0;
  for (const auto& o : s.half_) {
    for (int c : o.delta) s.reach_ = std::max(s.reach_, std::abs(c));
    s.vertical_reach_ = std::max(s.vertical_reach_, std::abs(o.delta[2]));
  }
  return s;
}

const PerimeterStencil& PerimeterStencil::standard(int ambient_dim) {
  static const PerimeterStencil s2 = from_orbits(2, kOrbits2D);
  static const PerimeterStencil s3 = from_orbits(3, kOrbits3D);
  if (ambient_dim == 2) return s2;
  if (ambient_dim == 3) return s3;
  throw InvalidArgument("ambient dimension must be 2 or 3");
}

double PerimeterStencil::response(const std::array<double, 3>& n) const {
  double r = 0.0;
  for (const auto& o : half_)
    r += o.weight * std::abs(n[0] * o.delta[0] + n[1] * o.delta[1] + n[2] * o.delta[2]);
  return r;
}

double PerimeterStencil::anisotropy(int samples) const {
  double worst = 0.0;
  const double pi = std::numbers::pi;
  if (dim_ == 2) {
    for (int k = 0; k < samples; ++k) {
      double t = pi * k / samples;
      worst = std::max(worst, std::abs(response({std::cos(t), 0.0, std::sin(t)}) - 1.0));
    }
  } else {
    for (int a = 0; a <= samples / 8; ++a) {
      double th = 0.5 * pi * a / (samples / 8);
      for (int b = 0; b < samples / 4; ++b) {
        double ph = 2.0 * pi * b / (samples / 4);
        std::array<double, 3> n{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
        worst = std::max(worst, std::abs(response(n) - 1.0));
      }
    }
  }
  return worst;
}

void PerimeterStencil::validate() const {
  for (const auto& o : half_)
    if (!(o.weight > 0.0) || !std::isfinite(o.weight))
      throw InvariantBreach("perimeter stencil has a non-positive weight");
  for (int k = 0; k < dim_; ++k) {
    std::array<double, 3> n{0.0, 0.0, 0.0};
    n[dim_ == 2 && k == 1 ? 2 : k] = 1.0;
    if (std::abs(response(n) - 1.0) > 1e-12)
      throw InvariantBreach("perimeter stencil is not exact on axis-aligned interfaces");
  }
}

PerimeterStencil PerimeterStencil::corrupted() const {
  PerimeterStencil s = *this;
  if (!s.half_.empty()) s.half_.back().weight = -s.half_.back().weight;
  return s;
}

}  // namespace roughdrop

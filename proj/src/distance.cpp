#include "roughdrop/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "roughdrop/errors.hpp"

namespace roughdrop {

namespace {

constexpr double kInf = 1e30;

// Felzenszwalb-Huttenlocher lower envelope of parabolas along one line.
void edt_1d(const double* f, double* d, int n, std::vector<int>& v, std::vector<double>& z) {
  v.resize(n);
  z.resize(n + 1);
  int k = 0;
  v[0] = 0;
  z[0] = -1e300;
  z[1] = 1e300;
  for (int q = 1; q < n; ++q) {
    auto meet = [&](int p) { return ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * (q - p)); };
    double s = meet(v[k]);
    while (s <= z[k]) {
      --k;
      s = meet(v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = 1e300;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

}  // namespace

std::vector<double> distance_transform(const std::vector<std::uint8_t>& feature, const std::array<int, 3>& n) {
  const std::size_t total = static_cast<std::size_t>(n[0]) * n[1] * n[2];
  if (feature.size() != total) throw InvalidArgument("distance transform: size mismatch");
  std::vector<double> g(total);
  for (std::size_t i = 0; i < total; ++i) g[i] = feature[i] ? 0.0 : kInf;
  const int longest = std::max({n[0], n[1], n[2]});
  std::vector<double> line(longest), out(longest);
  std::vector<int> v;
  std::vector<double> z;
  const std::size_t stride[3] = {1, static_cast<std::size_t>(n[0]), static_cast<std::size_t>(n[0]) * n[1]};
  for (int axis = 0; axis < 3; ++axis) {
    if (n[axis] == 1) continue;
    const int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
    for (int u = 0; u < n[a1]; ++u)
      for (int w = 0; w < n[a2]; ++w) {
        const std::size_t base = u * stride[a1] + w * stride[a2];
        for (int t = 0; t < n[axis]; ++t) line[t] = g[base + t * stride[axis]];
        edt_1d(line.data(), out.data(), n[axis], v, z);
        for (int t = 0; t < n[axis]; ++t) g[base + t * stride[axis]] = std::min(out[t], kInf);
      }
  }
  for (auto& x : g) x = x >= kInf * 0.5 ? std::numeric_limits<double>::infinity() : std::sqrt(x);
  return g;
}

double hausdorff(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b,
                 const std::array<int, 3>& n, int k_min) {
  const std::size_t layer = static_cast<std::size_t>(n[0]) * n[1];
  const std::size_t start = static_cast<std::size_t>(std::max(0, k_min)) * layer;
  auto restrict = [&](const std::vector<std::uint8_t>& s) {
    std::vector<std::uint8_t> r(s.size(), 0);
    bool any = false;
    for (std::size_t i = start; i < s.size(); ++i)
      if (s[i]) {
        r[i] = 1;
        any = true;
      }
    return std::make_pair(r, any);
  };
  auto [ra, any_a] = restrict(a);
  auto [rb, any_b] = restrict(b);
  if (!any_a && !any_b) return 0.0;
  if (!any_a || !any_b) return std::numeric_limits<double>::infinity();
  const auto da = distance_transform(ra, n);
  const auto db = distance_transform(rb, n);
  double h = 0.0;
  for (std::size_t i = start; i < ra.size(); ++i) {
    if (ra[i]) h = std::max(h, db[i]);
    if (rb[i]) h = std::max(h, da[i]);
  }
  return h;
}

}  // namespace roughdrop

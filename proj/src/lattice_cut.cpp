#include "roughdrop/lattice_cut.hpp"

#include <cmath>

#include "pairs.hpp"
#include "roughdrop/errors.hpp"

namespace roughdrop {

LatticeCut build_lattice_cut(const Domain& d, const Coefficients& coeffs, const LatticeCutOptions& opt) {
  coeffs.validate();
  d.stencil().validate();
  const std::size_t cells = d.cell_count();
  LatticeCut out;
  out.fixed.assign(cells, Fix::Free);
  if (opt.fixed) {
    if (opt.fixed->size() != cells) throw InvalidArgument("fixed-label vector has the wrong size");
    out.fixed = *opt.fixed;
  }
  out.node_of_cell.assign(cells, -1);
  for (std::size_t c = 0; c < cells; ++c) {
    if (d.solid(c) || out.fixed[c] != Fix::Free) continue;
    out.node_of_cell[c] = static_cast<std::int32_t>(out.cell_of_node.size());
    out.cell_of_node.push_back(static_cast<std::uint32_t>(c));
  }
  const std::size_t n = out.cell_of_node.size();
  std::vector<double> uv(n, 0.0), ul(n, 0.0);
  struct PairTerm {
    std::int32_t p, q;
    double c;
  };
  std::vector<PairTerm> pairs;
  double constant = 0.0;
  const double area = d.face_area();
  const double lv = coeffs.sigma_LV * area;
  const auto& node = out.node_of_cell;
  const auto& fx = out.fixed;

  detail::visit_terms(
      d, d.whole(),
      [&](std::size_t p, std::size_t q, double w) {
        const double c = lv * w;
        const std::int32_t a = node[p], b = node[q];
        if (a >= 0 && b >= 0) pairs.push_back({a, b, c});
        else if (a >= 0) (fx[q] == Fix::Liquid ? uv[a] : ul[a]) += c;
        else if (b >= 0) (fx[p] == Fix::Liquid ? uv[b] : ul[b]) += c;
        else if (fx[p] != fx[q]) constant += c;
      },
      [&](std::size_t p, double w) {
        const double c = lv * w;
        if (node[p] >= 0) ul[node[p]] += c;
        else if (fx[p] == Fix::Liquid) constant += c;
      },
      [&](std::size_t p, int faces) {
        const double sl = coeffs.sigma_SL * area * faces, sv = coeffs.sigma_SV * area * faces;
        if (node[p] >= 0) {
          ul[node[p]] += sl;
          uv[node[p]] += sv;
        } else {
          constant += fx[p] == Fix::Liquid ? sl : sv;
        }
      });
  if (opt.extra_liquid || opt.extra_vapor) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t c = out.cell_of_node[i];
      if (opt.extra_liquid) ul[i] += (*opt.extra_liquid)[c];
      if (opt.extra_vapor) uv[i] += (*opt.extra_vapor)[c];
    }
  }

  double total = std::abs(constant);
  for (std::size_t i = 0; i < n; ++i) total += std::abs(uv[i]) + std::abs(ul[i]);
  for (const auto& t : pairs) total += 2.0 * t.c;
  double scale = opt.scale;
  if (scale <= 0.0) {
    // Power of two leaving ample headroom below 2^61 for rewards and sentinels.
    scale = std::ldexp(1.0, static_cast<int>(std::floor(std::log2(std::ldexp(1.0, 50) / std::max(total, 1e-300)))));
    scale = std::min(scale, std::ldexp(1.0, 60));
  }
  if (total * scale > std::ldexp(1.0, 58)) throw InvalidArgument("energy scale overflows fixed point");
  out.scale = scale;
  auto q = [scale](double x) { return static_cast<Capacity>(std::llround(x * scale)); };
  out.problem = CutProblem(static_cast<int>(n));
  out.problem.set_scale(scale);
  out.problem.set_grid_dim(d.ambient_dim());
  out.problem.add_constant(q(constant));
  for (std::size_t i = 0; i < n; ++i) out.problem.add_unary(static_cast<int>(i), q(uv[i]), q(ul[i]));
  for (const auto& t : pairs) {
    const Capacity c = q(t.c);
    if (c < 0) throw InvariantBreach("negative liquid-vapor pair weight");
    out.problem.add_pairwise(t.p, t.q, c, c);
  }
  return out;
}

LabelField field_from_cut(const LatticeCut& cut, std::shared_ptr<const Domain> domain,
                          const std::vector<std::uint8_t>& liquid) {
  LabelField f(domain);
  for (std::size_t c = 0; c < cut.fixed.size(); ++c)
    if (cut.fixed[c] == Fix::Liquid && !domain->solid(c)) f.set(c, Label::Liquid);
  for (std::size_t i = 0; i < cut.cell_of_node.size(); ++i)
    if (liquid[i]) f.set(cut.cell_of_node[i], Label::Liquid);
  return f;
}

std::vector<std::uint8_t> cut_labels_from_field(const LatticeCut& cut, const LabelField& field) {
  std::vector<std::uint8_t> x(cut.cell_of_node.size(), 0);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = field.liquid(cut.cell_of_node[i]);
  return x;
}

}  // namespace roughdrop

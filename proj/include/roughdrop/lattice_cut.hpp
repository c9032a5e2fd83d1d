#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "roughdrop/lattice.hpp"
#include "roughdrop/maxflow.hpp"

namespace roughdrop {

// Per-cell constraint for graph construction. Fixed cells are folded into
// the unary terms of their neighbors and do not become graph nodes.
enum class Fix : std::uint8_t { Free = 0, Liquid = 1, Vapor = 2 };

struct LatticeCutOptions {
  const std::vector<Fix>* fixed = nullptr;            // per cell; null = all free
  const std::vector<double>* extra_liquid = nullptr;  // per cell energy added when Liquid
  const std::vector<double>* extra_vapor = nullptr;   // per cell energy added when Vapor
  double scale = 0.0;                                 // fixed-point units per energy; 0 = automatic
};

struct LatticeCut {
  CutProblem problem;
  std::vector<std::int32_t> node_of_cell;  // -1 for solid or fixed cells
  std::vector<std::uint32_t> cell_of_node;
  std::vector<Fix> fixed;
  double scale = 1.0;
  // Energy = problem.evaluate(x) / scale, up to rounding of each term.
};

// The lattice energy E (sigma-weighted) of a labeling as a cut problem.
LatticeCut build_lattice_cut(const Domain& domain, const Coefficients& coeffs, const LatticeCutOptions& options = {});

LabelField field_from_cut(const LatticeCut& cut, std::shared_ptr<const Domain> domain,
                          const std::vector<std::uint8_t>& liquid);
std::vector<std::uint8_t> cut_labels_from_field(const LatticeCut& cut, const LabelField& field);

}  // namespace roughdrop

#pragma once

#include <array>
#include <vector>

namespace roughdrop {

struct StencilOffset {
  std::array<int, 3> delta{0, 0, 0};  // (x, y, z); y = 0 in two dimensions
  double weight = 0.0;                // pair area is weight * h^d
};

// Cauchy-Crofton perimeter stencil: the liquid-vapor area of a labeling is the
// weighted count of differently labeled cell pairs (p, p + delta). Only the
// canonical half (first nonzero of x, y, z positive) is stored.
class PerimeterStencil {
 public:
  // Orbit representatives with nonnegative, sorted components; every signed
  // permutation is generated. Weights are rescaled so axis normals are exact.
  static PerimeterStencil from_orbits(int ambient_dim,
                                      const std::vector<std::pair<std::array<int, 3>, double>>& orbits);
  // Default: 16 directions of reach 4 in 2D, the 26-neighborhood in 3D.
  static const PerimeterStencil& standard(int ambient_dim);

  int ambient_dim() const { return dim_; }
  const std::vector<StencilOffset>& half() const { return half_; }
  int reach() const { return reach_; }
  int vertical_reach() const { return vertical_reach_; }

  // Discrete area per unit area of a plane with unit normal n.
  double response(const std::array<double, 3>& n) const;
  // Largest relative deviation of response from 1 over a dense set of normals.
  double anisotropy(int samples = 720) const;

  // Throws InvariantBreach unless weights are positive and axes are exact.
  void validate() const;

  // Fault injection for the verification harness.
  PerimeterStencil corrupted() const;

 private:
  int dim_ = 2;
  int reach_ = 1;
  int vertical_reach_ = 1;
  std::vector<StencilOffset> half_;
};

}  // namespace roughdrop

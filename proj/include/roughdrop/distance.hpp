#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace roughdrop {

// Exact Euclidean distance transform on an (nx, ny, nz) cell grid stored
// x-fastest. Returns, per cell, the distance in cell units to the nearest
// cell with feature != 0 (infinity when there is none).
std::vector<double> distance_transform(const std::vector<std::uint8_t>& feature, const std::array<int, 3>& shape);

// Hausdorff distance in cell units between the cell sets a and b, both
// restricted to layers k >= k_min. Empty against empty is 0; empty against
// nonempty is infinity.
double hausdorff(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b,
                 const std::array<int, 3>& shape, int k_min = 0);

}  // namespace roughdrop

#pragma once

// Independent reference computations used by the unit tests.

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "roughdrop/lattice.hpp"
#include "roughdrop/maxflow.hpp"

namespace oracle {

struct Enumeration {
  roughdrop::Capacity best = 0;
  std::vector<std::uint8_t> union_of_minimizers;
  std::vector<std::uint8_t> intersection_of_minimizers;
  bool feasible = false;
};

// Exhaustive search over all 2^n labelings that respect the hard labels.
Enumeration enumerate(const roughdrop::CutProblem& problem, roughdrop::Capacity reward = 0);

// Same, restricted to labelings with exactly `count` liquid nodes.
Enumeration enumerate_with_count(const roughdrop::CutProblem& problem, int count);

// Random grid problem with integer capacities on an nx x ny 4-neighbor grid.
roughdrop::CutProblem random_grid(std::mt19937_64& rng, int nx, int ny, bool with_hard);

// Edmonds-Karp on the DIMACS text written by CutProblem::write_dimacs.
roughdrop::Capacity dimacs_maxflow(const std::string& text);

// Minimum lattice energy over every labeling of the free cells.
double brute_force_lattice_min(const std::shared_ptr<const roughdrop::Domain>& domain,
                               const std::function<double(const roughdrop::LabelField&)>& energy,
                               roughdrop::LabelField* argmin = nullptr);

// Adaptive Simpson quadrature.
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12);

}  // namespace oracle

#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "roughdrop/stencil.hpp"

namespace roughdrop {

enum class Status { Pass, Fail, Skip };
const char* to_string(Status s);

struct CriterionResult {
  int id = 0;
  std::string name;
  Status status = Status::Skip;
  std::string detail;
  double seconds = 0.0;
  double limit_seconds = 0.0;
};

struct AcceptanceOptions {
  std::vector<int> criteria;  // empty runs all eleven
  int workers = 1;
  // Criterion 1 grids hold this many free cells at most; above 20 the
  // enumeration is skipped.
  int enum_free_cells = 20;
  int enum_grids = 240;
  int rough_instances = 50;
  bool enforce_time = true;
  // Fault injection: replaces the perimeter stencil of the cell problems.
  std::shared_ptr<const PerimeterStencil> stencil;
};

struct AcceptanceReport {
  std::vector<CriterionResult> results;
  bool invariant_breach = false;
  bool all_passed() const;
};

// Runs the selected criteria in order; every line is also written to log as
// it completes when log is not null.
AcceptanceReport run_acceptance(const AcceptanceOptions& options, std::ostream* log = nullptr);

std::string format_result(const CriterionResult& r);

}  // namespace roughdrop

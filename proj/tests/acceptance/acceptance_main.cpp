#include <CLI11.hpp>

#include <iostream>

#include "roughdrop/acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"roughdrop acceptance criteria"};
  roughdrop::AcceptanceOptions opt;
  app.add_option("--criteria", opt.criteria, "criterion ids to run (default all)");
  app.add_option("--workers", opt.workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--grids", opt.enum_grids, "random grids for the min-cut criterion");
  bool no_time = false;
  app.add_flag("--no-time-limits", no_time, "report but do not enforce time limits");
  CLI11_PARSE(app, argc, argv);
  opt.enforce_time = !no_time;

  const auto rep = roughdrop::run_acceptance(opt, &std::cout);
  int passed = 0, failed = 0, skipped = 0;
  for (const auto& r : rep.results) {
    passed += r.status == roughdrop::Status::Pass;
    failed += r.status == roughdrop::Status::Fail;
    skipped += r.status == roughdrop::Status::Skip;
  }
  std::cout << passed << " passed, " << failed << " failed, " << skipped << " skipped" << std::endl;
  if (rep.invariant_breach) return 4;
  return failed == 0 ? 0 : 1;
}

#pragma once

#include <iosfwd>
#include <optional>
#include <string>

namespace roughdrop {

inline constexpr const char* kVersion = "1.0.0";

struct AppArgs {
  std::string config_path;
  std::optional<std::string> out_dir;  // beats ROUGHDROP_OUT, which beats [output] dir
  std::optional<int> workers;
  std::optional<std::string> task;  // overrides [task] name
  bool verify = false;
};

// Exit status: 0 success, 1 failed acceptance criterion or unexpected error,
// 2 invalid configuration or argument, 3 infeasible problem, 4 invariant
// breach.
int run_app(const AppArgs& args, std::ostream& out, std::ostream& err);

std::string sha256_hex(const std::string& bytes);

}  // namespace roughdrop

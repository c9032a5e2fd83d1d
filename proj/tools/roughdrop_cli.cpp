#include <CLI11.hpp>

#include <iostream>

#include "roughdrop/app.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Capillary drops on periodic rough surfaces by exact min-cut"};
  app.set_version_flag("--version", roughdrop::kVersion);
  roughdrop::AppArgs args;
  app.add_option("--config", args.config_path, "experiment configuration (INI)")->required();
  app.add_option("--out", args.out_dir, "output directory");
  app.add_option("--workers", args.workers, "worker threads");
  app.add_option("--task", args.task, "cell | sweep-angle | droplet | homogenize | profile");
  app.add_flag("--verify", args.verify, "run the acceptance criteria instead of a task");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return roughdrop::run_app(args, std::cout, std::cerr);
}

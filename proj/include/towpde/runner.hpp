#pragma once

#include "towpde/config.hpp"

namespace towpde {

// Extended run description carrying CLI overrides.
struct RunRequest {
  RunConfig config;
  bool seed_from_cli = false;
};

// Dispatch one subcommand and write its artifacts under config.out_dir.
// Throws ValidationError / NumericalError; the CLI maps these to exit codes.
void run(const RunRequest& request);

}  // namespace towpde

// Runs the full acceptance suite and prints one line per check with the
// measured value, target and tolerance.  Exits nonzero if any check fails.

#include <cstdio>

#include "usam/validation.hpp"

int main() {
  usam::ValidateOptions opts;
  std::printf("acceptance suite (artifacts in %s)\n", opts.artifact_dir.c_str());
  auto results = usam::run_acceptance_checks(opts);
  return usam::report_checks(results, stdout);
}

// Acceptance gate: runs every criterion at its pinned tolerance and prints
// one pass/fail line per criterion. Nonzero exit on any failure.
#include <cstring>
#include <string>

#include "sigmalab/experiments.hpp"

int main(int argc, char** argv) {
  sigmalab::AcceptanceOptions options;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) {
      options.quick = true;
    } else if (std::strcmp(argv[i], "--out") == 0 && i + 1 < argc) {
      options.output_dir = argv[++i];
    } else if (std::strcmp(argv[i], "--jobs") == 0 && i + 1 < argc) {
      options.jobs = std::stoi(argv[++i]);
    } else if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) {
      options.seed = std::stoull(argv[++i]);
    }
  }
  const sigmalab::AcceptanceResult result = sigmalab::acceptance_suite(options);
  return result.pass ? 0 : 1;
}

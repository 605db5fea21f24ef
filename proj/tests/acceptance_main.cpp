// Acceptance battery runner: one pass/fail line per criterion, exit 0 iff
// every criterion holds at its stated tolerance. Runs the full level unless
// invoked with --quick.

#include <cstring>
#include <iostream>

#include "taildep/acceptance.hpp"

int main(int argc, char** argv) {
  auto level = taildep::accept::Level::Full;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--quick") == 0) level = taildep::accept::Level::Quick;

  const auto results = taildep::accept::run_acceptance(level, std::cout);
  for (const auto& r : results)
    if (!r.pass) return 1;
  return 0;
}

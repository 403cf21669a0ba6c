#include <cstring>
#include <iostream>

#include "lakes/core/error.hpp"
#include "lakes/harness/acceptance.hpp"
#include "lakes/harness/runner.hpp"

// usage: acceptance [ci|full]
int main(int argc, char** argv) {
  using namespace lakes::harness;
  try {
    const Tier tier = parse_tier(argc > 1 ? argv[1] : "ci");
    const auto results = run_acceptance(tier, resolve_threads(0), std::cout);
    for (const auto& r : results)
      if (!r.pass) return kExitVerify;
    return kExitOk;
  } catch (const lakes::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.code());
  }
}

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lakes::harness {

enum class Tier { CI, Full };

/// "ci" or "full"; anything else throws ConfigInvalid.
Tier parse_tier(const std::string& name);

struct CriterionResult {
  int id = 0;
  bool pass = false;
  double seconds = 0.0;
  std::string detail;  // measured values
};

/// Runs criteria 1-10 at the given tier, printing one line per criterion as it
/// finishes. Never writes result files.
std::vector<CriterionResult> run_acceptance(Tier tier, int threads, std::ostream& out);

}  // namespace lakes::harness

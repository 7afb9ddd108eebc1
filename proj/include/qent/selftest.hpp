#pragma once

// Randomised property checks over the library, driven by one seed.

#include <cstdint>
#include <string>
#include <vector>

namespace qent {

struct PropertyCheck {
  std::string name;
  int trials = 0;
  int failures = 0;
  double worst = 0.0;  // largest violation seen, in the check's own units
};

struct SelftestReport {
  std::vector<PropertyCheck> checks;

  bool passed() const;
  std::string to_text() const;
};

SelftestReport run_selftest(std::uint64_t seed);

}  // namespace qent

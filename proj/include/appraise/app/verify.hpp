#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace appraise::app {

struct VerifyItem {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Built-in numerical battery: Loewner and matrix counterexamples, zeta
/// values, interlacing fuzz and diminishing-returns fuzz.
std::vector<VerifyItem> run_verification(std::uint64_t seed = 0);

}  // namespace appraise::app

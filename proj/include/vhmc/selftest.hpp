#pragma once

#include <string>
#include <vector>

namespace vhmc {

struct SelftestCase {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Fast invariant checks (a few seconds): integrator properties, gradients, diagnostics oracles.
std::vector<SelftestCase> run_selftest();

}  // namespace vhmc

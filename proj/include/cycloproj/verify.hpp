#pragma once

// Named numerical checks over the whole library. The acceptance test and
// `cycloproj verify` both run these.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cycloproj {

struct VerifyConfig {
  std::optional<int> n;  // restricts checks that sweep over n
  std::uint64_t seed = 42;
  // "" (none), "clip" (solver spectral cap raised 5%), "ub" (upper bound shrunk 5%)
  std::string fault;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  std::string detail;
};

const std::vector<std::string>& check_names();
std::vector<std::string> fault_names();

// Runs the named checks (all of them when `only` is empty) in registry order.
// Unknown names or faults throw PreconditionError.
std::vector<CheckResult> run_checks(const VerifyConfig& cfg, const std::vector<std::string>& only = {});

// "PASS name (1.23 s): detail"
std::string format_result(const CheckResult& r);

}  // namespace cycloproj

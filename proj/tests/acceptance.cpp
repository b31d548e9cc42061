// Runs every named check at its stated tolerance and prints one line each.
#include <cstdio>

#include "cycloproj/verify.hpp"

int main() {
  const auto results = cycloproj::run_checks(cycloproj::VerifyConfig{});
  int failed = 0;
  for (const auto& r : results) {
    std::printf("%s\n", cycloproj::format_result(r).c_str());
    if (!r.passed) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failed, results.size());
  return failed == 0 ? 0 : 1;
}

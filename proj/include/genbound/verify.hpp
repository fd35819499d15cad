#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace genbound {

using Json = nlohmann::ordered_json;

/// One property evaluated over many cases. A case violates the property when
/// its statistic exceeds `limit` (or is NaN).
struct CheckResult {
  std::string name;
  double limit = 0.0;
  std::size_t checked = 0;
  std::size_t violations = 0;
  double worst = -std::numeric_limits<double>::infinity();
  std::optional<Json> counterexample;  // first violating case in case order
};

struct SuiteResult {
  std::string name;
  std::uint64_t seed = 0;
  std::size_t cases = 0;
  std::vector<CheckResult> checks;
  /// Reported but never counted as failures.
  std::vector<CheckResult> diagnostics;

  bool passed() const;
  const CheckResult& check(const std::string& name) const;
};

// Each suite is a pure function of (cases, seed); cases run concurrently and
// are merged in case order.

/// Mixture and geometric decompositions on random joints with random auxiliaries.
SuiteResult identity_suite(std::size_t cases, std::uint64_t seed);
/// Information inequalities on random joints for alpha in {0.1, ..., 0.9}.
SuiteResult inequality_suite(std::size_t cases, std::uint64_t seed);
/// Every bound against the exact generalization error of random enumerable learners.
SuiteResult fuzz_suite(std::size_t cases, std::uint64_t seed);
/// Three-hypothesis solver against the grid oracle, gradients and convexity.
SuiteResult erm_suite(std::size_t cases, std::uint64_t seed);

Json to_json(const SuiteResult& s);

/// Runs all suites (the ERM suite on max(1, min(50, cases / 10)) instances)
/// and assembles the versioned report.
Json verify_report(std::size_t cases, std::uint64_t seed);

}  // namespace genbound

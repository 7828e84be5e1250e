#pragma once

// The acceptance criteria as executable checks with fixed seeds.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "noncollide/verify.hpp"

namespace noncollide {

struct AcceptanceOptions {
  std::size_t threads = 1;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<TestReport> checks;
  double seconds = 0.0;
  bool pass() const;
};

nlohmann::ordered_json to_json(const CriterionResult& r);

/// Suites: "all", "exact" (1-5), "analytic" (6-8, 11), "stochastic" (9-10), "determinism" (12).
const std::vector<std::string>& suite_names();
std::vector<int> suite_criteria(const std::string& suite);

CriterionResult run_criterion(int id, const AcceptanceOptions& options);

/// Runs the criteria of a suite in order. In the "all" suite criterion 12 also
/// records whether every other criterion passed. `on_result` sees each result
/// as soon as it is available.
std::vector<CriterionResult> run_suite(const std::string& suite, const AcceptanceOptions& options,
                                       const std::function<void(const CriterionResult&)>& on_result = {});

}  // namespace noncollide

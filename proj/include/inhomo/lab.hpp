#pragma once

// Verification lab: ensembles that exercise each estimate of the library and
// reduce it to named checks with a value, a threshold and a verdict.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace inhomo {

struct LabCheck {
  std::string name;
  double value = 0.0;
  std::string relation;  // "<", "<=", ">" or ">="
  double threshold = 0.0;
  bool pass = false;
};

struct SuiteReport {
  std::string suite;
  std::vector<LabCheck> checks;
  nlohmann::json details;  // raw measurements behind the checks

  bool pass() const;
  std::vector<std::string> failing() const;
};

struct LabOptions {
  int samples = 20;
  int points = 64;
  std::uint64_t seed = 1;
};

// Throws DomainError for names outside lab_suite_names().
SuiteReport run_lab_suite(const std::string& name, const LabOptions& opts);

// Non-finite numbers become the strings "inf", "-inf" and "nan".
nlohmann::json suite_json(const SuiteReport& r, const LabOptions& opts);

// suite,check,value,threshold,verdict
std::string lab_summary_csv(const std::vector<SuiteReport>& reports);

}  // namespace inhomo

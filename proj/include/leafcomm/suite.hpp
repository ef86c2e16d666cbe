/*! \file suite.hpp
  \brief The regression suite: ten acceptance checks shared by `leafcomm suite`
  and the acceptance test binary.

  Every check draws its randomness from Rng(seed).split(id). The JSON report
  keeps wall-clock data under "timing" so the rest is reproducible byte for byte.
*/
#pragma once

#include "leafcomm/common.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace leafcomm {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string summary;
  nlohmann::ordered_json details;
  double seconds = 0;
};

struct SuiteOptions {
  u64 seed = 20240601;
  std::string fixture_dir;     // holds calculator_rows.json
  std::vector<int> criteria;   // empty: all ten
};

struct SuiteReport {
  std::vector<CriterionResult> results;
  bool passed() const;
  /// Reproducible part: parameters and per-criterion outcomes.
  nlohmann::ordered_json outcome_json(const SuiteOptions& o) const;
  /// outcome_json plus the "timing" field.
  nlohmann::ordered_json to_json(const SuiteOptions& o) const;
};

constexpr int kCriterionCount = 10;
std::string criterion_name(int id);

CriterionResult run_criterion(int id, const SuiteOptions& o);
SuiteReport run_suite(const SuiteOptions& o);

/// "PASS  3  randomized counting: ..." style line.
std::string criterion_line(const CriterionResult& r);

std::string library_version();

}  // namespace leafcomm

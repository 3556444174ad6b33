#pragma once

#include <string>
#include <vector>

namespace opeflow::verify {

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// The acceptance checks, in order.  Each is self-contained and pins its
/// tolerances in code.
std::vector<CheckResult> run_all();

/// Runs a single check by id (1-based); throws std::out_of_range otherwise.
CheckResult run_one(int id);

int check_count();

bool all_pass(const std::vector<CheckResult>& results);

/// Deterministic JSON for the whole suite (fixed field order, 15
/// significant digits for every float).
std::string report_json(const std::vector<CheckResult>& results);

}  // namespace opeflow::verify

// Acceptance suite: runs every criterion at its pinned tolerance and prints
// one pass/fail line each.  Exit status 0 only when everything passes.
#include <cstdio>
#include <cstring>
#include <string>

#include "opeflow/verify.hpp"

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strncmp(argv[i], "--criterion=", 12) == 0) only = std::atoi(argv[i] + 12);
  }

  std::vector<opeflow::verify::CheckResult> results;
  if (only > 0) {
    results.push_back(opeflow::verify::run_one(only));
  } else {
    results = opeflow::verify::run_all();
  }

  bool ok = true;
  for (const auto& r : results) {
    std::printf("[%s] criterion %d (%s): %s  [%.2fs]\n", r.pass ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.detail.c_str(), r.seconds);
    ok = ok && r.pass;
  }
  std::printf("%s\n", ok ? "acceptance: all criteria passed"
                         : "acceptance: at least one criterion failed");
  return ok ? 0 : 1;
}

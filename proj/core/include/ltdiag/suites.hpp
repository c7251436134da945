#pragma once

#include <filesystem>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace ltdiag {

struct SuiteCase {
  std::string name;
  bool passed = false;
  std::string message;
  double seconds = 0.0;
};

std::vector<std::string> suite_names();

// Runs the named module suite ("full" runs all of them), prints one line per
// case to `log` and writes JUnit XML to junit_out (skipped when empty).
// Returns 0 when every case passes, 1 on a failure and 2 for an unknown name.
int run_suite(const std::string& name, const std::filesystem::path& junit_out, std::ostream& log);

std::string junit_xml(const std::string& suite, const std::vector<SuiteCase>& cases);

}  // namespace ltdiag

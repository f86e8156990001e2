// Runs the acceptance criteria, one line per criterion.
//   acceptance            all eight
//   acceptance 3 6        only those
// Exit status 0 when every selected criterion passed.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "rankagg/verify.hpp"

int main(int argc, char** argv) {
  const auto& names = rankagg::verify::suiteNames();
  std::vector<std::size_t> selected;
  for (int i = 1; i < argc; ++i) {
    const auto k = std::strtoul(argv[i], nullptr, 10);
    if (k < 1 || k > names.size()) {
      std::fprintf(stderr, "acceptance: criterion must be 1..%zu, got '%s'\n", names.size(), argv[i]);
      return 1;
    }
    selected.push_back(k);
  }
  if (selected.empty()) {
    for (std::size_t k = 1; k <= names.size(); ++k) selected.push_back(k);
  }
  bool all = true;
  for (auto k : selected) {
    const auto report = rankagg::verify::runSuite(names[k - 1]);
    all = all && report.passed();
    std::printf("[%s] criterion %zu %s (%.1f s): %s\n", report.passed() ? "PASS" : "FAIL", k, report.name.c_str(),
                report.seconds, report.summary().c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}

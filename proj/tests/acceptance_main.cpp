// Runs the acceptance criteria and prints one line per criterion.
//
//   qsine_acceptance [ids...] [--strict] [--audit file.csv] [--report file.txt]
//
// Without --strict the exit status only reflects crashes, so the report can run
// under ctest while known-red criteria stay visible in the output. --report
// writes a copy of the output, since ctest hides the output of passing tests.

#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qsine/acceptance.hpp"

int main(int argc, char** argv) {
  bool strict = false;
  std::filesystem::path report_path;
  std::vector<int> ids;
  qsine::AcceptanceContext ctx;
  ctx.scratch_dir = std::filesystem::temp_directory_path() / "qsine_acceptance_scratch";
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--strict") == 0) {
      strict = true;
    } else if (std::strcmp(argv[i], "--report") == 0 && i + 1 < argc) {
      report_path = argv[++i];
    } else if (std::strcmp(argv[i], "--audit") == 0 && i + 1 < argc) {
      ctx.audit_csv = argv[++i];
    } else {
      for (int id : qsine::suite_criteria(argv[i])) ids.push_back(id);
    }
  }
  if (ids.empty()) ids = qsine::suite_criteria("all");

  std::ofstream report;
  if (!report_path.empty()) report.open(report_path, std::ios::binary);
  std::size_t passed = 0;
  for (int id : ids) {
    const qsine::CriterionResult r = qsine::run_criterion(id, ctx);
    std::ostringstream line;
    qsine::print_result(line, r);
    std::cout << line.str() << std::flush;
    if (report) report << line.str() << std::flush;
    if (r.pass) ++passed;
  }
  std::cout << passed << "/" << ids.size() << " criteria passed\n";
  if (report) report << passed << "/" << ids.size() << " criteria passed\n";
  return strict && passed != ids.size() ? 1 : 0;
}

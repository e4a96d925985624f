#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace qsine {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string measured;            // one-line summary of the measured values
  std::vector<std::string> info;   // extra measured details, not part of the verdict
  double seconds = 0.0;
};

/// Criterion ids of a named suite ("all", "basis-identities", "tables",
/// "stability", ...). Throws UsageError for unknown names.
std::vector<int> suite_criteria(const std::string& suite);
std::vector<std::string> suite_names();

struct AcceptanceContext {
  std::filesystem::path scratch_dir;  // criterion 12 writes two runs here
  std::filesystem::path audit_csv;    // criterion 8 writes its audit here when set
};

CriterionResult run_criterion(int id, const AcceptanceContext& context);

/// "[PASS] 3 name: measured" and indented info lines.
void print_result(std::ostream& out, const CriterionResult& r);

}  // namespace qsine

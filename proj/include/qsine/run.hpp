#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsine {

/// Bad command line or config: unknown command or key, malformed value.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ParamSpec {
  std::string key;
  std::string fallback;  // empty: no default
  std::string help;
};

/// Recognized commands, in display order.
const std::vector<std::string>& command_names();
/// Keys accepted by a command (output_dir and seed are accepted by all).
const std::vector<ParamSpec>& command_params(const std::string& command);
/// Union of all keys, for flag registration.
std::vector<ParamSpec> all_params();

struct RunConfig {
  std::string command;
  std::map<std::string, std::string> params;
  std::filesystem::path output_dir = ".";
  std::optional<std::uint64_t> seed;
};

enum ExitCode : int { exit_ok = 0, exit_failed_check = 1, exit_usage = 2, exit_numerical = 3 };

struct RunResult {
  int exit_code = exit_ok;
  std::vector<std::string> outputs;  // file names relative to output_dir
  std::string error;
};

/// Executes a command, writing CSV files and manifest.json into output_dir.
/// Never throws for bad input or numerical failure; both are reported in the
/// manifest and the exit code.
RunResult run(const RunConfig& config, std::ostream& log);

/// Typed read access to string parameters with per-command defaults; records
/// which keys were read so unknown keys can be rejected.
class Params {
 public:
  Params(std::string command, std::map<std::string, std::string> values);

  std::string text(const std::string& key);
  double real(const std::string& key);
  std::size_t count(const std::string& key);
  bool flag(const std::string& key);
  std::vector<double> reals(const std::string& key);
  std::vector<std::size_t> counts(const std::string& key);
  std::vector<std::string> texts(const std::string& key);

  /// Throws UsageError naming any supplied key the command never read.
  void reject_unused() const;
  /// Every read key with its effective value.
  const std::map<std::string, std::string>& resolved() const { return resolved_; }

 private:
  const std::string& raw(const std::string& key);

  std::string command_;
  std::map<std::string, std::string> values_;
  std::map<std::string, std::string> resolved_;
  std::set<std::string> read_;
};

/// "a,b,c" or the inclusive range "lo:step:hi".
std::vector<double> parse_real_list(const std::string& text);

/// 17 significant digits.
std::string format_real(double v);

}  // namespace qsine

#pragma once

// The unitarizer command line: argument parsing and the five commands, kept
// out of main() so they can be driven from tests.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace unitarizer::cli {

enum class Command { selftest, generate, check, unitarize, verify };

/// 0 success, 1 validation failure, 2 numerical or solver failure, 3 IO or parse failure.
enum ExitCode : int { ok = 0, validation = 1, numerical = 2, io = 3 };

struct RunConfig {
  Command command = Command::selftest;
  std::vector<std::filesystem::path> inputs;
  std::optional<std::filesystem::path> output;
  std::optional<std::filesystem::path> witness;
  std::optional<std::filesystem::path> trace_path;
  double eps = 1e-6;
  /// Unset means the per-command default.
  std::optional<double> tol;
  std::uint64_t seed = 0;
  std::size_t max_iter = 100000;
  std::size_t jobs = 1;
  // selftest
  std::size_t dim = 0;
  std::size_t trials = 100;
  double max_cond = 1e3;
  // generate
  std::optional<std::size_t> rep_dim;
  double cond_bound = 4.0;

  /// Throws ParameterOutOfRange: eps > 0, tol > 0 (selftest also takes 0),
  /// max_iter >= 1, trials >= 1.
  void validate() const;
};

int run(const RunConfig& config, std::ostream& out, std::ostream& err);

int cmd_selftest(const RunConfig& config, std::ostream& out);
int cmd_generate(const RunConfig& config, std::ostream& out);
int cmd_check(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_unitarize(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv and runs the selected command; errors become a single
/// "error[<category>]: <reason>" line on err.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Seed from UNITARIZER_SEED, if set and valid.
std::optional<std::uint64_t> seed_from_environment();

/// %.17g
std::string format_real(double v);

}  // namespace unitarizer::cli

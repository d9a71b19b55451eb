#pragma once

// Command-line front end: configuration, dispatch to the library and
// deterministic JSON/CSV emission.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kida/curve.hpp"

namespace kida {

enum class Subcommand { classify, kida, euler_char, enumerate_fields, density, report };
enum class OutputFormat { json, csv };

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int computational = 1;
inline constexpr int usage = 2;
inline constexpr int hypothesis_blocked = 3;
}  // namespace exit_code

struct RunConfig {
  Subcommand subcommand = Subcommand::report;
  std::optional<WeierstrassModel> curve;
  u64 p = 3;
  u64 max_prime = 1000;  // classify and report
  BigInt max_disc = 10000;  // enumerate-fields
  std::vector<u64> grid{1000, 10000, 100000, 1000000};

  // kida
  std::vector<u64> ramified;
  bool wild = false;
  std::vector<u64> exponents;  // pick one field; empty means all of them
  bool acknowledge_unresolved = false;

  // external inputs; flags win over the reference dataset
  std::optional<BigInt> lambda_base;
  std::optional<unsigned> mu_base;
  std::optional<std::string> sha;  // integer or "unknown"
  std::optional<unsigned> analytic_rank;

  std::optional<std::filesystem::path> cache_dir;  // overrides the environment
  bool no_cache = false;
  std::filesystem::path reference_data;
  OutputFormat format = OutputFormat::json;
  std::optional<std::filesystem::path> output;
  unsigned workers = 0;
};

/// "a1,a2,a3,a4,a6" into a nonsingular model; throws parse or
/// singular_curve.
WeierstrassModel parse_curve(std::string_view text);

/// Runs one subcommand and returns its exit code. Errors are reported on
/// err, results on out unless the config names an output file.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv into a RunConfig and runs it.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kida

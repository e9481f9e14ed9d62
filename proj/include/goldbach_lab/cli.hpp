#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "goldbach_lab/limits.hpp"
#include "goldbach_lab/sieve.hpp"

namespace goldbach_lab {

enum class OutputFormat { Csv, Json };

struct RunConfig {
  std::uint64_t n = 0;
  std::vector<std::uint64_t> n_list;
  unsigned workers = 1;
  LambdaGrid lambda_grid{{0.1, 1.0, 10.0}};
  std::optional<std::filesystem::path> table_cache;
  OutputFormat output_format = OutputFormat::Csv;
  std::string output_path = "-";  // "-" is standard output
  std::uint64_t seed = 0;
  std::size_t segment_size = kDefaultSegmentSlots;
  std::optional<std::filesystem::path> plot_data;
  std::string dist = "Gn";
  std::size_t count = 1000;
};

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kUsage = 2;
inline constexpr int kIo = 3;
inline constexpr int kInvariant = 4;
}  // namespace exit_code

/// Entry point of the `goldbach_lab` tool. Reads GOLDBACH_LAB_WORKERS as the
/// default for --workers. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace goldbach_lab

#include "goldbach_lab/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "goldbach_lab/cache.hpp"
#include "goldbach_lab/errors.hpp"
#include "goldbach_lab/partitions.hpp"
#include "goldbach_lab/stats.hpp"

namespace goldbach_lab {
namespace {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvariantViolation {
  std::string document;
  std::string message;
};

struct OutputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require_n(std::uint64_t n) {
  if (n <= 2) throw UsageError(fmt::format("--n must be > 2, got {}", n));
}

PartitionTable compute_table(const RunConfig& cfg, std::uint64_t n) {
  const auto flags = build_prime_flags(2 * n, cfg.segment_size, cfg.workers);
  return build_partition_table(flags, n, cfg.workers);
}

// Reuses the cache when it covers n; otherwise computes and (re)writes it.
PartitionTable obtain_table(const RunConfig& cfg, std::uint64_t n) {
  if (!cfg.table_cache) return compute_table(cfg, n);
  const auto& path = *cfg.table_cache;
  if (std::filesystem::exists(path)) {
    auto cached = load_partition_table(path);
    if (cached.n() >= n) return cached.n() == n ? std::move(cached) : cached.prefix(n);
  }
  auto table = compute_table(cfg, n);
  save_partition_table(table, path);
  return table;
}

void write_output(const std::string& target, const std::string& text, std::ostream& out) {
  if (target == "-" || target.empty()) {
    out << text;
    return;
  }
  const std::filesystem::path path(target);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw OutputError(fmt::format("cannot write {}", tmp.string()));
    f << text;
    if (!f) throw OutputError(fmt::format("write to {} failed", tmp.string()));
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw OutputError(fmt::format("cannot rename onto {}: {}", path.string(), ec.message()));
}

std::string cmd_count(const RunConfig& cfg) {
  require_n(cfg.n);
  const auto table = obtain_table(cfg, cfg.n);
  const auto counts = table.counts();
  const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
  const auto zeros = zero_partition_census(table).size();
  if (cfg.output_format == OutputFormat::Json) {
    nlohmann::ordered_json j{{"n", table.n()}, {"total", table.total()}, {"min_q", *lo}, {"max_q", *hi}, {"zero_count", zeros}};
    return j.dump(2) + "\n";
  }
  return fmt::format("n,total,min_q,max_q,zero_count\n{},{},{},{},{}\n", table.n(), table.total(), *lo, *hi, zeros);
}

std::string cmd_verify(const RunConfig& cfg) {
  require_n(cfg.n);
  const auto table = obtain_table(cfg, cfg.n);
  const std::vector<IdentityResidualReport> reports{product_identity_report(table, cfg.lambda_grid),
                                                    integrated_identity_report(table, cfg.lambda_grid)};
  auto doc = cfg.output_format == OutputFormat::Json ? to_json(reports) : to_csv(reports);
  for (const auto& r : reports)
    if (r.max_rel_residual() >= 1e-10)
      throw InvariantViolation{std::move(doc), fmt::format("{} identity residual {} at n={}", r.identity, r.max_rel_residual(), r.n)};
  return doc;
}

std::string cmd_converge(const RunConfig& cfg) {
  if (cfg.n_list.size() < 2) throw UsageError("--n-list needs at least two values");
  for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
    require_n(cfg.n_list[i]);
    if (i > 0 && cfg.n_list[i] <= cfg.n_list[i - 1]) throw UsageError("--n-list must be strictly increasing");
  }
  const auto table = obtain_table(cfg, cfg.n_list.back());
  const auto report = convergence_report(table, cfg.n_list);
  if (cfg.plot_data) {
    std::error_code ec;
    std::filesystem::create_directories(*cfg.plot_data, ec);
    if (ec) throw OutputError(fmt::format("cannot create {}: {}", cfg.plot_data->string(), ec.message()));
    for (auto n : cfg.n_list) {
      const auto t = table.prefix(n);
      write_output((*cfg.plot_data / fmt::format("cdf_Zn_n{}.txt", n)).string(),
                   cdf_overlay(exact_cdf(dist_Zn(t)), LimitCdf::Uniform01), std::cout);
      write_output((*cfg.plot_data / fmt::format("cdf_Gn_over_n_n{}.txt", n)).string(),
                   cdf_overlay(exact_cdf(dist_Gn_over_n(t)), LimitCdf::MaxOfTwoUniforms), std::cout);
    }
  }
  return cfg.output_format == OutputFormat::Json ? to_json(report) : to_csv(report);
}

std::string cmd_sample(const RunConfig& cfg) {
  static const std::vector<std::string> names{"Yn", "Gn", "Xn", "Zn", "Gn_over_n"};
  if (std::find(names.begin(), names.end(), cfg.dist) == names.end())
    throw UsageError(fmt::format("unknown distribution '{}' (expected Yn, Gn, Xn, Zn or Gn_over_n)", cfg.dist));
  require_n(cfg.n);
  const auto dist = [&]() -> KeyedDistribution {
    if (cfg.dist == "Xn") return dist_Xn(cfg.n);
    const auto table = obtain_table(cfg, cfg.n);
    if (cfg.dist == "Yn") return dist_Yn(table);
    if (cfg.dist == "Gn") return dist_Gn(table);
    if (cfg.dist == "Zn") return dist_Zn(table);
    return dist_Gn_over_n(table);
  }();
  const auto values = sample(dist, cfg.seed, cfg.count);
  if (cfg.output_format == OutputFormat::Json) {
    nlohmann::ordered_json j{{"dist", cfg.dist}, {"n", cfg.n}, {"seed", cfg.seed}, {"values", values}};
    return j.dump(2) + "\n";
  }
  std::string text = fmt::format("# dist={}\n# n={}\n# seed={}\nvalue\n", cfg.dist, cfg.n, cfg.seed);
  for (double v : values) text += fmt::format("{}\n", v);
  return text;
}

unsigned default_workers() {
  const char* env = std::getenv("GOLDBACH_LAB_WORKERS");
  if (env == nullptr || *env == '\0') return 1;
  unsigned w = 0;
  const std::string_view s(env);
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), w);
  if (ec != std::errc{} || end != s.data() + s.size() || w == 0)
    throw UsageError(fmt::format("GOLDBACH_LAB_WORKERS must be a positive integer, got '{}'", s));
  return w;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg.workers = default_workers();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kUsage;
  }

  CLI::App app{"Exact Goldbach-partition counts and limit-law diagnostics", "goldbach_lab"};
  app.require_subcommand(1);

  std::string format = "csv";
  std::string lambda_text = "0.1,1,10";
  std::string table_cache;
  std::string plot_data;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--workers", cfg.workers, "Worker threads (default GOLDBACH_LAB_WORKERS or 1)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--table-cache", table_cache, "Read or write the Q table cache (GBQT1)");
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", cfg.output_path, "Output file ('-' for standard output)");
    sub->add_option("--segment-size", cfg.segment_size, "Sieve segment size in odd slots")
        ->check(CLI::PositiveNumber);
  };

  auto* count = app.add_subcommand("count", "Q table summary: total, min/max Q, zero census size");
  count->add_option("--n", cfg.n, "Scale n (even numbers up to 2n)")->required();
  add_common(count);

  auto* verify = app.add_subcommand("verify", "Residuals of the product and integrated transform identities");
  verify->add_option("--n", cfg.n, "Scale n")->required();
  verify->add_option("--lambda-grid", lambda_text, "Comma-separated positive transform arguments");
  add_common(verify);

  auto* converge = app.add_subcommand("converge", "KS distances, moment gaps and asymptotic ratios per n");
  converge->add_option("--n-list", cfg.n_list, "Comma-separated increasing scales")->required()->delimiter(',');
  converge->add_option("--plot-data", plot_data, "Directory for CDF overlay files");
  add_common(converge);

  auto* sample_cmd = app.add_subcommand("sample", "Seeded draws from Yn, Gn, Xn, Zn or Gn_over_n");
  sample_cmd->add_option("--n", cfg.n, "Scale n")->required();
  sample_cmd->add_option("--dist", cfg.dist, "Distribution name");
  sample_cmd->add_option("--count", cfg.count, "Number of draws");
  sample_cmd->add_option("--seed", cfg.seed, "RNG seed");
  add_common(sample_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_code::kOk : exit_code::kUsage;
  }

  std::function<std::string(const RunConfig&)> command;
  if (count->parsed()) command = cmd_count;
  if (verify->parsed()) command = cmd_verify;
  if (converge->parsed()) command = cmd_converge;
  if (sample_cmd->parsed()) command = cmd_sample;

  try {
    cfg.output_format = format == "json" ? OutputFormat::Json : OutputFormat::Csv;
    try {
      cfg.lambda_grid = LambdaGrid::parse(lambda_text);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (!table_cache.empty()) cfg.table_cache = table_cache;
    if (!plot_data.empty()) cfg.plot_data = plot_data;
    write_output(cfg.output_path, command(cfg), out);
    return exit_code::kOk;
  } catch (const InvariantViolation& v) {
    try {
      write_output(cfg.output_path, v.document, out);
    } catch (const OutputError& e) {
      err << "error: " << e.what() << "\n";
    }
    err << "invariant violation: " << v.message << "\n";
    return exit_code::kInvariant;
  } catch (const CacheError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kIo;
  } catch (const OutputError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kIo;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kUsage;
  } catch (const std::length_error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kInvariant;
  }
}

}  // namespace goldbach_lab

// Synthetic experiment harness.
//
// Config keys (TOML):
//   type          "she" | "unweighted" | "weighted" | "exdshe" | "batched"
//   n             list of item counts
//   B             list of class counts (she: must be absent or [2];
//                 exdshe: ignored)
//   instances     instances per cell
//   realizations  realizations per instance (0 gives a headers-only CSV)
//   seed          base seed
//   algorithms    subset of ["ours", "random"]
//   epsilon, capital_c, mode
//   d, aggregator exdshe only; aggregator is "AND", "OR" or "at_least:p"
//   setup_cost    batched only; list of rho values
//   output_dir    directory for <name>.csv and <name>_table.csv
//   name          report base name (default "bench")
#ifndef SEQTEST_BENCH_HPP
#define SEQTEST_BENCH_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "seqtest/core.hpp"
#include "seqtest/exdshe.hpp"
#include "seqtest/policy.hpp"
#include "seqtest/random.hpp"

namespace seqtest {

enum class InstanceType { she, unweighted, weighted, exdshe, batched };

std::string type_name(InstanceType type);
InstanceType parse_type(const std::string& name);

struct ExperimentConfig {
  InstanceType type = InstanceType::weighted;
  std::vector<int> ns{100, 200};
  std::vector<int> bs{5, 10};
  int instances = 10;
  int realizations = 50;
  std::uint64_t seed = 1;
  std::vector<std::string> algorithms{"ours", "random"};
  PolicyConfig policy;
  int d = 2;
  std::string aggregator = "AND";
  std::vector<double> setup_costs{0.0};
  std::filesystem::path output_dir = ".";
  std::string name = "bench";

  /// Throws ParameterError on inconsistent settings.
  void validate() const;
};

/// Reads a TOML config; parse errors carry path and line.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Item draw shared by every cell with the same (n, instance index).
std::vector<Item> generate_items(InstanceType type, int n, Rng& rng);

/// B - 1 distinct interior cutoffs in {1, ..., W - 1}, as full alphas
/// (0, cutoffs..., W + 1). Throws InvalidInstance when W - 1 < B - 1.
std::vector<std::int64_t> generate_alphas(std::int64_t total_weight, int classes,
                                          Rng& rng);

/// Seeds of the generator streams for one (n, instance index).
std::uint64_t items_seed(std::uint64_t seed, int n, int index);
std::uint64_t cutoff_seed(std::uint64_t seed, int n, int index, int classes);

SscInstance generate_instance(const ExperimentConfig& config, int n, int b,
                              int index);
HalfspaceSystem generate_system(const ExperimentConfig& config, int n,
                                int index);

struct BenchRow {
  std::string type;
  int n = 0;
  int b = 0;  // classes, or d for exdshe
  double setup_cost = 0.0;
  int instance = 0;
  std::string algorithm;
  int realizations = 0;
  double mean_cost = 0.0;
  double std_error = 0.0;
  double lb_mean = 0.0;
  double ratio = 0.0;
  double build_seconds = 0.0;
  double simulate_seconds = 0.0;
};

struct AggregateRow {
  std::string type;
  int n = 0;
  int b = 0;
  double setup_cost = 0.0;
  std::string algorithm;
  int instances = 0;
  double mean_ratio = 0.0;       // average of per-instance ratios
  double share_within_1_5 = 0.0; // fraction of instances with ratio <= 1.5
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<AggregateRow> table;
  std::size_t list_builds = 0;  // list constructions performed
  std::size_t list_uses = 0;    // (instance, algorithm, cell) combinations
};

inline constexpr int kCsvSchemaVersion = 1;

/// Runs every cell; lists are built once per (n, instance, algorithm) and
/// reused across B and setup costs.
BenchReport run_experiment(const ExperimentConfig& config);

std::string rows_csv(const BenchReport& report);
std::string table_csv(const BenchReport& report);
/// Fixed-width text rendering of the aggregate table.
std::string table_text(const BenchReport& report);

/// Writes <output_dir>/<name>.csv and <name>_table.csv; returns the paths.
std::vector<std::filesystem::path> write_report(const ExperimentConfig& config,
                                                const BenchReport& report);

}  // namespace seqtest

#endif  // SEQTEST_BENCH_HPP

#ifndef TRIRL_BENCH_HPP
#define TRIRL_BENCH_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "trirl/attack.hpp"
#include "trirl/eval.hpp"

namespace trirl {

struct ManifestEntry {
  std::string id;
  std::filesystem::path image; // TNSR, relative to the manifest directory
  std::uint32_t label = 0;
  std::string oracle; // overrides the benchmark-wide oracle spec when set
};

/// {"entries": [{"id": ..., "image": ..., "label": ..., "oracle": ...}, ...]}
struct Manifest {
  std::vector<ManifestEntry> entries;
  std::filesystem::path base_dir;

  static Manifest load(const std::filesystem::path &path);
  void save(const std::filesystem::path &path) const;
};

struct BenchConfig {
  std::string oracle_spec;
  std::uint64_t ta_budget = 1000;
  std::uint64_t tarl_budget = 500;
  std::vector<double> sweep = default_rmse_sweep();
  unsigned workers = 1;
  /// Template for both controllers; controller, budget and seed are set per run.
  AttackConfig attack;
  /// Results, adversarial tensors and reports are written here when non-empty.
  std::filesystem::path out_dir;
};

struct BenchmarkOutput {
  std::vector<ResultRecord> records;
  BenchmarkReport report;
};

/// Attacks every correctly classified manifest image with TA and TARL.
/// Per-image failures become "error" records; the benchmark carries on.
BenchmarkOutput run_benchmark(const Manifest &manifest, const BenchConfig &cfg);

/// Seed used for entry `index`; shared by both controllers so runs are paired.
std::uint64_t entry_seed(std::uint64_t base_seed, std::size_t index);

/// Writes a synthetic benchmark of `count` polytope oracles (each with its own
/// params file) around random benign images, plus the manifest. Face distances
/// are drawn so the optimal RMSE spans roughly [min_rmse, max_rmse].
Manifest generate_polytope_benchmark(const std::filesystem::path &dir, std::size_t count,
                                     Shape shape, std::uint64_t seed, double min_rmse = 0.005,
                                     double max_rmse = 0.06);

} // namespace trirl

#endif // TRIRL_BENCH_HPP

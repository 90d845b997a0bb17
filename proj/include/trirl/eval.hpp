#ifndef TRIRL_EVAL_HPP
#define TRIRL_EVAL_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "trirl/attack.hpp"

namespace trirl {

/// RMSE success threshold C.
struct RmseBudget {
  double constant_c = 0.1;
};

const std::vector<double> &default_rmse_sweep();
void validate_sweep(const std::vector<double> &sweep);

/// Success: the label changed and RMSE(x, adv) <= C.
bool is_success(const ImageTensor &x, const ImageTensor &adv, Label y, Label adv_label,
                RmseBudget c);

/// Fills result.success_flags for every C in the sweep.
void annotate_success(AttackResult &result, const ImageTensor &x, Label y,
                      const std::vector<double> &sweep);

/// Percentage of results flagged successful at C. Throws ConfigError when empty.
double compute_asr(std::span<const AttackResult> results, RmseBudget c);

/// Rounds to `decimals` places, ties to even.
double round_half_even(double value, int decimals = 1);

/// Shortest text that round-trips C ("0.01", "0.5").
std::string format_c(double c);

/// One line of the results JSONL.
struct ResultRecord {
  std::string image_id;
  std::string oracle;
  std::string controller;
  std::uint64_t budget = 0;
  std::uint64_t seed = 0;
  /// "ok", "misclassified" (skipped before attacking) or "error".
  std::string status = "ok";
  std::string error;
  std::uint64_t queries_used = 0;
  std::optional<double> best_l2;
  std::optional<double> rmse;
  std::optional<std::uint32_t> label;
  std::optional<std::uint32_t> adv_label;
  std::map<double, bool> success;
  std::string adv_path;

  bool attacked() const { return status == "ok"; }
};

ResultRecord make_record(const std::string &image_id, const std::string &oracle,
                         Controller controller, const AttackConfig &cfg, const ImageTensor &x,
                         Label y, const AttackResult &result);

nlohmann::json to_json(const ResultRecord &record);
ResultRecord record_from_json(const nlohmann::json &j);
std::string to_jsonl(std::span<const ResultRecord> records);
std::vector<ResultRecord> read_jsonl(const std::filesystem::path &path);

struct BenchmarkReport {
  struct Row {
    std::string oracle;
    std::string controller;
    std::uint64_t budget = 0;
    std::size_t attacked = 0;
    std::size_t failed = 0; // error / misclassified entries, excluded from ASR
    std::map<double, std::size_t> successes;
    std::map<double, double> asr; // percent, unrounded
  };
  struct Diff {
    std::string oracle;
    std::map<double, double> value; // TARL ASR - TA ASR, unrounded
  };

  std::vector<double> sweep;
  std::vector<Row> rows;
  std::vector<Diff> diffs;

  const Row *find(const std::string &oracle, const std::string &controller) const;
};

BenchmarkReport build_report(std::span<const ResultRecord> records);

std::string render_table(const BenchmarkReport &report);
std::string render_csv(const BenchmarkReport &report);
nlohmann::json report_to_json(const BenchmarkReport &report);

} // namespace trirl

#endif // TRIRL_EVAL_HPP

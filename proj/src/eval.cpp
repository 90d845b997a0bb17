#include "trirl/eval.hpp"

#include <algorithm>
#include <cfenv>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "trirl/error.hpp"

namespace trirl {

const std::vector<double> &default_rmse_sweep() {
  static const std::vector<double> sweep = {0.01, 0.05, 0.1, 0.5};
  return sweep;
}

void validate_sweep(const std::vector<double> &sweep) {
  if (sweep.empty())
    throw ConfigError("RMSE sweep is empty");
  for (double c : sweep)
    if (!(c > 0.0 && c <= 1.0))
      throw ConfigError("RMSE constant C must lie in (0, 1]");
}

bool is_success(const ImageTensor &x, const ImageTensor &adv, Label y, Label adv_label,
                RmseBudget c) {
  if (adv_label == y)
    return false;
  return rmse(x, adv) <= c.constant_c;
}

void annotate_success(AttackResult &result, const ImageTensor &x, Label y,
                      const std::vector<double> &sweep) {
  result.success_flags.clear();
  for (double c : sweep)
    result.success_flags[c] = result.best_adv && result.best_label &&
                              is_success(x, *result.best_adv, y, *result.best_label, {c});
}

double compute_asr(std::span<const AttackResult> results, RmseBudget c) {
  if (results.empty())
    throw ConfigError("cannot compute ASR over zero results");
  const auto wins = std::count_if(results.begin(), results.end(), [&](const AttackResult &r) {
    const auto it = r.success_flags.find(c.constant_c);
    return it != r.success_flags.end() && it->second;
  });
  return 100.0 * static_cast<double>(wins) / static_cast<double>(results.size());
}

double round_half_even(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  const int saved = std::fegetround();
  std::fesetround(FE_TONEAREST);
  // Snap away representation noise (96.45 is stored as 96.4499...).
  const double scaled = std::round(value * scale * 1e6) / 1e6;
  const double rounded = std::nearbyint(scaled);
  std::fesetround(saved);
  return rounded / scale;
}

std::string format_c(double c) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, c);
  return std::string(buf, res.ptr);
}

ResultRecord make_record(const std::string &image_id, const std::string &oracle,
                         Controller controller, const AttackConfig &cfg, const ImageTensor &x,
                         Label y, const AttackResult &result) {
  ResultRecord r;
  r.image_id = image_id;
  r.oracle = oracle;
  r.controller = to_string(controller);
  r.budget = cfg.max_queries;
  r.seed = cfg.seed.value;
  r.queries_used = result.queries_used;
  r.label = y.class_index;
  r.best_l2 = result.best_l2;
  if (result.best_adv)
    r.rmse = rmse(x, *result.best_adv);
  if (result.best_label)
    r.adv_label = result.best_label->class_index;
  r.success = result.success_flags;
  return r;
}

nlohmann::json to_json(const ResultRecord &r) {
  nlohmann::json success = nlohmann::json::object();
  for (const auto &[c, ok] : r.success)
    success[format_c(c)] = ok;
  auto opt = [](const auto &o) -> nlohmann::json { return o ? nlohmann::json(*o) : nlohmann::json(); };
  nlohmann::json j = {{"image_id", r.image_id},     {"oracle", r.oracle},
                      {"controller", r.controller}, {"budget", r.budget},
                      {"queries_used", r.queries_used},
                      {"best_l2", opt(r.best_l2)},  {"rmse", opt(r.rmse)},
                      {"label", opt(r.label)},      {"adv_label", opt(r.adv_label)},
                      {"success", success},         {"seed", r.seed},
                      {"status", r.status}};
  if (!r.error.empty())
    j["error"] = r.error;
  if (!r.adv_path.empty())
    j["adv_path"] = r.adv_path;
  return j;
}

ResultRecord record_from_json(const nlohmann::json &j) {
  try {
    ResultRecord r;
    r.image_id = j.at("image_id").get<std::string>();
    r.oracle = j.value("oracle", "");
    r.controller = j.at("controller").get<std::string>();
    r.budget = j.value("budget", std::uint64_t{0});
    r.seed = j.value("seed", std::uint64_t{0});
    r.status = j.value("status", "ok");
    r.error = j.value("error", "");
    r.queries_used = j.value("queries_used", std::uint64_t{0});
    if (j.contains("best_l2") && !j["best_l2"].is_null())
      r.best_l2 = j["best_l2"].get<double>();
    if (j.contains("rmse") && !j["rmse"].is_null())
      r.rmse = j["rmse"].get<double>();
    if (j.contains("label") && !j["label"].is_null())
      r.label = j["label"].get<std::uint32_t>();
    if (j.contains("adv_label") && !j["adv_label"].is_null())
      r.adv_label = j["adv_label"].get<std::uint32_t>();
    const nlohmann::json success = j.value("success", nlohmann::json::object());
    for (const auto &[key, ok] : success.items())
      r.success[std::stod(key)] = ok.get<bool>();
    r.adv_path = j.value("adv_path", "");
    return r;
  } catch (const std::exception &e) {
    throw ConfigError(std::string("malformed result record: ") + e.what());
  }
}

std::string to_jsonl(std::span<const ResultRecord> records) {
  std::string out;
  for (const auto &r : records)
    out += to_json(r).dump() + "\n";
  return out;
}

std::vector<ResultRecord> read_jsonl(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open " + path.string());
  std::vector<ResultRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded())
      throw ConfigError("malformed JSONL line in " + path.string());
    out.push_back(record_from_json(j));
  }
  return out;
}

const BenchmarkReport::Row *BenchmarkReport::find(const std::string &oracle,
                                                  const std::string &controller) const {
  for (const auto &row : rows)
    if (row.oracle == oracle && row.controller == controller)
      return &row;
  return nullptr;
}

BenchmarkReport build_report(std::span<const ResultRecord> records) {
  if (records.empty())
    throw ConfigError("no result records to report on");
  BenchmarkReport report;
  std::set<double> sweep;
  for (const auto &r : records)
    for (const auto &[c, ok] : r.success)
      sweep.insert(c);
  report.sweep.assign(sweep.begin(), sweep.end());

  for (const auto &r : records) {
    auto it = std::find_if(report.rows.begin(), report.rows.end(), [&](const auto &row) {
      return row.oracle == r.oracle && row.controller == r.controller;
    });
    if (it == report.rows.end()) {
      report.rows.push_back({r.oracle, r.controller, r.budget, 0, 0, {}, {}});
      it = std::prev(report.rows.end());
    }
    it->budget = std::max(it->budget, r.budget);
    if (!r.attacked()) {
      ++it->failed;
      continue;
    }
    ++it->attacked;
    for (double c : report.sweep) {
      const auto s = r.success.find(c);
      it->successes[c] += (s != r.success.end() && s->second) ? 1 : 0;
    }
  }
  for (auto &row : report.rows)
    for (double c : report.sweep)
      row.asr[c] = row.attacked == 0 ? 0.0
                                     : 100.0 * static_cast<double>(row.successes[c]) /
                                           static_cast<double>(row.attacked);

  std::vector<std::string> oracles;
  for (const auto &row : report.rows)
    if (std::find(oracles.begin(), oracles.end(), row.oracle) == oracles.end())
      oracles.push_back(row.oracle);
  for (const auto &oracle : oracles) {
    const auto *ta = report.find(oracle, "TA");
    const auto *tarl = report.find(oracle, "TARL");
    if (!ta || !tarl)
      continue;
    BenchmarkReport::Diff diff{oracle, {}};
    for (double c : report.sweep)
      diff.value[c] = tarl->asr.at(c) - ta->asr.at(c);
    report.diffs.push_back(std::move(diff));
  }
  return report;
}

namespace {

std::string fixed1(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(1) << round_half_even(v, 1);
  std::string s = os.str();
  return s == "-0.0" ? "0.0" : s;
}

} // namespace

std::string render_table(const BenchmarkReport &report) {
  std::ostringstream os;
  os << std::left << std::setw(16) << "oracle" << std::setw(12) << "controller" << std::setw(8)
     << "budget" << std::setw(10) << "attacked";
  for (double c : report.sweep)
    os << std::right << std::setw(10) << ("C=" + format_c(c));
  os << '\n';
  for (const auto &row : report.rows) {
    os << std::left << std::setw(16) << row.oracle << std::setw(12) << row.controller
       << std::setw(8) << row.budget << std::setw(10) << row.attacked;
    for (double c : report.sweep)
      os << std::right << std::setw(10) << fixed1(row.asr.at(c));
    os << '\n';
  }
  for (const auto &diff : report.diffs) {
    os << std::left << std::setw(16) << diff.oracle << std::setw(12) << "Diff." << std::setw(8)
       << "" << std::setw(10) << "";
    for (double c : report.sweep)
      os << std::right << std::setw(10) << fixed1(diff.value.at(c));
    os << '\n';
  }
  return os.str();
}

std::string render_csv(const BenchmarkReport &report) {
  std::ostringstream os;
  os << "oracle,controller,budget,attacked";
  for (double c : report.sweep)
    os << ",C=" << format_c(c);
  os << '\n';
  for (const auto &row : report.rows) {
    os << row.oracle << ',' << row.controller << ',' << row.budget << ',' << row.attacked;
    for (double c : report.sweep)
      os << ',' << fixed1(row.asr.at(c));
    os << '\n';
  }
  for (const auto &diff : report.diffs) {
    os << diff.oracle << ",Diff.,,";
    for (double c : report.sweep)
      os << ',' << fixed1(diff.value.at(c));
    os << '\n';
  }
  return os.str();
}

nlohmann::json report_to_json(const BenchmarkReport &report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto &row : report.rows) {
    nlohmann::json asr = nlohmann::json::object();
    for (double c : report.sweep)
      asr[format_c(c)] = round_half_even(row.asr.at(c), 1);
    rows.push_back({{"oracle", row.oracle},
                    {"controller", row.controller},
                    {"budget", row.budget},
                    {"attacked", row.attacked},
                    {"failed", row.failed},
                    {"asr", asr}});
  }
  nlohmann::json diffs = nlohmann::json::array();
  for (const auto &diff : report.diffs) {
    nlohmann::json v = nlohmann::json::object();
    for (double c : report.sweep)
      v[format_c(c)] = round_half_even(diff.value.at(c), 1);
    diffs.push_back({{"oracle", diff.oracle}, {"diff", v}});
  }
  return {{"sweep", report.sweep}, {"rows", rows}, {"diffs", diffs}};
}

} // namespace trirl

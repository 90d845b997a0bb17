// trirl: command-line front end for the triangle attack engine.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "trirl/attack.hpp"
#include "trirl/bench.hpp"
#include "trirl/error.hpp"
#include "trirl/eval.hpp"
#include "trirl/log.hpp"
#include "trirl/oracle_spec.hpp"
#include "trirl/ta_failure.hpp"
#include "trirl/tnsr_io.hpp"

namespace fs = std::filesystem;
using namespace trirl;

namespace {

std::vector<double> parse_doubles(const std::string &csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(std::stod(item));
  return out;
}

// Options shared by `attack` and `bench` for tuning the attack itself.
struct TuningOptions {
  std::string reward = "neg-l2";
  bool strict_explore = false;
  double freq_ratio = 0.1;
  std::uint32_t iters = 2;
  double alpha_start = AttackConfig{}.alpha_start;
  double lr = 0.1;
  double discount = 0.9;
  double exploration = 0.1;
  double ta_gamma = 0.01;
  double ta_lambda = 2.0;
  std::uint64_t seed = 0;

  void add_to(CLI::App *app) {
    app->add_option("--seed", seed, "Base seed");
    app->add_option("--reward", reward, "Reward rule")->check(CLI::IsMember({"neg-l2", "inv-l2"}));
    app->add_flag("--explore-increase", strict_explore,
                  "Exploration always takes action 0 instead of a random action");
    app->add_option("--freq-ratio", freq_ratio, "Fraction of low-frequency DCT coefficients");
    app->add_option("--iters", iters, "Beta binary-search iterations per subspace");
    app->add_option("--alpha-start", alpha_start, "Initial learned angle (radians)");
    app->add_option("--lr", lr, "Q-learning rate");
    app->add_option("--discount", discount, "Q-learning discount factor");
    app->add_option("--exploration", exploration, "Epsilon-greedy exploration rate");
    app->add_option("--ta-gamma", ta_gamma, "TA change rate");
    app->add_option("--ta-lambda", ta_lambda, "TA decrease multiplier");
  }

  AttackConfig config() const {
    AttackConfig cfg;
    cfg.reward_mode = reward == "inv-l2" ? RewardMode::InverseL2 : RewardMode::NegativeL2;
    cfg.exploration_mode = strict_explore ? ExplorationMode::AlwaysIncrease : ExplorationMode::Uniform;
    cfg.freq_ratio = freq_ratio;
    cfg.iters_per_subspace = iters;
    cfg.alpha_start = alpha_start;
    cfg.rl = RlHyperparams{lr, discount, exploration};
    cfg.ta_gamma = ta_gamma;
    cfg.ta_lambda = ta_lambda;
    cfg.seed = Seed{seed};
    return cfg;
  }
};

int run_attack_cmd(const std::string &image_path, std::uint32_t label, const std::string &spec,
                   const std::string &controller, std::uint64_t budget, const std::string &start,
                   const std::string &sweep_csv, bool dump_qtable, const std::string &out,
                   const TuningOptions &tuning) {
  const ImageTensor x = read_tensor(image_path);
  auto oracle = make_oracle(spec);
  AttackConfig cfg = tuning.config();
  cfg.controller = parse_controller(controller);
  cfg.max_queries = budget;
  const auto sweep = parse_doubles(sweep_csv);
  validate_sweep(sweep);

  std::optional<ImageTensor> start_img;
  if (!start.empty())
    start_img = read_tensor(start);
  AttackResult result =
      run_attack(x, Label{label}, *oracle, cfg, start_img ? &*start_img : nullptr);
  annotate_success(result, x, Label{label}, sweep);

  const fs::path out_path(out);
  const std::string image_id = fs::path(image_path).stem().string();
  ResultRecord record = make_record(image_id, OracleSpec::parse(spec).family(), cfg.controller,
                                    cfg, x, Label{label}, result);
  if (out_path.has_parent_path())
    fs::create_directories(out_path.parent_path());
  if (result.best_adv) {
    const fs::path rel = fs::path("adv") / (image_id + "_" + to_string(cfg.controller) + ".tnsr");
    fs::create_directories(out_path.parent_path() / "adv");
    write_tensor(out_path.parent_path() / rel, *result.best_adv);
    record.adv_path = rel.string();
  }
  std::ofstream(out_path, std::ios::trunc) << to_json(record).dump() << '\n';
  if (dump_qtable && result.qtable) {
    fs::path qpath = out_path;
    qpath.replace_extension(".qtable.json");
    write_json_file(qpath, qtable_to_json(*result.qtable, cfg.grid()));
  }
  std::cout << to_json(record).dump() << '\n';
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  init_logging_from_env();
  CLI::App app{"Decision-based triangle attack engine (TA / TARL)"};
  app.require_subcommand(1);

  // attack
  auto *attack = app.add_subcommand("attack", "Attack one image");
  std::string image, oracle_spec, controller = "tarl", out, start, sweep_csv = "0.01,0.05,0.1,0.5";
  std::uint32_t label = 0;
  std::uint64_t budget = 500;
  bool dump_qtable = false;
  TuningOptions attack_tuning;
  attack->add_option("--image", image, "Benign image (TNSR)")->required();
  attack->add_option("--label", label, "True label of the image")->required();
  attack->add_option("--oracle", oracle_spec, "Oracle spec")->required();
  attack->add_option("--controller", controller, "ta or tarl")
      ->check(CLI::IsMember({"ta", "tarl", "TA", "TARL"}));
  attack->add_option("--budget", budget, "Query budget Q");
  attack->add_flag("--dump-qtable", dump_qtable, "Write the final Q-table next to --out");
  attack->add_option("--start", start, "Starting adversarial image (TNSR) instead of random init");
  attack->add_option("--c", sweep_csv, "RMSE constants, comma separated");
  attack->add_option("--out", out, "Result JSONL path")->required();
  attack_tuning.add_to(attack);

  // bench
  auto *bench = app.add_subcommand("bench", "Run TA and TARL over a manifest");
  std::string manifest_path, bench_oracle, out_dir, budgets = "1000,500",
                                                    bench_sweep = "0.01,0.05,0.1,0.5";
  unsigned workers = 1;
  TuningOptions bench_tuning;
  bench->add_option("--manifest", manifest_path, "Manifest JSON")->required();
  bench->add_option("--oracle", bench_oracle, "Oracle spec for entries without their own");
  bench->add_option("--out-dir", out_dir, "Output directory")->required();
  bench->add_option("--budgets", budgets, "TA budget,TARL budget");
  bench->add_option("--c", bench_sweep, "RMSE constants, comma separated");
  bench->add_option("--workers", workers, "Parallel attacks");
  bench_tuning.add_to(bench);

  // report
  auto *report = app.add_subcommand("report", "Summarize result JSONL files");
  std::vector<std::string> inputs;
  std::string format = "table";
  report->add_option("--in", inputs, "Result JSONL files")->required();
  report->add_option("--format", format, "table, csv or json")
      ->check(CLI::IsMember({"table", "csv", "json"}));

  // fixture
  auto *fixture = app.add_subcommand("fixture", "Write a ta-failure fixture's images");
  std::string fixture_id, fixture_dir;
  fixture->add_option("--id", fixture_id, "Fixture id (f1..f5)")->required();
  fixture->add_option("--out-dir", fixture_dir, "Output directory")->required();

  // generate
  auto *generate = app.add_subcommand("generate", "Write a synthetic polytope benchmark");
  std::string gen_dir;
  std::size_t gen_count = 50;
  std::vector<std::uint32_t> gen_shape = {8, 8, 1};
  std::uint64_t gen_seed = 1;
  generate->add_option("--out-dir", gen_dir, "Output directory")->required();
  generate->add_option("--count", gen_count, "Number of images");
  generate->add_option("--shape", gen_shape, "w h c")->expected(3);
  generate->add_option("--seed", gen_seed, "Generator seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*attack)
      return run_attack_cmd(image, label, oracle_spec, controller, budget, start, sweep_csv,
                            dump_qtable, out, attack_tuning);

    if (*bench) {
      const auto b = parse_doubles(budgets);
      if (b.size() != 2)
        throw ConfigError("--budgets needs two values: TA,TARL");
      BenchConfig cfg;
      cfg.oracle_spec = bench_oracle;
      cfg.ta_budget = static_cast<std::uint64_t>(b[0]);
      cfg.tarl_budget = static_cast<std::uint64_t>(b[1]);
      cfg.sweep = parse_doubles(bench_sweep);
      cfg.workers = workers;
      cfg.attack = bench_tuning.config();
      cfg.out_dir = out_dir;
      const auto output = run_benchmark(Manifest::load(manifest_path), cfg);
      std::cout << render_table(output.report);
      return 0;
    }

    if (*report) {
      std::vector<ResultRecord> records;
      for (const auto &path : inputs) {
        auto part = read_jsonl(path);
        records.insert(records.end(), part.begin(), part.end());
      }
      const auto rep = build_report(records);
      if (format == "csv")
        std::cout << render_csv(rep);
      else if (format == "json")
        std::cout << report_to_json(rep).dump(2) << '\n';
      else
        std::cout << render_table(rep);
      return 0;
    }

    if (*fixture) {
      const auto fx = make_ta_failure_fixture(fixture_id);
      fs::create_directories(fixture_dir);
      write_tensor(fs::path(fixture_dir) / "x.tnsr", fx.x);
      write_tensor(fs::path(fixture_dir) / "start.tnsr", fx.start);
      std::cout << "label " << fx.label.class_index << '\n';
      return 0;
    }

    if (*generate) {
      const auto m = generate_polytope_benchmark(
          gen_dir, gen_count, Shape{gen_shape[0], gen_shape[1], gen_shape[2]}, gen_seed);
      std::cout << "wrote " << m.entries.size() << " entries to "
                << (fs::path(gen_dir) / "manifest.json").string() << '\n';
      return 0;
    }
  } catch (const std::exception &e) {
    spdlog::error("{}", e.what());
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

#include "trirl/bench.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <thread>

#include <spdlog/spdlog.h>

#include "trirl/error.hpp"
#include "trirl/oracle_spec.hpp"
#include "trirl/tnsr_io.hpp"

namespace trirl {

Manifest Manifest::load(const std::filesystem::path &path) {
  const nlohmann::json j = read_json_file(path);
  Manifest m;
  m.base_dir = path.parent_path();
  try {
    for (const auto &e : j.at("entries")) {
      ManifestEntry entry;
      entry.id = e.at("id").get<std::string>();
      entry.image = e.at("image").get<std::string>();
      entry.label = e.at("label").get<std::uint32_t>();
      entry.oracle = e.value("oracle", "");
      m.entries.push_back(std::move(entry));
    }
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError("bad manifest " + path.string() + ": " + e.what());
  }
  return m;
}

void Manifest::save(const std::filesystem::path &path) const {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto &e : this->entries) {
    nlohmann::json j = {{"id", e.id}, {"image", e.image.string()}, {"label", e.label}};
    if (!e.oracle.empty())
      j["oracle"] = e.oracle;
    entries.push_back(std::move(j));
  }
  write_json_file(path, {{"entries", entries}});
}

std::uint64_t entry_seed(std::uint64_t base_seed, std::size_t index) {
  return splitmix64(base_seed ^ splitmix64(static_cast<std::uint64_t>(index)));
}

namespace {

std::filesystem::path resolve(const Manifest &m, const std::filesystem::path &p) {
  return p.is_relative() && !m.base_dir.empty() ? m.base_dir / p : p;
}

// Attacks one manifest entry with both controllers.
std::vector<ResultRecord> attack_entry(const Manifest &manifest, std::size_t index,
                                       const BenchConfig &cfg) {
  const ManifestEntry &entry = manifest.entries[index];
  const std::string spec = entry.oracle.empty() ? cfg.oracle_spec : entry.oracle;
  const Controller controllers[] = {Controller::TA, Controller::TARL};
  const std::uint64_t seed = entry_seed(cfg.attack.seed.value, index);

  std::vector<ResultRecord> out;
  auto fail_all = [&](const std::string &status, const std::string &why) {
    out.clear();
    for (Controller c : controllers) {
      ResultRecord r;
      r.image_id = entry.id;
      r.controller = to_string(c);
      r.budget = c == Controller::TA ? cfg.ta_budget : cfg.tarl_budget;
      r.seed = seed;
      r.label = entry.label;
      r.status = status;
      r.error = why;
      try {
        r.oracle = OracleSpec::parse(spec).family();
      } catch (const Error &) {
        r.oracle = "unknown";
      }
      out.push_back(std::move(r));
    }
    return out;
  };

  try {
    const ImageTensor x = read_tensor(resolve(manifest, entry.image));
    const Label y{entry.label};
    const std::string family = OracleSpec::parse(spec).family();
    for (Controller c : controllers) {
      auto oracle = make_oracle(spec, manifest.base_dir);
      if (!(oracle->predict(x) == y))
        return fail_all("misclassified", "image is not classified as its label");
      AttackConfig acfg = cfg.attack;
      acfg.controller = c;
      acfg.max_queries = c == Controller::TA ? cfg.ta_budget : cfg.tarl_budget;
      acfg.seed = Seed{seed};
      AttackResult result = run_attack(x, y, *oracle, acfg);
      annotate_success(result, x, y, cfg.sweep);
      ResultRecord record = make_record(entry.id, family, c, acfg, x, y, result);
      if (!cfg.out_dir.empty() && result.best_adv) {
        const std::filesystem::path rel =
            std::filesystem::path("adv") / (entry.id + "_" + to_string(c) + ".tnsr");
        write_tensor(cfg.out_dir / rel, *result.best_adv);
        record.adv_path = rel.string();
      }
      out.push_back(std::move(record));
    }
  } catch (const Error &e) {
    spdlog::warn("entry {} failed: {}", entry.id, e.what());
    return fail_all("error", e.what());
  }
  return out;
}

} // namespace

BenchmarkOutput run_benchmark(const Manifest &manifest, const BenchConfig &cfg) {
  if (manifest.entries.empty())
    throw ConfigError("benchmark manifest is empty");
  validate_sweep(cfg.sweep);
  if (cfg.ta_budget == 0 || cfg.tarl_budget == 0)
    throw ConfigError("benchmark budgets must be positive");
  if (!cfg.out_dir.empty())
    std::filesystem::create_directories(cfg.out_dir / "adv");

  std::vector<std::vector<ResultRecord>> per_entry(manifest.entries.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < manifest.entries.size(); i = next++) {
      per_entry[i] = attack_entry(manifest, i, cfg);
      spdlog::debug("finished entry {}", manifest.entries[i].id);
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(cfg.workers, manifest.entries.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < n; ++i)
      pool.emplace_back(worker);
  }

  BenchmarkOutput output;
  for (auto &records : per_entry)
    for (auto &r : records)
      output.records.push_back(std::move(r));
  output.report = build_report(output.records);

  if (!cfg.out_dir.empty()) {
    std::ofstream(cfg.out_dir / "results.jsonl", std::ios::trunc) << to_jsonl(output.records);
    write_json_file(cfg.out_dir / "report.json", report_to_json(output.report));
    std::ofstream(cfg.out_dir / "report.txt", std::ios::trunc) << render_table(output.report);
  }
  return output;
}

Manifest generate_polytope_benchmark(const std::filesystem::path &dir, std::size_t count,
                                     Shape shape, std::uint64_t seed, double min_rmse,
                                     double max_rmse) {
  std::filesystem::create_directories(dir);
  Rng rng(seed);
  const double scale = std::sqrt(static_cast<double>(shape.size()));
  Manifest manifest;
  manifest.base_dir = dir;
  for (std::size_t i = 0; i < count; ++i) {
    ImageTensor x(shape);
    for (double &v : x.data())
      v = 0.3 + 0.4 * rng.uniform();
    x = round_to_f32(x);

    const std::size_t num_faces = 2 + rng.below(3);
    std::vector<PolytopeOracle::Face> faces;
    for (std::size_t f = 0; f < num_faces; ++f) {
      ImageTensor normal(shape);
      for (double &v : normal.data())
        v = rng.normal();
      normal = (1.0 / l2_norm(normal)) * normal;
      const double target_rmse = min_rmse + (max_rmse - min_rmse) * rng.uniform();
      // Face at l2 distance target_rmse * sqrt(n) from x, x on the inside.
      const double offset = -dot(normal, x) - target_rmse * scale;
      faces.push_back({std::move(normal), offset});
    }
    const PolytopeOracle oracle(std::move(faces));

    const std::string id = "img" + std::to_string(i);
    write_tensor(dir / (id + ".tnsr"), x);
    write_json_file(dir / (id + ".polytope.json"), to_params_json(oracle));
    manifest.entries.push_back({id, id + ".tnsr", 0, "synthetic:polytope:" + id + ".polytope.json"});
  }
  manifest.save(dir / "manifest.json");
  return manifest;
}

} // namespace trirl

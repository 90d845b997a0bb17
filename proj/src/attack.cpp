#include "trirl/attack.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include <spdlog/spdlog.h>

#include "trirl/error.hpp"
#include "trirl/frequency.hpp"
#include "trirl/geometry.hpp"

namespace trirl {

std::string to_string(Controller c) { return c == Controller::TA ? "TA" : "TARL"; }

Controller parse_controller(const std::string &name) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "ta")
    return Controller::TA;
  if (lower == "tarl")
    return Controller::TARL;
  throw ConfigError("unknown controller '" + name + "' (expected ta or tarl)");
}

void AttackConfig::validate() const {
  if (max_queries == 0)
    throw ConfigError("max_queries must be positive");
  if (iters_per_subspace == 0)
    throw ConfigError("iters_per_subspace must be positive");
  if (!(beta_lower > 0.0 && beta_lower < std::numbers::pi / 2.0))
    throw ConfigError("beta_lower must lie in (0, pi/2)");
  if (!(freq_ratio > 0.0 && freq_ratio <= 1.0))
    throw ConfigError("freq_ratio must lie in (0, 1]");
  if (!(alpha_min > 0.0 && alpha_max < std::numbers::pi))
    throw ConfigError("alpha range must lie inside (0, pi)");
  if (!(ta_gamma > 0.0) || !(ta_lambda > 0.0))
    throw ConfigError("TA change rate and multiplier must be positive");
  if (!(init_tol > 0.0))
    throw ConfigError("initialization tolerance must be positive");
  rl.validate();
  const AlphaGrid g = grid();
  if (initial_qtable && (initial_qtable->num_states() != g.num_states ||
                         initial_qtable->num_actions() != 2))
    throw ConfigError("carried-over Q-table does not match the alpha grid");
}

AlphaGrid AttackConfig::grid() const { return AlphaGrid::make(alpha_min, alpha_max, alpha_step); }

double ta_alpha_step(double alpha, bool was_adversarial, const AttackConfig &cfg) {
  const double next = was_adversarial ? alpha + cfg.ta_gamma : alpha - cfg.ta_lambda * cfg.ta_gamma;
  return std::clamp(next, cfg.alpha_min, cfg.alpha_max);
}

namespace {

// Issues one budgeted query, records it and tracks the incumbent.
class QuerySession {
public:
  QuerySession(const ImageTensor &x, Label y, BudgetedOracle &oracle, AttackTrace &trace)
      : x_(x), y_(y), oracle_(oracle), trace_(trace) {}

  struct Outcome {
    bool adversarial = false;
    double l2 = 0.0;
    bool improved = false;
  };

  Outcome query(const ImageTensor &img, double alpha) {
    const OracleVerdict verdict = oracle_.classify(img);
    Outcome out;
    out.adversarial = !(verdict.label == y_);
    out.l2 = l2_distance(x_, img);
    trace_.entries.push_back({alpha, out.l2, out.adversarial, verdict.query_index});
    if (out.adversarial && (!best_l2_ || out.l2 < *best_l2_)) {
      best_ = img;
      best_l2_ = out.l2;
      best_label_ = verdict.label;
      out.improved = true;
    }
    return out;
  }

  const std::optional<ImageTensor> &best() const { return best_; }
  std::optional<double> best_l2() const { return best_l2_; }
  std::optional<Label> best_label() const { return best_label_; }

private:
  const ImageTensor &x_;
  Label y_;
  BudgetedOracle &oracle_;
  AttackTrace &trace_;
  std::optional<ImageTensor> best_;
  std::optional<double> best_l2_;
  std::optional<Label> best_label_;
};

std::optional<ImageTensor> initialize_impl(const ImageTensor &x, QuerySession &session, Rng &rng,
                                           const InitOptions &opts, double alpha) {
  std::optional<ImageTensor> far;
  for (std::uint32_t draw = 0; draw < opts.max_draws && !far; ++draw) {
    ImageTensor candidate(x.shape());
    for (double &v : candidate.data())
      v = rng.uniform();
    candidate = round_to_f32(candidate);
    if (session.query(candidate, alpha).adversarial)
      far = std::move(candidate);
  }
  if (!far)
    return std::nullopt;

  // Invariant: the point at `lo` is benign, the point at `hi` misclassified.
  const double span = l2_distance(x, *far);
  ImageTensor endpoint = *far;
  double lo = 0.0, hi = 1.0;
  try {
    for (std::uint32_t step = 0; step < opts.max_bisections && (hi - lo) * span > opts.tol;
         ++step) {
      const double mid = 0.5 * (lo + hi);
      ImageTensor point(x.shape());
      for (std::size_t i = 0; i < point.size(); ++i)
        point[i] = x[i] + mid * ((*far)[i] - x[i]);
      point = round_to_f32(point);
      if (session.query(point, alpha).adversarial) {
        hi = mid;
        endpoint = std::move(point);
      } else {
        lo = mid;
      }
    }
  } catch (const BudgetExhausted &) {
  }
  return endpoint;
}

// Learned-angle policies. observe() is called once per triangle-candidate query.
class AlphaController {
public:
  virtual ~AlphaController() = default;
  virtual double alpha() const = 0;
  virtual void observe(double l2, bool adversarial) = 0;
  virtual std::optional<QTable> table() const { return std::nullopt; }
};

class TaController : public AlphaController {
public:
  explicit TaController(const AttackConfig &cfg)
      : cfg_(cfg), alpha_(std::clamp(cfg.alpha_start, cfg.alpha_min, cfg.alpha_max)) {}

  double alpha() const override { return alpha_; }
  void observe(double, bool adversarial) override { alpha_ = ta_alpha_step(alpha_, adversarial, cfg_); }

private:
  const AttackConfig &cfg_;
  double alpha_;
};

class TarlController : public AlphaController {
public:
  TarlController(const AttackConfig &cfg, Rng &rng)
      : cfg_(cfg), grid_(cfg.grid()),
        table_(cfg.initial_qtable ? *cfg.initial_qtable : build_qtable(grid_, 2)), rng_(rng),
        state_(grid_.state_of(cfg.alpha_start)) {}

  double alpha() const override { return grid_.alpha_of(state_); }

  void observe(double l2, bool adversarial) override {
    if (pending_) {
      const double r = reward(l2, adversarial, cfg_.reward_mode, cfg_.max_reward);
      update(table_, pending_->first, pending_->second, r, state_, cfg_.rl);
    }
    const ActionChoice choice =
        select_action(state_, table_, grid_, cfg_.rl, rng_, cfg_.exploration_mode);
    pending_.emplace(state_, choice.action);
    state_ = choice.next_state;
  }

  std::optional<QTable> table() const override { return table_; }

private:
  const AttackConfig &cfg_;
  AlphaGrid grid_;
  QTable table_;
  Rng &rng_;
  std::size_t state_;
  std::optional<std::pair<std::size_t, std::size_t>> pending_;
};

constexpr int kMaxIdlePasses = 100;

class TriangleAttack {
public:
  TriangleAttack(const ImageTensor &x, Label y, BudgetedOracle &oracle, const AttackConfig &cfg,
                 AttackResult &result)
      : x_(x), cfg_(cfg), result_(result), session_(x, y, oracle, result.trace),
        subspace_rng_(splitmix64(cfg.seed.value)),
        controller_rng_(splitmix64(cfg.seed.value ^ 0x5bd1e995ULL)) {
    if (cfg.controller == Controller::TA)
      controller_ = std::make_unique<TaController>(cfg);
    else
      controller_ = std::make_unique<TarlController>(cfg, controller_rng_);
  }

  QuerySession &session() { return session_; }
  Rng &init_rng() { return subspace_rng_; }
  double alpha() const { return controller_->alpha(); }

  void optimize() {
    int idle_passes = 0;
    while (idle_passes < kMaxIdlePasses) {
      const std::size_t before = result_.trace.size();
      pass();
      idle_passes = result_.trace.size() == before ? idle_passes + 1 : 0;
    }
    spdlog::debug("attack stopped after {} passes without a query", kMaxIdlePasses);
  }

  std::optional<QTable> table() const { return controller_->table(); }

private:
  // One outer iteration: sample a plane through x and the incumbent, test
  // +-beta0, then binary-search beta upward on the side that worked.
  void pass() {
    const ImageTensor base = *session_.best();
    const FrequencySubspace subspace = sample_subspace(x_, base, cfg_.freq_ratio, subspace_rng_);

    const double beta0 = initial_beta(alpha(), cfg_.beta_lower);
    double side = 1.0;
    if (probe(base, subspace, beta0) != true) {
      if (probe(base, subspace, -beta0) != true)
        return;
      side = -1.0;
    }

    double lo = beta0;
    double hi = beta_upper_bound(alpha());
    for (std::uint32_t i = 0; i < cfg_.iters_per_subspace; ++i) {
      hi = std::min(hi, beta_upper_bound(alpha()));
      if (!(lo < hi))
        break;
      const double mid = 0.5 * (lo + hi);
      bool found = probe(base, subspace, side * mid) == true;
      if (!found && probe(base, subspace, -side * mid) == true) {
        found = true;
        side = -side;
      }
      if (found)
        lo = mid;
      else
        hi = mid;
    }
  }

  // nullopt: degenerate triangle, no query issued.
  std::optional<bool> probe(const ImageTensor &base, const FrequencySubspace &subspace,
                            double beta) {
    const double a = alpha();
    if (is_degenerate(a, beta))
      return std::nullopt;
    const TriangleParams params{a, beta, cfg_.beta_lower, beta_upper_bound(a)};
    const ImageTensor img = round_to_f32(candidate(x_, base, params, subspace));
    const auto out = session_.query(img, a);
    if (out.improved)
      ++result_.improvements;
    controller_->observe(out.l2, out.adversarial);
    return out.adversarial;
  }

  const ImageTensor &x_;
  const AttackConfig &cfg_;
  AttackResult &result_;
  QuerySession session_;
  Rng subspace_rng_;
  Rng controller_rng_;
  std::unique_ptr<AlphaController> controller_;
};

} // namespace

std::optional<ImageTensor> initialize_adversary(const ImageTensor &x, Label y,
                                                BudgetedOracle &oracle, Rng &rng,
                                                const InitOptions &opts, AttackTrace &trace,
                                                double alpha) {
  if (!(oracle.inner().predict(x) == y))
    throw PreconditionError("x is already misclassified; attacks need a correctly classified input");
  QuerySession session(x, y, oracle, trace);
  return initialize_impl(x, session, rng, opts, alpha);
}

AttackResult run_attack(const ImageTensor &x, Label y, Oracle &oracle, const AttackConfig &cfg,
                        const ImageTensor *start) {
  cfg.validate();
  check_input_shape(oracle, x);
  if (!(oracle.predict(x) == y))
    throw PreconditionError("x is already misclassified; attacks need a correctly classified input");

  BudgetedOracle budgeted(oracle, cfg.max_queries);
  AttackResult result;
  TriangleAttack attack(x, y, budgeted, cfg, result);

  try {
    if (start) {
      require_same_shape(x, *start);
      attack.session().query(round_to_f32(clip_unit(*start)), attack.alpha());
    } else {
      const InitOptions opts{cfg.init_tol, cfg.init_max_bisections, cfg.init_max_draws};
      initialize_impl(x, attack.session(), attack.init_rng(), opts, attack.alpha());
    }
    result.init_queries = budgeted.budget().used;
    if (attack.session().best())
      attack.optimize();
    else
      spdlog::info("initialization found no misclassified starting point");
  } catch (const BudgetExhausted &) {
  }
  if (result.init_queries == 0)
    result.init_queries = budgeted.budget().used;

  result.best_adv = attack.session().best();
  result.best_l2 = attack.session().best_l2();
  result.best_label = attack.session().best_label();
  result.queries_used = budgeted.budget().used;
  result.qtable = attack.table();
  return result;
}

} // namespace trirl

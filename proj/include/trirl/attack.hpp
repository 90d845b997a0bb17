#ifndef TRIRL_ATTACK_HPP
#define TRIRL_ATTACK_HPP

#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <string>

#include "trirl/oracle.hpp"
#include "trirl/rl.hpp"
#include "trirl/rng.hpp"
#include "trirl/tensor.hpp"

namespace trirl {

enum class Controller { TA, TARL };

std::string to_string(Controller c);
Controller parse_controller(const std::string &name);

struct AttackConfig {
  std::uint64_t max_queries = 500;
  /// Binary-search iterations on beta per sampled subspace.
  std::uint32_t iters_per_subspace = 2;
  double beta_lower = std::numbers::pi / 16.0;
  double freq_ratio = 0.1;
  Controller controller = Controller::TARL;

  /// Starting learned angle for both controllers (TARL snaps it to the grid).
  double alpha_start = std::numbers::pi / 4.0;
  double ta_gamma = 0.01;
  double ta_lambda = 2.0;

  RlHyperparams rl;
  double alpha_min = std::numbers::pi / 16.0;
  double alpha_max = std::numbers::pi / 2.0;
  double alpha_step = std::numbers::pi / 64.0;
  ExplorationMode exploration_mode = ExplorationMode::Uniform;
  RewardMode reward_mode = RewardMode::NegativeL2;
  double max_reward = kDefaultMaxReward;
  /// Carried-over table (ablation: persistence across images). Fresh if absent.
  std::optional<QTable> initial_qtable;

  double init_tol = 1e-3;
  std::uint32_t init_max_bisections = 30;
  std::uint32_t init_max_draws = 100;

  Seed seed;

  void validate() const;
  AlphaGrid grid() const;
};

struct AttackResult {
  std::optional<ImageTensor> best_adv;
  std::optional<double> best_l2;
  std::optional<Label> best_label;
  std::uint64_t queries_used = 0;
  /// Queries spent before the first triangle candidate.
  std::uint64_t init_queries = 0;
  /// Incumbent replacements made by triangle candidates (excludes initialization).
  std::uint64_t improvements = 0;
  AttackTrace trace;
  std::map<double, bool> success_flags;
  /// Final Q-table (TARL only).
  std::optional<QTable> qtable;
};

struct InitOptions {
  double tol = 1e-3;
  std::uint32_t max_bisections = 30;
  std::uint32_t max_draws = 100;
};

/// Random-restart plus bisection initialization. Returns the misclassified
/// endpoint, or nullopt if no misclassified draw was found. Every call goes
/// through `oracle` and is appended to `trace` (alpha recorded as `alpha`).
/// Throws PreconditionError if x is already misclassified; BudgetExhausted
/// during the draws propagates, during bisection the current endpoint is returned.
std::optional<ImageTensor> initialize_adversary(const ImageTensor &x, Label y,
                                                BudgetedOracle &oracle, Rng &rng,
                                                const InitOptions &opts, AttackTrace &trace,
                                                double alpha = 0.0);

/// alpha + gamma after a success, alpha - lambda * gamma otherwise, clipped.
double ta_alpha_step(double alpha, bool was_adversarial, const AttackConfig &cfg);

/// Full attack on `oracle`. `oracle` must classify x as y (checked once,
/// outside the budget). If `start` is given it replaces the random
/// initialization; it is verified with one budgeted query.
AttackResult run_attack(const ImageTensor &x, Label y, Oracle &oracle, const AttackConfig &cfg,
                        const ImageTensor *start = nullptr);

} // namespace trirl

#endif // TRIRL_ATTACK_HPP

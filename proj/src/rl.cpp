#include "trirl/rl.hpp"

#include <algorithm>
#include <cmath>

#include "trirl/error.hpp"

namespace trirl {

std::size_t count_grid_states(double alpha_min, double alpha_max, double step) {
  std::size_t states = 0;
  double alpha = alpha_min;
  while (alpha < alpha_max) {
    ++states;
    alpha = alpha + step;
  }
  return states;
}

AlphaGrid AlphaGrid::make(double alpha_min, double alpha_max, double step) {
  if (!std::isfinite(alpha_min) || !std::isfinite(alpha_max) || !std::isfinite(step))
    throw ConfigError("alpha grid bounds must be finite");
  if (!(step > 0.0))
    throw ConfigError("alpha grid step must be positive");
  const std::size_t n = count_grid_states(alpha_min, alpha_max, step);
  if (n == 0)
    throw ConfigError("alpha grid is empty (alpha_min must be below alpha_max)");
  return AlphaGrid{alpha_min, alpha_max, step, n};
}

double AlphaGrid::alpha_of(std::size_t state) const {
  return alpha_min + static_cast<double>(state) * step;
}

std::size_t AlphaGrid::state_of(double alpha) const {
  const double pos = std::round((alpha - alpha_min) / step);
  if (!(pos > 0.0))
    return 0;
  return std::min(static_cast<std::size_t>(pos), num_states - 1);
}

QTable::QTable(std::size_t num_states, std::size_t num_actions)
    : num_states_(num_states), num_actions_(num_actions),
      values_(num_states * num_actions, 0.0) {
  if (num_states == 0)
    throw ConfigError("Q-table needs at least one state");
  if (num_actions < 2)
    throw ConfigError("Q-table needs at least two actions");
}

QTable build_qtable(const AlphaGrid &grid, std::size_t num_actions) {
  if (grid.num_states == 0)
    throw ConfigError("alpha grid is empty");
  return QTable(grid.num_states, num_actions);
}

void RlHyperparams::validate() const {
  if (!(learning_rate >= 0.0 && learning_rate <= 1.0))
    throw ConfigError("learning rate must lie in [0, 1]");
  if (!(discount >= 0.0 && discount < 1.0))
    throw ConfigError("discount must lie in [0, 1)");
  if (!(exploration >= 0.0 && exploration <= 1.0))
    throw ConfigError("exploration rate must lie in [0, 1]");
}

std::size_t greedy_action(const QTable &table, std::size_t state) {
  const auto row = table.row(state);
  return static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
}

std::size_t choose_action(const QTable &table, std::size_t state, const RlHyperparams &hp,
                          Rng &rng, ExplorationMode mode) {
  if (rng.uniform() < hp.exploration) {
    if (mode == ExplorationMode::AlwaysIncrease)
      return 0;
    return static_cast<std::size_t>(rng.below(table.num_actions()));
  }
  return greedy_action(table, state);
}

ActionChoice select_action(std::size_t state, const QTable &table, const AlphaGrid &grid,
                           const RlHyperparams &hp, Rng &rng, ExplorationMode mode) {
  const std::size_t action = choose_action(table, state, hp, rng, mode);
  double alpha = grid.alpha_of(state);
  alpha += action == kIncreaseAlpha ? grid.step : -grid.step;
  alpha = std::clamp(alpha, grid.alpha_min, grid.alpha_max);
  const std::size_t next = grid.state_of(alpha);
  return ActionChoice{action, next, grid.alpha_of(next)};
}

double reward(double l2, bool adversarial, RewardMode mode, double max_reward) {
  if (!adversarial)
    return 0.0;
  if (mode == RewardMode::NegativeL2)
    return -l2;
  if (l2 <= 0.0)
    return max_reward;
  return std::min(1.0 / l2, max_reward);
}

void update(QTable &table, std::size_t state, std::size_t action, double r,
            std::size_t next_state, const RlHyperparams &hp) {
  const auto next_row = table.row(next_state);
  const double best_next = *std::max_element(next_row.begin(), next_row.end());
  double &q = table.at(state, action);
  q += hp.learning_rate * (r + hp.discount * best_next - q);
}

nlohmann::json qtable_to_json(const QTable &table, const AlphaGrid &grid) {
  return nlohmann::json{{"alpha_min", grid.alpha_min},
                        {"alpha_max", grid.alpha_max},
                        {"step", grid.step},
                        {"num_states", table.num_states()},
                        {"num_actions", table.num_actions()},
                        {"values", std::vector<double>(table.values().begin(),
                                                       table.values().end())}};
}

} // namespace trirl

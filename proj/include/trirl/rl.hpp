#ifndef TRIRL_RL_HPP
#define TRIRL_RL_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "trirl/rng.hpp"

namespace trirl {

/// Discretized alpha values: state i <-> alpha_min + i * step.
struct AlphaGrid {
  double alpha_min = 0.0;
  double alpha_max = 0.0;
  double step = 0.0;
  std::size_t num_states = 0;

  /// Validates the bounds and counts states with the construction loop.
  static AlphaGrid make(double alpha_min, double alpha_max, double step);

  double alpha_of(std::size_t state) const;
  /// Nearest state to alpha, clamped to the grid.
  std::size_t state_of(double alpha) const;
};

/// Number of rows produced by: a = min; while (a < max) { ++S; a += step; }
std::size_t count_grid_states(double alpha_min, double alpha_max, double step);

class QTable {
public:
  QTable() = default;
  QTable(std::size_t num_states, std::size_t num_actions);

  std::size_t num_states() const { return num_states_; }
  std::size_t num_actions() const { return num_actions_; }

  double &at(std::size_t state, std::size_t action) {
    return values_[state * num_actions_ + action];
  }
  double at(std::size_t state, std::size_t action) const {
    return values_[state * num_actions_ + action];
  }
  std::span<const double> row(std::size_t state) const {
    return std::span<const double>(values_).subspan(state * num_actions_, num_actions_);
  }
  std::span<const double> values() const { return values_; }

  friend bool operator==(const QTable &, const QTable &) = default;

private:
  std::size_t num_states_ = 0;
  std::size_t num_actions_ = 0;
  std::vector<double> values_;
};

QTable build_qtable(const AlphaGrid &grid, std::size_t num_actions = 2);

struct RlHyperparams {
  double learning_rate = 0.1;
  double discount = 0.9;
  double exploration = 0.1;

  void validate() const;
};

enum class ExplorationMode {
  Uniform,     // explore with a uniformly random action
  AlwaysIncrease, // explore by always taking action 0
};

enum class RewardMode {
  NegativeL2, // adversarial -> -l2
  InverseL2,  // adversarial -> 1 / l2, capped
};

// Action indices for the alpha controller.
inline constexpr std::size_t kIncreaseAlpha = 0;
inline constexpr std::size_t kDecreaseAlpha = 1;

/// Highest-valued action in the row; ties go to the lowest index.
std::size_t greedy_action(const QTable &table, std::size_t state);

/// Epsilon-greedy choice. One uniform draw decides explore vs exploit.
std::size_t choose_action(const QTable &table, std::size_t state, const RlHyperparams &hp,
                          Rng &rng, ExplorationMode mode);

struct ActionChoice {
  std::size_t action = 0;
  std::size_t next_state = 0;
  double next_alpha = 0.0;
};

/// choose_action, then move alpha by one grid step (increase or decrease),
/// clip into [alpha_min, alpha_max] and re-derive the state.
ActionChoice select_action(std::size_t state, const QTable &table, const AlphaGrid &grid,
                           const RlHyperparams &hp, Rng &rng, ExplorationMode mode);

inline constexpr double kDefaultMaxReward = 1e6;

double reward(double l2, bool adversarial, RewardMode mode = RewardMode::NegativeL2,
              double max_reward = kDefaultMaxReward);

/// One-step Q-learning: Q[s,a] += lr * (r + discount * max_a' Q[s',a'] - Q[s,a]).
void update(QTable &table, std::size_t state, std::size_t action, double r,
            std::size_t next_state, const RlHyperparams &hp);

/// {alpha_min, alpha_max, step, values: row-major}
nlohmann::json qtable_to_json(const QTable &table, const AlphaGrid &grid);

/// Per-query history of the attack: the alpha in effect, the l2 distance of
/// the queried image to x, and the verdict.
struct AttackTrace {
  struct Entry {
    double alpha = 0.0;
    double l2 = 0.0;
    bool adversarial = false;
    std::uint64_t query_index = 0;

    friend bool operator==(const Entry &, const Entry &) = default;
  };

  std::vector<Entry> entries;

  std::size_t size() const { return entries.size(); }
  friend bool operator==(const AttackTrace &, const AttackTrace &) = default;
};

} // namespace trirl

#endif // TRIRL_RL_HPP

#ifndef TRIRL_ORACLE_HPP
#define TRIRL_ORACLE_HPP

#include <cstdint>
#include <string>

#include "trirl/tensor.hpp"

namespace trirl {

/// Hard-label classifier. predict() is the raw model call; it never touches
/// a query budget. Attacks only see an oracle through BudgetedOracle.
class Oracle {
public:
  virtual ~Oracle() = default;

  virtual Label predict(const ImageTensor &img) = 0;
  virtual std::uint32_t num_classes() const = 0;
  virtual Shape input_shape() const = 0;
  virtual std::string describe() const = 0;
};

struct OracleVerdict {
  Label label;
  std::uint64_t query_index = 0; // 1-based
};

struct QueryBudget {
  std::uint64_t max_queries = 0;
  std::uint64_t used = 0;

  bool exhausted() const { return used >= max_queries; }
  std::uint64_t remaining() const { return max_queries - used; }
};

/// Counts queries against a fixed budget. A call that fails inside the model
/// (transport error) is not counted.
class BudgetedOracle {
public:
  BudgetedOracle(Oracle &inner, std::uint64_t max_queries);

  /// Throws BudgetExhausted once max_queries calls have succeeded.
  OracleVerdict classify(const ImageTensor &img);

  const QueryBudget &budget() const { return budget_; }
  Oracle &inner() { return inner_; }

private:
  Oracle &inner_;
  QueryBudget budget_;
};

void check_input_shape(const Oracle &oracle, const ImageTensor &img);

} // namespace trirl

#endif // TRIRL_ORACLE_HPP

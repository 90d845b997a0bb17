#include "trirl/oracle.hpp"

#include "trirl/error.hpp"

namespace trirl {

void check_input_shape(const Oracle &oracle, const ImageTensor &img) {
  if (img.shape() != oracle.input_shape())
    throw ShapeMismatch("image shape does not match the input shape of " + oracle.describe());
}

BudgetedOracle::BudgetedOracle(Oracle &inner, std::uint64_t max_queries)
    : inner_(inner), budget_{max_queries, 0} {
  if (max_queries == 0)
    throw ConfigError("query budget must be positive");
}

OracleVerdict BudgetedOracle::classify(const ImageTensor &img) {
  if (budget_.exhausted())
    throw BudgetExhausted();
  check_input_shape(inner_, img);
  const Label label = inner_.predict(img);
  ++budget_.used;
  return OracleVerdict{label, budget_.used};
}

} // namespace trirl

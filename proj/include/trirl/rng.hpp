#ifndef TRIRL_RNG_HPP
#define TRIRL_RNG_HPP

#include <cstdint>
#include <optional>

namespace trirl {

/// Counter-based generator: the n-th draw is splitmix64(seed + n * golden).
/// Owned by exactly one attack instance; copying forks the stream.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64();
  /// Uniform in [0, 1).
  double uniform();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  /// Standard normal (Box-Muller).
  double normal();

  std::uint64_t counter() const { return counter_; }

private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  std::optional<double> spare_;
};

/// Stateless mixing function; also used to derive per-image seeds.
std::uint64_t splitmix64(std::uint64_t x);

} // namespace trirl

#endif // TRIRL_RNG_HPP

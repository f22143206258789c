#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <random>

namespace sampro {

/// Deterministic random source. All randomness in the library flows through
/// this class so that identical seeds reproduce identical results across
/// platforms: the mt19937_64 stream is pinned by the standard and the
/// variate transforms below avoid the implementation-defined std
/// distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller (deterministic, two per round).
  double normal();

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// splitmix64 finalizer; used to derive independent sub-streams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Inverse-CDF draw from a categorical distribution given cumulative
/// weights (nondecreasing, last entry ~1).
Eigen::Index sample_categorical(Rng& rng, const Eigen::VectorXd& cumulative);

}  // namespace sampro

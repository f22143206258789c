#include "sampro/rng.hpp"

#include <cmath>
#include <numbers>

namespace sampro {

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // Box-Muller; u1 bounded away from zero so log is finite.
  double u1 = 0.0;
  do {
    u1 = uniform01();
  } while (u1 <= 0x1.0p-60);
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + (stream + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Eigen::Index sample_categorical(Rng& rng, const Eigen::VectorXd& cumulative) {
  const double u = rng.uniform01() * cumulative(cumulative.size() - 1);
  // first index with cumulative(i) > u
  Eigen::Index lo = 0;
  Eigen::Index hi = cumulative.size() - 1;
  while (lo < hi) {
    const Eigen::Index mid = lo + (hi - lo) / 2;
    if (cumulative(mid) > u) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

}  // namespace sampro

#pragma once

#include <cstdint>
#include <random>

#include "symnmf/matrix.hpp"

namespace symnmf {

/// Seedable generator whose output is identical on every platform.
///
/// Wraps std::mt19937_64 (its output sequence is fixed by the standard) and
/// derives doubles itself instead of going through the implementation-defined
/// std::*_distribution classes.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) from the top 53 bits of one draw.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via the Box-Muller transform.
  double normal();

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// rows x cols matrix of uniform [0, 1) entries, filled in column-major order.
DenseMatrix random_uniform(Index rows, Index cols, Rng& rng);

}  // namespace symnmf

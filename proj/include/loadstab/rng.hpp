#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "loadstab/errors.hpp"

namespace loadstab {

/// Seedable, splittable random generator.
///
/// Everything stochastic in the library goes through this class so that a
/// single integer seed reproduces results bit-for-bit across runs and
/// platforms. The engine is std::mt19937_64 (whose output sequence the
/// standard pins down exactly); uniform and Poisson variates are produced by
/// explicit, implementation-independent recipes instead of the std::
/// distribution classes, whose output is implementation-defined.
///
/// Substreams: derive(k) gives an independent generator keyed by (root seed,
/// k). Operations that need several independent sources (points then edges,
/// one stream per Monte Carlo trial) each use their own substream, so results
/// do not depend on evaluation order or thread count.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : root_(seed), engine_(seed) {}

  std::uint64_t root_seed() const { return root_; }

  /// Independent substream keyed by (root seed, stream).
  SplitRng derive(std::uint64_t stream) const {
    return SplitRng(derive_seed(root_, stream));
  }

  static std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) {
    return mix(root ^ mix(stream ^ 0xA0761D6478BD642FULL));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) {
    // Rejection from the top keeps the draw unbiased and portable.
    const std::uint64_t limit = n * (UINT64_MAX / n);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Poisson variate by Knuth's product method, chunked so exp(-mean) never
  /// underflows. Cost is O(mean) uniforms, fine at desk scale.
  std::int64_t poisson(double mean) {
    if (!std::isfinite(mean) || mean < 0.0) {
      throw ParameterError("poisson: mean must be finite and non-negative");
    }
    std::int64_t count = 0;
    while (mean > 500.0) {
      count += poisson_small(500.0);
      mean -= 500.0;
    }
    count += poisson_small(mean);
    return count;
  }

 private:
  static std::uint64_t mix(std::uint64_t x) {
    // splitmix64 finalizer.
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  std::int64_t poisson_small(double mean) {
    if (mean <= 0.0) return 0;
    const double threshold = std::exp(-mean);
    std::int64_t k = 0;
    double product = 1.0;
    do {
      ++k;
      product *= uniform();
    } while (product > threshold);
    return k - 1;
  }

  std::uint64_t root_;
  std::mt19937_64 engine_;
};

}  // namespace loadstab

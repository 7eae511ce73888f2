#pragma once

#include <cstdint>
#include <string>
#include <variant>

namespace dsmooth {

/// xoshiro256** seeded through SplitMix64. Copyable; a copy replays the same
/// future draws.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  /// Independent substream for replication `index` of a run keyed by
  /// `master_seed`. Depends only on the pair, never on scheduling.
  static RandomStream for_replication(std::uint64_t master_seed, std::uint64_t index);

  std::uint64_t next_u64() noexcept;

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() noexcept;

  /// Standard normal via Box-Muller; the second variate is cached.
  double normal() noexcept;

 private:
  std::uint64_t s_[4];
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

struct NormalDist {
  double mean = 0.0;
  double sd = 1.0;
};
struct ChiSquareDist {
  int df = 1;
};
struct PoissonDist {
  double lambda = 1.0;
};
struct BinomialDist {
  int trials = 1;
  double p = 0.5;
};
struct ExponentialDist {
  double rate = 1.0;
};

using Distribution = std::variant<NormalDist, ChiSquareDist, PoissonDist, BinomialDist, ExponentialDist>;

/// Throws std::invalid_argument for out-of-domain parameters. Binomial is
/// limited to trials <= 64 (inversion sampler).
void validate(const Distribution& dist);

/// One draw. Normal: Box-Muller. Chi-square: sum of squared normals for
/// df <= 3, Marsaglia-Tsang gamma above. Poisson: Knuth product for
/// lambda <= 30, PTRS above. Binomial: CDF inversion.
double sample_draw(RandomStream& rng, const Distribution& dist);

std::string describe(const Distribution& dist);

}  // namespace dsmooth

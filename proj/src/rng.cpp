#include "dsmooth/rng.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace dsmooth {
namespace {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

double gamma_draw(RandomStream& rng, double shape) {
  // Marsaglia & Tsang; shape < 1 boosted by U^(1/shape).
  if (shape < 1.0) return gamma_draw(rng, shape + 1.0) * std::pow(rng.uniform(), 1.0 / shape);
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double poisson_knuth(RandomStream& rng, double lambda) {
  const double limit = std::exp(-lambda);
  double prod = rng.uniform();
  int k = 0;
  while (prod > limit) {
    ++k;
    prod *= rng.uniform();
  }
  return k;
}

// Hormann's transformed rejection with squeeze.
double poisson_ptrs(RandomStream& rng, double lambda) {
  const double slam = std::sqrt(lambda);
  const double loglam = std::log(lambda);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
    if (us >= 0.07 && v <= vr) return k;
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <= -lambda + k * loglam - std::lgamma(k + 1.0))
      return k;
  }
}

double binomial_inversion(RandomStream& rng, int trials, double p) {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return trials;
  const double q = 1.0 - p;
  const double ratio = p / q;
  double pmf = std::pow(q, trials);
  double cdf = pmf;
  const double u = rng.uniform();
  int k = 0;
  while (u > cdf && k < trials) {
    pmf *= ratio * static_cast<double>(trials - k) / static_cast<double>(k + 1);
    ++k;
    cdf += pmf;
  }
  return k;
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) {
  std::uint64_t state = seed;
  for (auto& s : s_) s = splitmix64(state);
}

RandomStream RandomStream::for_replication(std::uint64_t master_seed, std::uint64_t index) {
  std::uint64_t state = master_seed;
  const std::uint64_t base = splitmix64(state);
  std::uint64_t keyed = base ^ (index * 0xD1B54A32D192ED03ULL);
  return RandomStream(splitmix64(keyed));
}

std::uint64_t RandomStream::next_u64() noexcept {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RandomStream::uniform() noexcept {
  // (k + 0.5) / 2^53 never hits 0 or 1.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() noexcept {
  if (has_cached_) {
    has_cached_ = false;
    return cached_normal_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double theta = 2.0 * std::numbers::pi * uniform();
  cached_normal_ = r * std::sin(theta);
  has_cached_ = true;
  return r * std::cos(theta);
}

void validate(const Distribution& dist) {
  std::visit(Overloaded{
                 [](const NormalDist& d) {
                   if (!std::isfinite(d.mean) || !(d.sd >= 0.0) || !std::isfinite(d.sd))
                     throw std::invalid_argument("normal needs finite mean and sd >= 0");
                 },
                 [](const ChiSquareDist& d) {
                   if (d.df < 1) throw std::invalid_argument("chi-square needs df >= 1");
                 },
                 [](const PoissonDist& d) {
                   if (!(d.lambda > 0.0) || !std::isfinite(d.lambda))
                     throw std::invalid_argument("poisson needs lambda > 0");
                 },
                 [](const BinomialDist& d) {
                   if (d.trials < 0 || d.trials > 64) throw std::invalid_argument("binomial needs 0 <= trials <= 64");
                   if (!(d.p >= 0.0 && d.p <= 1.0)) throw std::invalid_argument("binomial needs p in [0, 1]");
                 },
                 [](const ExponentialDist& d) {
                   if (!(d.rate > 0.0) || !std::isfinite(d.rate))
                     throw std::invalid_argument("exponential needs rate > 0");
                 },
             },
             dist);
}

double sample_draw(RandomStream& rng, const Distribution& dist) {
  return std::visit(Overloaded{
                        [&](const NormalDist& d) { return d.mean + d.sd * rng.normal(); },
                        [&](const ChiSquareDist& d) {
                          if (d.df <= 3) {
                            double s = 0.0;
                            for (int i = 0; i < d.df; ++i) {
                              const double g = rng.normal();
                              s += g * g;
                            }
                            return s;
                          }
                          return 2.0 * gamma_draw(rng, 0.5 * d.df);
                        },
                        [&](const PoissonDist& d) {
                          return d.lambda <= 30.0 ? poisson_knuth(rng, d.lambda) : poisson_ptrs(rng, d.lambda);
                        },
                        [&](const BinomialDist& d) { return binomial_inversion(rng, d.trials, d.p); },
                        [&](const ExponentialDist& d) { return -std::log(rng.uniform()) / d.rate; },
                    },
                    dist);
}

std::string describe(const Distribution& dist) {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const NormalDist& d) { os << "N(" << d.mean << "," << d.sd << ")"; },
                 [&](const ChiSquareDist& d) { os << "chi2(" << d.df << ")"; },
                 [&](const PoissonDist& d) { os << "P(" << d.lambda << ")"; },
                 [&](const BinomialDist& d) { os << "B(" << d.trials << "," << d.p << ")"; },
                 [&](const ExponentialDist& d) { os << "Exp(" << d.rate << ")"; },
             },
             dist);
  return os.str();
}

}  // namespace dsmooth

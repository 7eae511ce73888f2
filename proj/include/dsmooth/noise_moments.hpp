#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dsmooth {

/// Highest moment order any provider will answer. Stirling numbers and
/// double factorials lose double precision past this point.
inline constexpr int kMaxMomentOrder = 20;

struct NormalNoise {
  double mean = 0.0;
  double sd = 1.0;
};

struct PoissonNoise {
  double lambda = 1.0;
};

struct PointMassNoise {
  double value = 0.0;
};

/// Moments supplied directly; moments[0] is the order-1 moment.
struct RawMomentList {
  std::vector<double> moments;
};

/// log N for N ~ Poisson(lambda), conditioned on N >= 1.
struct LogPoissonNoise {
  double lambda = 1.0;
  int max_order = kMaxMomentOrder;
};

/// Raw-moment provider for a known noise law. Immutable once constructed.
class NoiseMomentSpec {
 public:
  using Kind = std::variant<NormalNoise, PoissonNoise, PointMassNoise, RawMomentList, LogPoissonNoise>;

  NoiseMomentSpec() : NoiseMomentSpec(PointMassNoise{0.0}) {}
  explicit NoiseMomentSpec(Kind kind);

  static NoiseMomentSpec normal(double mean, double sd) { return NoiseMomentSpec(NormalNoise{mean, sd}); }
  static NoiseMomentSpec poisson(double lambda) { return NoiseMomentSpec(PoissonNoise{lambda}); }
  static NoiseMomentSpec point(double value) { return NoiseMomentSpec(PointMassNoise{value}); }
  static NoiseMomentSpec raw(std::vector<double> moments) {
    return NoiseMomentSpec(RawMomentList{std::move(moments)});
  }
  static NoiseMomentSpec log_poisson(double lambda, int max_order = kMaxMomentOrder) {
    return NoiseMomentSpec(LogPoissonNoise{lambda, max_order});
  }

  /// Parses `normal(m,sd)`, `poisson(l)`, `point(v)`, `raw(m1,m2,...)`,
  /// `logpoisson(l)`. Throws std::invalid_argument on malformed text.
  static NoiseMomentSpec parse(std::string_view text);

  /// E(Z^order). Throws std::invalid_argument for order < 0 and
  /// std::out_of_range past max_order().
  double raw_moment(int order) const;

  /// Moments of orders 0..max_order inclusive.
  std::vector<double> raw_moments(int max_order) const;

  int max_order() const;
  const Kind& kind() const noexcept { return kind_; }

  /// Canonical text form, re-parseable by parse().
  std::string to_string() const;

 private:
  Kind kind_;
  std::vector<double> table_;  // LogPoisson moments 0..max_order
};

inline double raw_moment(const NoiseMomentSpec& spec, int order) { return spec.raw_moment(order); }

/// Poisson raw moments 0..max_order via Stirling numbers of the second kind.
std::vector<double> poisson_moments_stirling(double lambda, int max_order);

/// Poisson raw moments 0..max_order via m_{n+1} = lambda * sum_k C(n,k) m_k.
std::vector<double> poisson_moments_recurrence(double lambda, int max_order);

}  // namespace dsmooth

#include "dsmooth/noise_moments.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dsmooth/combinatorics.hpp"

namespace dsmooth {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double ipow(double base, int exp) {
  double r = 1.0;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// (m-1)!! for even m, 0 for odd m: central moments of a standard normal.
double std_normal_central_moment(int m) {
  if (m % 2 != 0) return 0.0;
  double r = 1.0;
  for (int j = m - 1; j > 1; j -= 2) r *= j;
  return r;
}

double normal_moment(const NormalNoise& n, int order) {
  // E((a + bG)^order) = sum_j C(order,j) a^(order-j) b^j E(G^j)
  double sum = 0.0;
  for (int j = 0; j <= order; j += 2) {
    sum += static_cast<double>(binomial(order, j)) * ipow(n.mean, order - j) * ipow(n.sd, j) *
           std_normal_central_moment(j);
  }
  return sum;
}

std::vector<double> log_poisson_table(const LogPoissonNoise& lp) {
  const double lambda = lp.lambda;
  const int kmax = static_cast<int>(std::ceil(lambda + 40.0 * std::sqrt(lambda) + 50.0));
  std::vector<double> sums(lp.max_order + 1, 0.0);
  const double log_lambda = std::log(lambda);
  for (int k = 1; k <= kmax; ++k) {
    const double pmf = std::exp(-lambda + k * log_lambda - std::lgamma(k + 1.0));
    const double lk = std::log(static_cast<double>(k));
    double power = 1.0;
    for (int i = 0; i <= lp.max_order; ++i) {
      sums[i] += power * pmf;
      power *= lk;
    }
    if (k > lambda && pmf < 1e-30) break;
  }
  const double p_positive = -std::expm1(-lambda);
  for (auto& s : sums) s /= p_positive;
  sums[0] = 1.0;
  return sums;
}

void validate(const NoiseMomentSpec::Kind& kind) {
  std::visit(Overloaded{
                 [](const NormalNoise& n) {
                   if (!std::isfinite(n.mean) || !std::isfinite(n.sd) || n.sd < 0.0)
                     throw std::invalid_argument("normal noise needs finite mean and sd >= 0");
                 },
                 [](const PoissonNoise& p) {
                   if (!(p.lambda > 0.0) || !std::isfinite(p.lambda))
                     throw std::invalid_argument("poisson noise needs lambda > 0");
                 },
                 [](const PointMassNoise& p) {
                   if (!std::isfinite(p.value)) throw std::invalid_argument("point mass must be finite");
                 },
                 [](const RawMomentList& r) {
                   for (double m : r.moments)
                     if (!std::isfinite(m)) throw std::invalid_argument("raw moments must be finite");
                 },
                 [](const LogPoissonNoise& lp) {
                   if (!(lp.lambda > 0.0) || !std::isfinite(lp.lambda))
                     throw std::invalid_argument("logpoisson noise needs lambda > 0");
                   if (lp.max_order < 0 || lp.max_order > kMaxMomentOrder)
                     throw std::invalid_argument("logpoisson max_order out of range");
                 },
             },
             kind);
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::vector<double> parse_arguments(std::string_view body) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    std::size_t comma = body.find(',', pos);
    if (comma == std::string_view::npos) comma = body.size();
    std::string_view tok = body.substr(pos, comma - pos);
    while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.front()))) tok.remove_prefix(1);
    while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back()))) tok.remove_suffix(1);
    if (tok.empty()) throw std::invalid_argument("empty argument in noise spec");
    std::string s(tok);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("non-numeric argument '" + s + "' in noise spec");
    }
    if (used != s.size()) throw std::invalid_argument("non-numeric argument '" + s + "' in noise spec");
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

}  // namespace

NoiseMomentSpec::NoiseMomentSpec(Kind kind) : kind_(std::move(kind)) {
  validate(kind_);
  if (const auto* lp = std::get_if<LogPoissonNoise>(&kind_)) table_ = log_poisson_table(*lp);
}

int NoiseMomentSpec::max_order() const {
  return std::visit(Overloaded{
                        [](const RawMomentList& r) { return static_cast<int>(r.moments.size()); },
                        [](const LogPoissonNoise& lp) { return lp.max_order; },
                        [](const auto&) { return kMaxMomentOrder; },
                    },
                    kind_);
}

double NoiseMomentSpec::raw_moment(int order) const {
  if (order < 0) throw std::invalid_argument("moment order must be >= 0");
  if (order == 0) return 1.0;
  if (order > max_order())
    throw std::out_of_range("moment of order " + std::to_string(order) + " unavailable for " + to_string());
  return std::visit(Overloaded{
                        [&](const NormalNoise& n) { return normal_moment(n, order); },
                        [&](const PoissonNoise& p) { return poisson_moments_stirling(p.lambda, order)[order]; },
                        [&](const PointMassNoise& p) { return ipow(p.value, order); },
                        [&](const RawMomentList& r) { return r.moments[order - 1]; },
                        [&](const LogPoissonNoise&) { return table_[order]; },
                    },
                    kind_);
}

std::vector<double> NoiseMomentSpec::raw_moments(int max_order) const {
  std::vector<double> out(max_order + 1);
  for (int i = 0; i <= max_order; ++i) out[i] = raw_moment(i);
  return out;
}

std::string NoiseMomentSpec::to_string() const {
  return std::visit(Overloaded{
                        [](const NormalNoise& n) {
                          return "normal(" + format_double(n.mean) + "," + format_double(n.sd) + ")";
                        },
                        [](const PoissonNoise& p) { return "poisson(" + format_double(p.lambda) + ")"; },
                        [](const PointMassNoise& p) { return "point(" + format_double(p.value) + ")"; },
                        [](const RawMomentList& r) {
                          std::string s = "raw(";
                          for (std::size_t i = 0; i < r.moments.size(); ++i) {
                            if (i) s += ",";
                            s += format_double(r.moments[i]);
                          }
                          return s + ")";
                        },
                        [](const LogPoissonNoise& lp) { return "logpoisson(" + format_double(lp.lambda) + ")"; },
                    },
                    kind_);
}

NoiseMomentSpec NoiseMomentSpec::parse(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.empty() || text.back() != ')')
    throw std::invalid_argument("malformed noise spec '" + std::string(text) + "'");
  std::string name(text.substr(0, open));
  for (auto& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  const auto args = parse_arguments(text.substr(open + 1, text.size() - open - 2));
  auto expect = [&](std::size_t count) {
    if (args.size() != count)
      throw std::invalid_argument(name + "() takes " + std::to_string(count) + " argument(s)");
  };
  if (name == "normal") {
    expect(2);
    return normal(args[0], args[1]);
  }
  if (name == "poisson") {
    expect(1);
    return poisson(args[0]);
  }
  if (name == "point") {
    expect(1);
    return point(args[0]);
  }
  if (name == "raw") {
    if (args.size() > kMaxMomentOrder) throw std::invalid_argument("raw() accepts at most 20 moments");
    return raw(args);
  }
  if (name == "logpoisson") {
    expect(1);
    return log_poisson(args[0]);
  }
  throw std::invalid_argument("unknown noise family '" + name + "'");
}

std::vector<double> poisson_moments_stirling(double lambda, int max_order) {
  if (max_order < 0 || max_order > kMaxMomentOrder) throw std::out_of_range("poisson moment order out of range");
  // S(n,k) = k S(n-1,k) + S(n-1,k-1); values up to S(20,k) fit in a double exactly.
  std::vector<std::vector<double>> s(max_order + 1, std::vector<double>(max_order + 1, 0.0));
  s[0][0] = 1.0;
  for (int n = 1; n <= max_order; ++n)
    for (int k = 1; k <= n; ++k) s[n][k] = k * s[n - 1][k] + s[n - 1][k - 1];
  std::vector<double> m(max_order + 1, 0.0);
  for (int n = 0; n <= max_order; ++n) {
    double lp = 1.0, acc = 0.0;
    for (int k = 0; k <= n; ++k) {
      acc += s[n][k] * lp;
      lp *= lambda;
    }
    m[n] = acc;
  }
  return m;
}

std::vector<double> poisson_moments_recurrence(double lambda, int max_order) {
  if (max_order < 0 || max_order > kMaxMomentOrder) throw std::out_of_range("poisson moment order out of range");
  std::vector<double> m(max_order + 1, 0.0);
  m[0] = 1.0;
  for (int n = 0; n + 1 <= max_order; ++n) {
    double acc = 0.0;
    for (int k = 0; k <= n; ++k) acc += static_cast<double>(binomial(n, k)) * m[k];
    m[n + 1] = lambda * acc;
  }
  return m;
}

}  // namespace dsmooth

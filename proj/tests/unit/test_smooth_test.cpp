#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <random>

#include "dsmooth/dist.hpp"
#include "dsmooth/simulate.hpp"
#include "dsmooth/smooth_test.hpp"
#include "oracles.hpp"

using namespace dsmooth;

namespace {

const NoiseMomentSpec kNone = NoiseMomentSpec::point(0.0);

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

}  // namespace

TEST_CASE("paired sample validation") {
  CHECK_THROWS_AS(PairedSample({1.0}, {2.0}, kNone, kNone), InputError);
  CHECK_THROWS_AS(PairedSample({1.0, 2.0}, {2.0}, kNone, kNone), InputError);
  CHECK_THROWS_AS(PairedSample({1.0, NAN}, {2.0, 3.0}, kNone, kNone), InputError);
  CHECK_THROWS_AS(PairedSample({1.0, 2.0}, {2.0, INFINITY}, kNone, kNone), InputError);
}

TEST_CASE("component matrix worked examples") {
  const PairedSample noiseless({1, 2, 3}, {1, 1, 1}, kNone, kNone);
  const auto v = components(noiseless, 1);
  CHECK(v.rows() == 3);
  CHECK(v(0, 0) == 0.0);
  CHECK(v(1, 0) == 1.0);
  CHECK(v(2, 0) == 2.0);

  const auto normal = NoiseMomentSpec::normal(0, 2);
  const PairedSample same({0.3, -1.2, 4.4}, {0.3, -1.2, 4.4}, normal, normal);
  const auto z = components(same, 4);
  for (std::size_t s = 0; s < 3; ++s)
    for (int i = 0; i < 4; ++i) CHECK(z(s, i) == 0.0);

  const PairedSample mod4({3, 8, 12, 5}, {4, 4, 9, 6}, NoiseMomentSpec::poisson(2), NoiseMomentSpec::poisson(1));
  const auto m = components(mod4, 1);
  for (std::size_t s = 0; s < 4; ++s) CHECK(m(s, 0) == doctest::Approx(mod4.x()[s] - mod4.u()[s] - 1.0));
}

TEST_CASE("statistic worked examples") {
  const PairedSample noiseless({1, 2, 3}, {1, 1, 1}, kNone, kNone);
  const auto q = statistic(noiseless, 1);
  CHECK(q.statistic == doctest::Approx(1.8).epsilon(1e-14));
  CHECK(q.lambda_min == doctest::Approx(5.0 / 3.0).epsilon(1e-14));

  const auto normal = NoiseMomentSpec::normal(0, 2);
  const PairedSample same({0.3, -1.2, 4.4}, {0.3, -1.2, 4.4}, normal, normal);
  CHECK_THROWS_AS(statistic(same, 1), SingularCovariance);
  try {
    (void)statistic(same, 2);
  } catch (const SingularCovariance& e) {
    CHECK(e.order() == 2);
  }
}

TEST_CASE("fixed-k test worked examples") {
  const PairedSample noiseless({1, 2, 3}, {1, 1, 1}, kNone, kNone);
  const auto r = fixed_k_test(noiseless, 1);
  CHECK(r.mode == TestMode::fixed_k);
  CHECK(r.statistic == doctest::Approx(1.8));
  CHECK(std::abs(r.p_value - (1.0 - oracle::chi2_cdf(1, 1.8))) <= 1e-9);
  CHECK(r.p_value == doctest::Approx(0.1797).epsilon(1e-3));

  const PairedSample far(std::vector<double>(50, 0.0), std::vector<double>(50, 100.0), kNone, kNone);
  CHECK(fixed_k_test(far, 1).p_value < 1e-10);
}

TEST_CASE("smallest maximiser tie-breaking") {
  CHECK(smallest_maximizer(std::vector<double>{-1.0, -3.0, -5.0}) == 0);
  CHECK(smallest_maximizer(std::vector<double>{-4.0, -2.0, -2.0, -7.0}) == 1);
  CHECK(smallest_maximizer(std::vector<double>{-4.0, -2.0, -2.0 + 1e-14, -7.0}) == 1);
  CHECK(smallest_maximizer(std::vector<double>{-4.0, -2.0, -1.9, -7.0}) == 2);
  CHECK_THROWS(smallest_maximizer(std::vector<double>{}));
}

TEST_CASE("select_order result invariants") {
  const auto model = model_registry(ModelId::MOD3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RandomStream rng(seed);
    const auto d = generate_sample(model, 80, 0.0, rng);
    const PairedSample sample(d.x, d.u, model.noise_z, model.noise_w);
    const auto r = select_order(sample, 10);
    CHECK(r.p_value >= 0.0);
    CHECK(r.p_value <= 1.0);
    CHECK(r.selected_order >= 1);
    CHECK(r.selected_order <= r.effective_max_order);
    CHECK(r.effective_max_order <= 10);
    const double log_n = std::log(80.0);
    for (const auto& s : r.per_k) {
      CHECK(s.penalized == doctest::Approx(s.statistic - s.k * log_n));
      CHECK(s.penalized <= r.per_k[r.selected_order - 1].penalized);
      if (s.k < r.selected_order) CHECK(s.penalized < r.per_k[r.selected_order - 1].penalized);
    }
    CHECK(r.statistic == r.per_k[r.selected_order - 1].statistic);
    CHECK(r.p_value == doctest::Approx(chi2_sf(1, r.statistic)));
  }
}

TEST_CASE("order 1 singular is an error for select_order") {
  const auto normal = NoiseMomentSpec::normal(0, 2);
  const PairedSample same({0.3, -1.2, 4.4}, {0.3, -1.2, 4.4}, normal, normal);
  CHECK_THROWS_AS(select_order(same, 10), SingularCovariance);
}

TEST_CASE("capped orders are recorded") {
  // Two distinct values per side: V spans at most a 2-dimensional space.
  const PairedSample s({0, 1, 0, 1, 0, 1, 1, 0}, {0, 0, 0, 0, 0, 0, 0, 0}, kNone, kNone);
  const auto r = select_order(s, 10);
  CHECK(r.effective_max_order == 1);
  CHECK(r.capped());
  CHECK(r.selected_order == 1);
}

TEST_CASE("factorised solve matches explicit inverse") {
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<int> kd(1, 4), nd(8, 50);
  std::normal_distribution<double> g(0.0, 1.5);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int k = kd(gen), n = nd(gen);
    std::vector<double> x(n), u(n);
    for (int s = 0; s < n; ++s) {
      x[s] = g(gen) + 0.3;
      u[s] = g(gen);
    }
    const auto nx = NoiseMomentSpec::normal(0.1, 0.8), nu = NoiseMomentSpec::poisson(0.5);
    const PairedSample sample(x, u, nx, nu);
    const auto v = components(sample, k);
    std::vector<std::vector<double>> rows(n, std::vector<double>(k));
    for (int s = 0; s < n; ++s)
      for (int i = 0; i < k; ++i) rows[s][i] = v(s, i);
    const double brute = oracle::quadratic_form_explicit_inverse(rows);
    const double fast = statistic(sample, k).statistic;
    CHECK(std::abs(fast - brute) <= 1e-8 * std::max(1.0, std::abs(brute)));
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("location shift of X absorbed by the noise law") {
  const auto model = model_registry(ModelId::MOD2);
  RandomStream rng(77);
  const auto d = generate_sample(model, 60, 0.0, rng);
  const PairedSample base(d.x, d.u, model.noise_z, model.noise_w);
  for (double c : {-3.0, 0.5, 7.0}) {
    std::vector<double> shifted = d.x;
    for (auto& v : shifted) v += c;
    const PairedSample moved(shifted, d.u, NoiseMomentSpec::normal(c, 2.0), model.noise_w);
    for (int k = 1; k <= 4; ++k) {
      const double a = statistic(base, k).statistic, b = statistic(moved, k).statistic;
      CHECK(std::abs(a - b) <= 1e-8 * std::max(1.0, a));
    }
  }
}

TEST_CASE("swapping the two sides leaves T unchanged") {
  const auto model = model_registry(ModelId::A22);
  RandomStream rng(3);
  const auto d = generate_sample(model, 70, 0.0, rng);
  const PairedSample fwd(d.x, d.u, model.noise_z, model.noise_w);
  const PairedSample rev(d.u, d.x, model.noise_w, model.noise_z);
  for (int k = 1; k <= 3; ++k) {
    const double a = statistic(fwd, k).statistic, b = statistic(rev, k).statistic;
    CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, a));
  }
}

TEST_CASE("blocked reduction matches the serial reference") {
  const auto model = model_registry(ModelId::MOD4);
  RandomStream rng(8);
  const auto d = generate_sample(model, 50'000, 0.0, rng);
  const auto bx = build_basis(model.noise_z, 8), bu = build_basis(model.noise_w, 8);
  const auto a = summarize_components_serial(d.x, d.u, bx, bu, 8);
  const auto b = summarize_components(d.x, d.u, bx, bu, 8);
  for (int i = 0; i < 8; ++i) CHECK(a.j[i] == doctest::Approx(b.j[i]).epsilon(1e-10).scale(std::sqrt(a.sigma[i * 8 + i])));
  for (std::size_t t = 0; t < a.sigma.size(); ++t) CHECK(a.sigma[t] == doctest::Approx(b.sigma[t]).epsilon(1e-12));
}

TEST_CASE("T_n(1) is close to chi-square(1) under MOD1") {
  SimulationConfig c;
  c.model = ModelId::MOD1;
  c.n = 200;
  c.replications = 2000;
  c.master_seed = 11;
  c.method = {MethodKind::fixed_k, 1};
  std::vector<double> t;
  for (const auto& o : run_replicates(c)) t.push_back(o.statistic);
  CHECK(oracle::ks_distance(t, [](double x) { return chi2_cdf(1, x); }) < 0.05);
}

TEST_CASE("fixed-k p-values are uniform for identical laws at n = 10^4") {
  SimulationConfig c;
  c.model = ModelId::MOD3;
  c.n = 10'000;
  c.replications = 2000;
  c.master_seed = 12;
  c.method = {MethodKind::fixed_k, 3};
  std::vector<double> p;
  for (const auto& o : run_replicates(c)) p.push_back(o.p_value);
  CHECK(oracle::ks_distance(p, [](double x) { return std::clamp(x, 0.0, 1.0); }) < 0.05);
}

TEST_CASE("order-one selection grows more frequent with n under the null") {
  for (ModelId m : {ModelId::MOD3, ModelId::MOD4}) {
    auto share_one = [&](int n) {
      SimulationConfig c;
      c.model = m;
      c.n = n;
      c.replications = 2000;
      c.master_seed = 21;
      const auto rep = run_simulation(c);
      const auto it = rep.selected_order_histogram.find(1);
      return it == rep.selected_order_histogram.end() ? 0.0 : double(it->second) / double(rep.replications);
    };
    CHECK(share_one(200) > share_one(30));
  }
}

TEST_CASE("statistic grows with n under A13") {
  auto med = [](int n) {
    SimulationConfig c;
    c.model = ModelId::A13;
    c.n = n;
    c.replications = 1000;
    c.master_seed = 31;
    std::vector<double> t;
    for (const auto& o : run_replicates(c)) t.push_back(o.statistic);
    return median(t);
  };
  const double m50 = med(50), m200 = med(200);
  CHECK(m200 > m50);
  CHECK(m200 > chi2_quantile(1, 0.95));
}

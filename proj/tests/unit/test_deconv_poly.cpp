#include <doctest.h>

#include <stdexcept>

#include <random>

#include "dsmooth/deconv_poly.hpp"
#include "dsmooth/rng.hpp"
#include "oracles.hpp"

using namespace dsmooth;

namespace {

void check_coeffs(const DeconvPolynomial& p, const std::vector<double>& want, double tol = 1e-12) {
  REQUIRE(p.coeffs().size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(p.coeffs()[i] == doctest::Approx(want[i]).epsilon(tol));
}

}  // namespace

TEST_CASE("noiseless basis is the monomials") {
  const auto b = build_basis(NoiseMomentSpec::point(0.0), 6);
  for (int i = 1; i <= 6; ++i) {
    std::vector<double> mono(i + 1, 0.0);
    mono[i] = 1.0;
    check_coeffs(b[i], mono);
  }
  CHECK(evaluate(b[1], 7.0) == 7.0);
}

TEST_CASE("normal(0,2) basis") {
  const auto b = build_basis(NoiseMomentSpec::normal(0.0, 2.0), 3);
  check_coeffs(b[1], {0, 1});
  check_coeffs(b[2], {-4, 0, 1});
  check_coeffs(b[3], {0, -12, 0, 1});
  CHECK(evaluate(b[2], 3.0) == 5.0);
  CHECK(evaluate(b[3], 0.0) == b[3].coeffs()[0]);
}

TEST_CASE("point mass one gives (x - 1)^i") {
  const auto b = build_basis(NoiseMomentSpec::point(1.0), 2);
  check_coeffs(b[1], {-1, 1});
  check_coeffs(b[2], {1, -2, 1});
}

TEST_CASE("recursion reproduces the three printed closed forms") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> unif(-3.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double z1 = unif(gen), z2 = unif(gen), z3 = unif(gen);
    const auto b = build_basis(NoiseMomentSpec::raw({z1, z2, z3}), 3);
    // P1 = x - z1; P2 = x^2 - 2 z1 P1 - z2; P3 = x^3 - 3 z1 P2 - 3 z2 P1 - z3
    const std::vector<double> p1 = {-z1, 1.0};
    const std::vector<double> p2 = oracle::poly_axpy(-2.0 * z1, p1, {-z2, 0.0, 1.0});
    const std::vector<double> p3 = oracle::poly_axpy(-3.0 * z2, p1, oracle::poly_axpy(-3.0 * z1, p2, {-z3, 0, 0, 1}));
    for (auto [got, want] : {std::pair{&b[1], &p1}, std::pair{&b[2], &p2}, std::pair{&b[3], &p3}}) {
      REQUIRE(got->coeffs().size() == want->size());
      for (std::size_t i = 0; i < want->size(); ++i) CHECK(std::abs(got->coeffs()[i] - (*want)[i]) <= 1e-12);
    }
  }
}

TEST_CASE("point mass shift identity up to order 6") {
  for (double c : {-2.0, 0.0, 1.0, 3.5}) {
    const auto b = build_basis(NoiseMomentSpec::point(c), 6);
    std::vector<double> expect = {1.0};
    for (int i = 1; i <= 6; ++i) {
      expect = oracle::poly_mul(expect, {-c, 1.0});
      const auto got = b[i].coeffs();
      for (int t = 0; t <= i; ++t)
        CHECK(got[t] == doctest::Approx(expect[t]).epsilon(1e-12).scale(std::abs(expect[t]) + 1.0));
    }
  }
}

TEST_CASE("monic with degree equal to order") {
  const auto b = build_basis(NoiseMomentSpec::poisson(2.0), 10);
  for (int i = 1; i <= 10; ++i) {
    CHECK(b[i].order() == i);
    CHECK(b[i].coeffs().back() == 1.0);
  }
}

TEST_CASE("evaluate_all agrees with per-polynomial Horner") {
  const auto b = build_basis(NoiseMomentSpec::normal(0.3, 1.7), 10);
  double out[10];
  for (double x : {-3.0, -0.5, 0.0, 1.25, 4.0, 9.5}) {
    b.evaluate_all(x, out);
    for (int i = 1; i <= 10; ++i) CHECK(out[i - 1] == doctest::Approx(b[i](x)).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("basis errors") {
  CHECK_THROWS_AS(build_basis(NoiseMomentSpec::raw({1.0, 2.0}), 3), std::out_of_range);
  CHECK_THROWS_AS(build_basis(NoiseMomentSpec::point(0), 0), std::invalid_argument);
  CHECK_THROWS_AS(build_basis(NoiseMomentSpec::point(0), 21), std::invalid_argument);
}

TEST_CASE("unbiasedness on the worked examples") {
  RandomStream rng(99);
  SUBCASE("chi2(2) + N(0,2), order 1") {
    auto sampler = [&] {
      return std::pair{sample_draw(rng, ChiSquareDist{2}), sample_draw(rng, NormalDist{0, 2})};
    };
    const auto c = moment_unbiasedness_check(NoiseMomentSpec::normal(0, 2), sampler, 1, 1'000'000, 2.0);
    CHECK(c.deviation <= 5.0 * c.standard_error);
  }
  SUBCASE("Y = 0") {
    auto sampler = [&] { return std::pair{0.0, sample_draw(rng, NormalDist{0, 2})}; };
    for (int order = 1; order <= 3; ++order) {
      const auto c = moment_unbiasedness_check(NoiseMomentSpec::normal(0, 2), sampler, order, 200'000, 0.0);
      CHECK(c.deviation <= 5.0 * c.standard_error);
    }
  }
  SUBCASE("B(10,0.5) + P(2), order 2") {
    auto sampler = [&] {
      return std::pair{sample_draw(rng, BinomialDist{10, 0.5}), sample_draw(rng, PoissonDist{2})};
    };
    const auto c = moment_unbiasedness_check(NoiseMomentSpec::poisson(2), sampler, 2, 1'000'000, 27.5);
    CHECK(c.deviation <= 5.0 * c.standard_error);
  }
}

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "r1mp/detail/rng.hpp"
#include "r1mp/metrics.hpp"

using namespace r1mp;

TEST_CASE("rmse basics") {
  std::vector<double> p{1.0, 2.0, 3.0};
  CHECK(rmse(p, p) == 0.0);

  std::vector<double> t{0.0, 1.0, 2.0};
  CHECK(rmse(p, t) == doctest::Approx(1.0));

  CHECK_THROWS_AS(rmse({}, {}), std::invalid_argument);
  CHECK_THROWS_AS(rmse(p, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("rmse matches a direct-summation oracle") {
  std::mt19937_64 gen(81);
  std::vector<double> p(100), t(100);
  for (int i = 0; i < 100; ++i) {
    p[i] = detail::normal(gen);
    t[i] = detail::normal(gen);
  }
  double s = 0.0;
  for (int i = 0; i < 100; ++i) s += (p[i] - t[i]) * (p[i] - t[i]);
  CHECK(rmse(p, t) == doctest::Approx(std::sqrt(s / 100.0)).epsilon(1e-12));
}

TEST_CASE("rmse is permutation invariant in paired entries") {
  std::mt19937_64 gen(82);
  std::vector<double> p(50), t(50);
  for (int i = 0; i < 50; ++i) {
    p[i] = detail::normal(gen);
    t[i] = detail::normal(gen);
  }
  std::vector<std::size_t> perm(50);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = 0; i + 1 < perm.size(); ++i)
    std::swap(perm[i], perm[i + detail::uniform_index(gen, 50 - i)]);
  std::vector<double> p2(50), t2(50);
  for (std::size_t i = 0; i < 50; ++i) {
    p2[i] = p[perm[i]];
    t2[i] = t[perm[i]];
  }
  CHECK(rmse(p, t) == doctest::Approx(rmse(p2, t2)).epsilon(1e-12));
}

TEST_CASE("psnr sentinels and known values") {
  GrayImage ref;
  ref.width = 4;
  ref.height = 2;
  ref.pixels = {0, 50, 100, 150, 200, 250, 30, 60};

  std::vector<double> exact(ref.pixels.begin(), ref.pixels.end());
  CHECK(std::isinf(psnr(exact, ref)));

  // Uniform error of 255 on every pixel -> MSE = 255^2 -> 0 dB.
  GrayImage black;
  black.width = 2;
  black.height = 2;
  black.pixels = {0, 0, 0, 0};
  std::vector<double> white{255.0, 255.0, 255.0, 255.0};
  CHECK(psnr(white, black) == doctest::Approx(0.0));

  std::vector<double> wrong(3, 0.0);
  CHECK_THROWS_AS(psnr(wrong, ref), std::invalid_argument);
}

TEST_CASE("psnr strictly decreases as the error grows") {
  GrayImage ref;
  ref.width = 8;
  ref.height = 8;
  ref.pixels.assign(64, 100);
  double prev = std::numeric_limits<double>::infinity();
  for (double delta : {1.0, 2.0, 5.0, 10.0, 50.0}) {
    std::vector<double> rec(64, 100.0 + delta);
    const double value = psnr(rec, ref);
    CHECK(value < prev);
    prev = value;
  }
}

TEST_CASE("contraction bound formula") {
  CHECK(contraction_bound(100, 200) == doctest::Approx(std::sqrt(0.99)));
  CHECK(contraction_bound(100, 200) == doctest::Approx(0.994987).epsilon(1e-6));
  CHECK(contraction_bound(30, 20, 0.5) ==
        doctest::Approx(std::sqrt(1.0 - 0.25 / 20.0)));
  CHECK_THROWS_AS(contraction_bound(0, 5), std::invalid_argument);
  CHECK_THROWS_AS(contraction_bound(5, 5, 0.0), std::invalid_argument);
}

TEST_CASE("contraction ratios from a trace") {
  PursuitTrace trace;
  trace.observed_norm = 10.0;
  trace.records.push_back({1, 10.0, 5.0, 3, 4.0, 0.0});
  trace.records.push_back({2, 6.0, 3.0, 3, 4.0, 0.0});
  trace.final_residual_norm = 1.5;

  auto summary = contraction_ratios(trace);
  REQUIRE(summary.ratios.size() == 2);
  CHECK(summary.ratios[0] == doctest::Approx(0.6));
  CHECK(summary.ratios[1] == doctest::Approx(0.25));
  CHECK(summary.max_ratio == doctest::Approx(0.6));
}

TEST_CASE("a one-iteration exact fit yields a single zero ratio") {
  PursuitTrace trace;
  trace.observed_norm = 2.0;
  trace.records.push_back({1, 2.0, 2.0, 1, 1.0, 0.0});
  trace.final_residual_norm = 0.0;
  auto summary = contraction_ratios(trace);
  REQUIRE(summary.ratios.size() == 1);
  CHECK(summary.ratios[0] == doctest::Approx(0.0));
}

TEST_CASE("contraction ratios need at least two samples") {
  PursuitTrace empty;
  CHECK_THROWS_AS(contraction_ratios(empty), std::invalid_argument);
}

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qsine/numerics.hpp"

using namespace qsine;
using std::numbers::pi;

TEST_SUITE("numerics") {
  TEST_CASE("simpson integrates constants, cubics and sin exactly enough") {
    CHECK(simpson(GridFunction::sample(8, [](double) { return 1.0; })) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(simpson(GridFunction::sample(100, [](double x) { return x * x; })) - 1.0 / 3.0) <= 1e-12);
    CHECK(std::abs(simpson(GridFunction::sample(1000, [](double x) { return std::sin(pi * x); })) - 2.0 / pi) <=
          1e-10);
  }

  TEST_CASE("simpson rejects odd interval counts") {
    const std::vector<double> v(4, 1.0);  // 3 intervals
    CHECK_THROWS_AS(simpson(v, 1.0 / 3.0), InvalidInput);
  }

  TEST_CASE("cumulative simpson") {
    const GridFunction one = cumulative_simpson(GridFunction::sample(10, [](double) { return 1.0; }));
    for (std::size_t j = 0; j < one.size(); ++j) CHECK(std::abs(one[j] - one.x(j)) <= 1e-14);
    const GridFunction zero = cumulative_simpson(GridFunction(10));
    for (std::size_t j = 0; j < zero.size(); ++j) CHECK(zero[j] == 0.0);
    const GridFunction s = cumulative_simpson(GridFunction::sample(1000, [](double x) { return std::cos(pi * x); }));
    double err = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) err = std::max(err, std::abs(s[j] - std::sin(pi * s.x(j)) / pi));
    CHECK(err <= 1e-9);
  }

  TEST_CASE("pchip resample reproduces cubics and lines") {
    NonUniformTable cubic;
    for (double x : {0.0, 0.1, 0.35, 0.5, 0.8, 1.0}) {
      cubic.xs.push_back(x);
      cubic.ys.push_back(x * x * x - 2.0 * x + 0.5);
      cubic.dys.push_back(3.0 * x * x - 2.0);
    }
    const GridFunction c = pchip_resample(cubic, 200);
    double err = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
      const double x = c.x(j);
      err = std::max(err, std::abs(c[j] - (x * x * x - 2.0 * x + 0.5)));
    }
    CHECK(err <= 1e-13);

    const NonUniformTable line{{0.0, 1.0}, {0.0, 1.0}, {1.0, 1.0}};
    const GridFunction id = pchip_resample(line, 10);
    for (std::size_t j = 0; j < id.size(); ++j) CHECK(std::abs(id[j] - id.x(j)) <= 1e-15);

    NonUniformTable sine;
    for (std::size_t i = 0; i <= 10000; ++i) {
      const double x = 0.5 - 0.5 * std::cos(pi * static_cast<double>(i) / 10000.0);
      sine.xs.push_back(x);
      sine.ys.push_back(std::sin(pi * x));
      sine.dys.push_back(pi * std::cos(pi * x));
    }
    const GridFunction s = pchip_resample(sine, 1000);
    err = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) err = std::max(err, std::abs(s[j] - std::sin(pi * s.x(j))));
    CHECK(err < 1e-10);

    const NonUniformTable short_table{{0.0, 0.5}, {0.0, 1.0}, {1.0, 1.0}};
    CHECK_THROWS_AS(pchip_resample(short_table, 10), InvalidInput);
  }

  TEST_CASE("bisect") {
    CHECK(std::abs(bisect([](double g) { return -g; }, -1.0, 1.0, 1e-12)) <= 1e-12);
    CHECK(std::abs(bisect([](double g) { return 0.5 - g; }, 0.0, 1.0, 1e-12) - 0.5) <= 1e-12);
    CHECK(std::abs(bisect([](double g) { return std::cos(g) - g; }, 0.0, 1.0, 1e-12) - 0.7390851332151607) <= 1e-11);
    CHECK_THROWS_AS(bisect([](double g) { return 2.0 - g; }, 0.0, 1.0), InvalidInput);
  }

  TEST_CASE("loglog slope") {
    std::vector<double> xs, inv2, flat, noisy;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.01, 0.01);
    for (int i = 1; i <= 20; ++i) {
      const double x = 5.0 * i;
      xs.push_back(x);
      inv2.push_back(1.0 / (x * x));
      flat.push_back(3.0);
      noisy.push_back(3.0 * std::pow(x, -0.49) * (1.0 + u(rng)));
    }
    CHECK(std::abs(loglog_slope(xs, inv2) + 2.0) <= 1e-12);
    CHECK(std::abs(loglog_slope(xs, flat)) <= 1e-12);
    CHECK(std::abs(loglog_slope(xs, noisy) + 0.49) <= 0.05);
    std::vector<double> bad = xs;
    bad[3] = 0.0;
    CHECK_THROWS_AS(loglog_slope(bad, flat), InvalidInput);
  }

  TEST_CASE("trig table matches libm and sine modes are orthonormal") {
    const TrigTable t(400);
    for (std::size_t k : {1u, 7u, 399u, 1234u}) {
      for (std::size_t j : {0u, 13u, 200u, 400u}) {
        CHECK(std::abs(t.sin(k, j) - std::sin(pi * static_cast<double>(k * j) / 400.0)) <= 1e-12);
      }
    }
    const GridFunction e3 = sine_mode(3, 400), e5 = sine_mode(5, 400);
    CHECK(std::abs(inner(e3, e3) - 1.0) <= 1e-12);
    CHECK(std::abs(inner(e3, e5)) <= 1e-12);
  }

  TEST_CASE("resolution rule") {
    CHECK(resolution_intervals(40) == 4000);
    CHECK(resolution_intervals(100) == 2000);
    CHECK_THROWS_AS(resolution_intervals(0), InvalidInput);
  }
}

#include "chernoff.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "doctest.h"
#include "errors.hpp"

using namespace snskr;
using bounds::TailConfig;

namespace {

// Independent oracle: plain bisection on the defining equations, no shared
// code with the implementation.
double oracle_solve(double scale, bool plus_branch, double xi, double hi_cap) {
  auto g = [&](double d) {
    if (plus_branch) {
      return scale / (1.0 + d) * (d - (1.0 + d) * std::log(1.0 + d)) -
             std::log(xi);
    }
    return scale / (1.0 - d) * (-d - (1.0 - d) * std::log(1.0 - d)) -
           std::log(xi);
  };
  double lo = 0.0, hi = hi_cap;
  while (plus_branch && g(hi) > 0) hi *= 2;
  for (int i = 0; i < 500; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) >= 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double oracle_expected_lower(double x, double xi) {
  if (x == 0) return 0;
  // Bisection directly on the expected value E = x/(1+d1), whose defining
  // equation reads x - E + x ln(E/x) = ln xi and is increasing in E.
  auto g = [&](double e) {
    return x - e + x * std::log(e / x) - std::log(xi);
  };
  double lo = 1e-300, hi = x;
  for (int i = 0; i < 500; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) <= 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double oracle_expected_upper(double x, double xi) {
  if (x == 0) return -std::log(xi);
  return x / (1.0 - oracle_solve(x, false, xi, 1.0 - 1e-16));
}

double oracle_real_upper(double y, double xi) {
  if (y == 0) return 0;
  // O^U equations have no 1/(1 +- d) prefactor on the exponent.
  auto g = [&](double d) {
    return y * (d - (1.0 + d) * std::log(1.0 + d)) - std::log(xi);
  };
  double lo = 0.0, hi = 1.0;
  while (g(hi) > 0) hi *= 2;
  for (int i = 0; i < 500; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) >= 0 ? lo : hi) = mid;
  }
  return (1.0 + 0.5 * (lo + hi)) * y;
}

double oracle_real_lower(double y, double xi) {
  if (y <= -std::log(xi)) return 0;
  auto g = [&](double d) {
    return y * (-d - (1.0 - d) * std::log(1.0 - d)) - std::log(xi);
  };
  double lo = 0.0, hi = 1.0 - 1e-16;
  for (int i = 0; i < 500; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) >= 0 ? lo : hi) = mid;
  }
  return (1.0 - 0.5 * (lo + hi)) * y;
}

constexpr TailConfig kXi{1e-10};

}  // namespace

TEST_CASE("expected_lower matches frozen oracle values") {
  CHECK(bounds::expected_lower(0, kXi) == 0.0);
  CHECK(bounds::expected_lower(100, kXi) ==
        doctest::Approx(46.539958110077808).epsilon(1e-12));
  CHECK(bounds::expected_lower(1e6, kXi) ==
        doctest::Approx(993229.20145408809).epsilon(1e-12));
  // Asymptotic widening ~ sqrt(2 ln(1/xi) / x).
  const double d1 = 1e6 / bounds::expected_lower(1e6, kXi) - 1.0;
  CHECK(d1 == doctest::Approx(std::sqrt(2 * std::log(1e10) / 1e6)).epsilon(0.05));
}

TEST_CASE("expected_upper matches frozen oracle values") {
  CHECK(bounds::expected_upper(0, kXi) ==
        doctest::Approx(23.025850929940457).epsilon(1e-14));
  CHECK(bounds::expected_upper(100, kXi) ==
        doctest::Approx(184.00527477824961).epsilon(1e-12));
  CHECK(bounds::expected_upper(100, TailConfig{0.999999}) ==
        doctest::Approx(100.0).epsilon(1e-3));
}

TEST_CASE("real-value bounds match frozen oracle values") {
  CHECK(bounds::real_upper(0, kXi) == 0.0);
  CHECK(bounds::real_upper(1000, kXi) ==
        doctest::Approx(1222.1419273490453).epsilon(1e-12));
  CHECK(bounds::real_upper(1000, kXi) > bounds::real_upper(999, kXi));
  const double ol = bounds::real_lower(1000, kXi);
  CHECK(ol == doctest::Approx(793.22445951634983).epsilon(1e-12));
  CHECK(ol > 750.0);
  CHECK(ol < 1000.0);
  CHECK(bounds::real_lower(0, kXi) == 0.0);
  // Degenerate: no root in (0,1) once y <= ln(1/xi).
  CHECK(bounds::real_lower(5, kXi) == 0.0);
  CHECK(bounds::real_lower(23.0, kXi) == 0.0);
}

TEST_CASE("bounds bracket their argument") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mag(0.0, 12.0);
  std::uniform_real_distribution<double> lxi(-18.0, -2.0);
  for (int i = 0; i < 300; ++i) {
    const double x = std::pow(10.0, mag(rng));
    const TailConfig cfg{std::pow(10.0, lxi(rng))};
    CHECK(bounds::expected_lower(x, cfg) < x);
    CHECK(bounds::expected_upper(x, cfg) > x);
    CHECK(bounds::real_upper(x, cfg) > x);
    CHECK(bounds::real_lower(x, cfg) < x);
  }
}

TEST_CASE("monotone in the first argument") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> mag(0.5, 10.0);
  for (int i = 0; i < 200; ++i) {
    const double x = std::pow(10.0, mag(rng));
    const double y = x * 1.01;
    CHECK(bounds::expected_lower(x, kXi) <= bounds::expected_lower(y, kXi));
    CHECK(bounds::expected_upper(x, kXi) <= bounds::expected_upper(y, kXi));
    CHECK(bounds::real_upper(x, kXi) <= bounds::real_upper(y, kXi));
    CHECK(bounds::real_lower(x, kXi) <= bounds::real_lower(y, kXi));
  }
}

TEST_CASE("oracle agreement and residuals on 1000 random inputs, under 1s") {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(42);
  // Above ~1e11 counts the rounded bound itself cannot pin the log-domain
  // residual below 1e-9 (residual noise scales as x * delta * ulp), so the
  // suite covers the full operational counting range instead.
  std::uniform_real_distribution<double> mag(-1.0, 11.0);
  std::uniform_real_distribution<double> lxi(-16.0, -1.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = std::pow(10.0, mag(rng));
    const TailConfig cfg{std::pow(10.0, lxi(rng))};
    const bounds::Solved el = bounds::expected_lower_solved(x, cfg);
    const bounds::Solved eu = bounds::expected_upper_solved(x, cfg);
    const bounds::Solved ou = bounds::real_upper_solved(x, cfg);
    const bounds::Solved ol = bounds::real_lower_solved(x, cfg);
    CHECK(el.bound ==
          doctest::Approx(oracle_expected_lower(x, cfg.xi)).epsilon(1e-8));
    CHECK(eu.bound ==
          doctest::Approx(oracle_expected_upper(x, cfg.xi)).epsilon(1e-8));
    CHECK(ou.bound ==
          doctest::Approx(oracle_real_upper(x, cfg.xi)).epsilon(1e-8));
    if (!ol.degenerate) {
      CHECK(ol.bound ==
            doctest::Approx(oracle_real_lower(x, cfg.xi)).epsilon(1e-8));
    }
    CHECK(std::abs(bounds::log_residual_expected_lower(x, el.delta, cfg)) < 1e-9);
    CHECK(std::abs(bounds::log_residual_expected_upper(x, eu.delta, cfg)) < 1e-9);
    CHECK(std::abs(bounds::log_residual_real_upper(x, ou.delta, cfg)) < 1e-9);
    if (!ol.degenerate) {
      CHECK(std::abs(bounds::log_residual_real_lower(x, ol.delta, cfg)) < 1e-9);
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  CHECK(seconds < 1.0);
}

TEST_CASE("validation errors") {
  CHECK_THROWS_AS(bounds::expected_lower(-1, kXi), ValidationError);
  CHECK_THROWS_AS(bounds::expected_upper(std::nan(""), kXi), ValidationError);
  CHECK_THROWS_AS(bounds::expected_lower(1, TailConfig{0.0}), ValidationError);
  CHECK_THROWS_AS(bounds::expected_lower(1, TailConfig{1.0}), ValidationError);
}

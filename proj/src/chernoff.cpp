#include "chernoff.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "errors.hpp"

namespace snskr::bounds {

namespace {

constexpr int kMaxIterations = 200;
constexpr double kBracketTol = 1e-14;  // relative

// h_plus(d) = d - (1+d)ln(1+d); strictly decreasing, h_plus(0) = 0.
// Series h_plus = -d^2/2 + d^3/6 - d^4/12 - ... = sum_{k>=2} (-1)^{k-1} d^k/(k(k-1))
// avoids cancellation near 0.
double h_plus(double d) {
  if (std::abs(d) < 0.05) {
    double term = -d * d / 2.0;  // k = 2
    double sum = term;
    for (int k = 3; k <= 18; ++k) {
      term *= -d * (k - 2) / k;  // d^k/(k(k-1)) = prev * d * (k-2)/k, sign flips
      sum += term;
    }
    return sum;
  }
  return d - (1.0 + d) * std::log1p(d);
}

// expm1(t) - t, via its series near 0 where the direct difference cancels.
double expm1_minus_t(double t) {
  if (std::abs(t) < 0.5) {
    double term = t * t / 2.0;  // k = 2
    double sum = term;
    for (int k = 3; k <= 24; ++k) {
      term *= t / k;
      sum += term;
    }
    return sum;
  }
  return std::expm1(t) - t;
}

// h_minus(d) = -d - (1-d)ln(1-d); strictly decreasing on (0,1), h_minus(1) = -1.
// Series: -sum_{k>=2} d^k/(k(k-1)).
double h_minus(double d) {
  if (d < 0.05) {
    double term = -d * d / 2.0;
    double sum = term;
    for (int k = 3; k <= 18; ++k) {
      term *= d * (k - 2) / k;
      sum += term;
    }
    return sum;
  }
  return -d - (1.0 - d) * std::log1p(-d);
}

// Solve g(d) = 0 for strictly decreasing g with g(lo) >= 0 >= g(hi):
// bisection to the bracket tolerance, then Newton refinement on the final
// iterate. gprime may underestimate near the root without harm.
double solve_decreasing(const std::function<double(double)>& g,
                        const std::function<double(double)>& gprime, double lo,
                        double hi, const char* what) {
  double flo = g(lo);
  double fhi = g(hi);
  if (flo < 0.0 || fhi > 0.0) {
    throw SolverError(std::string("chernoff bracket invalid for ") + what, lo, hi);
  }
  double mid = lo;
  for (int it = 0; it < kMaxIterations; ++it) {
    mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval collapsed to adjacent doubles
    const double fm = g(mid);
    if (fm >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if ((hi - lo) <= kBracketTol * std::max(1.0, std::abs(lo))) break;
  }
  // Newton polish; stay inside the (closed) bracket, then keep whichever of
  // the candidates solves the equation best.
  double d = 0.5 * (lo + hi);
  for (int it = 0; it < 8; ++it) {
    const double f = g(d);
    const double fp = gprime(d);
    if (fp == 0.0) break;
    double next = d - f / fp;
    if (!(next >= lo && next <= hi) || next == d) break;
    d = next;
  }
  double best = d;
  double residual = std::abs(g(d));
  for (double cand : {lo, hi}) {
    const double r = std::abs(g(cand));
    if (r < residual) {
      best = cand;
      residual = r;
    }
  }
  if (!std::isfinite(best)) {
    throw SolverError(std::string("chernoff solver diverged for ") + what, lo, hi);
  }
  return best;
}

// Expand hi until g(hi) <= 0 for the unbounded-delta equations.
double expand_upper(const std::function<double(double)>& g, const char* what) {
  double hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    if (g(hi) <= 0.0) return hi;
    hi *= 2.0;
  }
  throw SolverError(std::string("chernoff bracket expansion failed for ") + what,
                    0.0, hi);
}

}  // namespace

void TailConfig::validate() const {
  if (!(xi > 0.0 && xi < 1.0)) {
    throw ValidationError("TailConfig.xi must lie in (0, 1), got " +
                          std::to_string(xi));
  }
}

Solved expected_lower_solved(double x, const TailConfig& cfg) {
  cfg.validate();
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw ValidationError("expected_lower: observed count must be finite and >= 0");
  }
  if (x == 0.0) return {0.0, 0.0, true};
  const double lnxi = std::log(cfg.xi);
  // Substituting E = x/(1+d1) turns the defining equation into
  // x - E + x ln(E/x) = ln xi with E in (0, x]. Solved in t = ln(E/x), where
  // the bracket [(ln xi - x)/x, 0] is exact and
  // F(t) = x(t - expm1(t)) - ln xi is increasing.
  auto g = [&](double t) { return -x * expm1_minus_t(t) - lnxi; };
  auto gp = [&](double t) { return -x * std::expm1(t); };
  double lo = (lnxi - x) / x;
  double hi = 0.0;
  for (int it = 0; it < kMaxIterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (g(mid) <= 0.0 ? lo : hi) = mid;
    if ((hi - lo) <= kBracketTol * std::max(1.0, std::abs(hi))) break;
  }
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 8; ++it) {
    const double fp = gp(t);
    if (fp == 0.0) break;
    const double next = t - g(t) / fp;
    if (!(next >= lo && next <= hi) || next == t) break;
    t = next;
  }
  double residual = std::abs(g(t));
  for (double cand : {lo, hi}) {
    const double r = std::abs(g(cand));
    if (r < residual) {
      t = cand;
      residual = r;
    }
  }
  if (!std::isfinite(t) || t > 0.0) {
    throw SolverError("chernoff solver diverged for expected_lower", lo, hi);
  }
  return {x * std::exp(t), std::expm1(-t), false};
}

double expected_lower(double x, const TailConfig& cfg) {
  return expected_lower_solved(x, cfg).bound;
}

Solved expected_upper_solved(double x, const TailConfig& cfg) {
  cfg.validate();
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw ValidationError("expected_upper: observed count must be finite and >= 0");
  }
  const double lnxi = std::log(cfg.xi);
  // Zero-count branch: the defining equation degenerates; Poisson tail
  // e^{-E} >= xi gives E^U(0) = ln(1/xi), the continuous x->0 limit.
  if (x == 0.0) return {-lnxi, 0.0, true};
  auto g = [&](double d) { return (x / (1.0 - d)) * h_minus(d) - lnxi; };
  auto gp = [&](double d) { return -x * d / ((1.0 - d) * (1.0 - d)); };
  const double one = 1.0 - std::numeric_limits<double>::epsilon();
  const double d2 = solve_decreasing(g, gp, 0.0, one, "expected_upper");
  return {x / (1.0 - d2), d2, false};
}

double expected_upper(double x, const TailConfig& cfg) {
  return expected_upper_solved(x, cfg).bound;
}

Solved real_upper_solved(double y, const TailConfig& cfg) {
  cfg.validate();
  if (!(y >= 0.0) || !std::isfinite(y)) {
    throw ValidationError("real_upper: expected value must be finite and >= 0");
  }
  if (y == 0.0) return {0.0, 0.0, true};
  const double lnxi = std::log(cfg.xi);
  auto g = [&](double d) { return y * h_plus(d) - lnxi; };
  auto gp = [&](double d) { return -y * std::log1p(d); };
  const double hi = expand_upper(g, "real_upper");
  const double d1 = solve_decreasing(g, gp, 0.0, hi, "real_upper");
  return {(1.0 + d1) * y, d1, false};
}

double real_upper(double y, const TailConfig& cfg) {
  return real_upper_solved(y, cfg).bound;
}

Solved real_lower_solved(double y, const TailConfig& cfg) {
  cfg.validate();
  if (!(y >= 0.0) || !std::isfinite(y)) {
    throw ValidationError("real_lower: expected value must be finite and >= 0");
  }
  const double lnxi = std::log(cfg.xi);
  // y * h_minus(d) spans (0, -y) on d in (0,1): no root once y <= ln(1/xi),
  // and the bound degenerates to the trivial 0.
  if (y <= -lnxi) return {0.0, 1.0, true};
  auto g = [&](double d) { return y * h_minus(d) - lnxi; };
  auto gp = [&](double d) { return y * std::log1p(-d); };
  const double one = 1.0 - std::numeric_limits<double>::epsilon();
  const double d2 = solve_decreasing(g, gp, 0.0, one, "real_lower");
  return {(1.0 - d2) * y, d2, false};
}

double real_lower(double y, const TailConfig& cfg) {
  return real_lower_solved(y, cfg).bound;
}

double log_residual_expected_lower(double x, double delta, const TailConfig& cfg) {
  if (x == 0.0) return 0.0;
  return (x / (1.0 + delta)) * h_plus(delta) - std::log(cfg.xi);
}

double log_residual_expected_upper(double x, double delta, const TailConfig& cfg) {
  if (x == 0.0) return 0.0;
  return (x / (1.0 - delta)) * h_minus(delta) - std::log(cfg.xi);
}

double log_residual_real_upper(double y, double delta, const TailConfig& cfg) {
  if (y == 0.0) return 0.0;
  return y * h_plus(delta) - std::log(cfg.xi);
}

double log_residual_real_lower(double y, double delta, const TailConfig& cfg) {
  if (delta >= 1.0) return 0.0;
  return y * h_minus(delta) - std::log(cfg.xi);
}

}  // namespace snskr::bounds

#include "protocol.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace snskr {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

Interval virtual_range(double mu, double delta_1, double delta_s) {
  // Endpoints of (1+delta_1)(1+delta_s^i)/(1+delta_1^i) * mu over the
  // fluctuation box: the minimum cancels the spread of source 1 exactly.
  return {(1.0 - delta_s) * mu,
          (1.0 + delta_1) * (1.0 + delta_s) * mu / (1.0 - delta_1)};
}

}  // namespace

void ProtocolParams::validate() const {
  require(mu_a1 > 0.0 && mu_a1 < mu_a2, "require 0 < mu_a1 < mu_a2");
  require(mu_b1 > 0.0 && mu_b1 < mu_b2, "require 0 < mu_b1 < mu_b2");
  require(mu_az >= 0.0 && mu_bz >= 0.0, "signal intensities must be >= 0");
  for (double d : {delta_a1, delta_a2, delta_az, delta_b1, delta_b2, delta_bz}) {
    require(d >= 0.0 && d < 1.0, "fluctuation bounds delta must lie in [0, 1)");
  }
  for (double q : {p_az, p_bz, p_a1, p_a2, p_b1, p_b2, eps_a, eps_b}) {
    require(q >= 0.0 && q <= 1.0, "probabilities must lie in [0, 1]");
  }
  require(p_a1 + p_a2 <= 1.0, "require p_a1 + p_a2 <= 1");
  require(p_b1 + p_b2 <= 1.0, "require p_b1 + p_b2 <= 1");
  require(n_total >= 1.0, "require n_total >= 1");
  require(xi > 0.0 && xi < 1.0, "require 0 < xi < 1");
  require(f_ec >= 1.0, "error-correction inefficiency must be >= 1");
  for (double e : {eps_cor, eps_pa, eps_hat, eps_aopp}) {
    require(e > 0.0 && e < 1.0, "security epsilons must lie in (0, 1)");
  }
}

void ProtocolParams::set_delta(double delta) {
  delta_a1 = delta_a2 = delta_az = delta;
  delta_b1 = delta_b2 = delta_bz = delta;
}

VirtualIntensities virtual_intensities(const ProtocolParams& p) {
  if (p.delta_a1 >= 1.0 || p.delta_b1 >= 1.0) {
    throw ValidationError("delta of the weak decoy source must be < 1");
  }
  VirtualIntensities v;
  v.mu_a1_u = (1.0 + p.delta_a1) * p.mu_a1;
  v.mu_b1_u = (1.0 + p.delta_b1) * p.mu_b1;
  v.mu_a2 = virtual_range(p.mu_a2, p.delta_a1, p.delta_a2);
  v.mu_b2 = virtual_range(p.mu_b2, p.delta_b1, p.delta_b2);
  v.mu_az = virtual_range(p.mu_az, p.delta_a1, p.delta_az);
  v.mu_bz = virtual_range(p.mu_bz, p.delta_b1, p.delta_bz);
  return v;
}

TaggedDecomposition tagged_decomposition(const ProtocolParams& p,
                                         const VirtualIntensities& v) {
  const double az_lo = v.mu_az.lo;
  const double bz_lo = v.mu_bz.lo;
  if (az_lo <= 0.0 || bz_lo <= 0.0) {
    throw ConfigurationError("tagged decomposition needs nonzero signal intensities");
  }
  // mu e^{-mu} must be monotone over the fluctuation range for the lower
  // endpoint to minimize the single-photon weight.
  if (az_lo >= 1.0 || bz_lo >= 1.0) {
    throw ConfigurationError(
        "virtual signal intensity lower bound must be < 1 for the tagged model");
  }
  if (!(p.eps_a > 0.0 && p.eps_a < 1.0 && p.eps_b > 0.0 && p.eps_b < 1.0)) {
    throw ConfigurationError("sending probabilities must lie in (0, 1)");
  }
  const double qa = az_lo * std::exp(-az_lo);
  const double qb = bz_lo * std::exp(-bz_lo);
  const double balance = (p.eps_b * (1.0 - p.eps_a) * v.mu_a1_u) /
                         (p.eps_a * (1.0 - p.eps_b) * v.mu_b1_u);
  TaggedDecomposition td;
  if (qa / qb <= balance) {
    td.c_az1 = qa;
    td.c_bz1 = qa / balance;
  } else {
    td.c_bz1 = qb;
    td.c_az1 = qb * balance;
  }
  return td;
}

double poisson_coeff(double mu, int k) {
  if (mu < 0.0 || k < 0) throw ValidationError("poisson_coeff: mu >= 0, k >= 0");
  if (mu == 0.0) return k == 0 ? 1.0 : 0.0;
  double c = std::exp(-mu);
  for (int i = 1; i <= k; ++i) c *= mu / i;
  return c;
}

Interval poisson_coeff_bounds(const Interval& mu_range, int k) {
  if (mu_range.lo < 0.0 || mu_range.lo > mu_range.hi) {
    throw ValidationError("poisson_coeff_bounds: invalid intensity interval");
  }
  const double flo = poisson_coeff(mu_range.lo, k);
  const double fhi = poisson_coeff(mu_range.hi, k);
  Interval out;
  out.lo = std::min(flo, fhi);
  // mu^k e^{-mu} increases up to mu = k and decreases beyond it.
  out.hi = mu_range.contains(static_cast<double>(k))
               ? poisson_coeff(static_cast<double>(k), k)
               : std::max(flo, fhi);
  return out;
}

}  // namespace snskr

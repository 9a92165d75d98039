#include "decoy.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace snskr::decoy {

namespace {

double rate_endpoint(double count, double pairs, bool upper,
                     const TailConfig& cfg) {
  if (pairs <= 0) {
    throw ValidationError("missing statistics: a required source pair has no pulses");
  }
  const double bound = upper ? bounds::expected_upper(count, cfg)
                             : bounds::expected_lower(count, cfg);
  return bound / pairs;
}

}  // namespace

RateBounds rate_bounds(const ObservedStats& o, const TailConfig& cfg,
                       bool tight_s00) {
  o.validate();
  RateBounds rb;
  const double n00 = tight_s00 ? o.heralds_00_all : o.heralds_00;
  const double n00_pairs = tight_s00 ? o.n_pairs_00_all : o.n_pairs_00;
  rb.s00.lo = rate_endpoint(n00, n00_pairs, false, cfg);
  rb.s00.hi = rate_endpoint(n00, n00_pairs, true, cfg);
  rb.s01_lower = rate_endpoint(o.heralds_01, o.n_pairs_01, false, cfg);
  rb.s10_lower = rate_endpoint(o.heralds_10, o.n_pairs_10, false, cfg);
  rb.s02_upper = rate_endpoint(o.heralds_02, o.n_pairs_02, true, cfg);
  rb.s20_upper = rate_endpoint(o.heralds_20, o.n_pairs_20, true, cfg);
  rb.tx_upper = rate_endpoint(o.m_x_errors, o.n_x_pairs, true, cfg);
  return rb;
}

SideCoeffs side_coeffs(double mu1_u, const Interval& mu2_range) {
  SideCoeffs sc;
  for (int k = 0; k < 3; ++k) {
    sc.c1[k] = poisson_coeff(mu1_u, k);
    sc.c2[k] = poisson_coeff_bounds(mu2_range, k);
  }
  return sc;
}

double single_photon_yield_lower(double s_weak_lower, double s_strong_upper,
                                 double s00_upper, const SideCoeffs& side) {
  const double den = side.c1[1] * side.c2[2].lo - side.c1[2] * side.c2[1].lo;
  if (!(den > 0.0)) {
    throw ConfigurationError(
        "decoy denominator not positive: decoy intensities too close after "
        "fluctuation widening");
  }
  const double num =
      side.c2[2].lo * s_weak_lower - side.c1[2] * s_strong_upper -
      (side.c1[0] * side.c2[2].lo - side.c1[2] * side.c2[0].lo) * s00_upper;
  return std::max(0.0, num / den);
}

double s10_lower(const RateBounds& rb, const SideCoeffs& a) {
  return single_photon_yield_lower(rb.s10_lower, rb.s20_upper, rb.s00.hi, a);
}

double s01_lower(const RateBounds& rb, const SideCoeffs& b) {
  return single_photon_yield_lower(rb.s01_lower, rb.s02_upper, rb.s00.hi, b);
}

double s10_lower_outlier(const RateBounds& rb, const SideCoeffs& a,
                         double n_delta, double n_pairs_10) {
  if (n_delta < 0) throw ValidationError("n_delta must be >= 0");
  return single_photon_yield_lower(rb.s10_lower - n_delta / n_pairs_10,
                                   rb.s20_upper, rb.s00.hi, a);
}

double s01_lower_outlier(const RateBounds& rb, const SideCoeffs& b,
                         double n_delta, double n_pairs_01) {
  if (n_delta < 0) throw ValidationError("n_delta must be >= 0");
  return single_photon_yield_lower(rb.s01_lower - n_delta / n_pairs_01,
                                   rb.s02_upper, rb.s00.hi, b);
}

double s1_lower(double s10_l, double s01_l, const VirtualIntensities& v) {
  const double total = v.mu_a1_u + v.mu_b1_u;
  if (!(total > 0.0)) {
    throw ValidationError("s1_lower: both virtual X intensities are zero");
  }
  return (v.mu_a1_u * s10_l + v.mu_b1_u * s01_l) / total;
}

namespace {

Clamped clamp_error_rate(double e) {
  if (e < 0.0) return {0.0, true};
  if (e > 0.5) return {0.5, true};
  return {e, false};
}

Clamped e1ph_from_numerator(double numerator, double s1_l,
                            const VirtualIntensities& v) {
  if (!(s1_l > 0.0)) {
    throw ConfigurationError("phase-error bound undefined: s1 lower bound is 0");
  }
  const double mu_sum = v.mu_a1_u + v.mu_b1_u;
  return clamp_error_rate(numerator / (std::exp(-mu_sum) * mu_sum * s1_l));
}

}  // namespace

Clamped e1ph_mean_upper(double tx_upper, double s00_lower, double s1_l,
                        const VirtualIntensities& v) {
  const double mu_sum = v.mu_a1_u + v.mu_b1_u;
  return e1ph_from_numerator(tx_upper - std::exp(-mu_sum) * s00_lower / 2.0,
                             s1_l, v);
}

Clamped e1ph_mean_upper_novacuum(double tx_upper, double s1_l,
                                 const VirtualIntensities& v) {
  return e1ph_from_numerator(tx_upper, s1_l, v);
}

UntaggedCounts untagged_counts(const ProtocolParams& p,
                               const TaggedDecomposition& td, double s10_l,
                               double s01_l, double s1_l,
                               const TailConfig& cfg) {
  const double window = p.n_total * p.p_az * p.p_bz;
  const double wa = p.eps_a * (1.0 - p.eps_b) * td.c_az1;
  const double wb = p.eps_b * (1.0 - p.eps_a) * td.c_bz1;
  UntaggedCounts uc;
  uc.n1_mean_lower = window * (wa + wb) * s1_l;
  uc.n1_lower = bounds::real_lower(uc.n1_mean_lower, cfg);
  uc.nu1_mean_lower = window * wa * s10_l;
  uc.nu0_mean_lower = window * wb * s01_l;
  return uc;
}

Clamped e1ph_real_upper(double n1_lower, double e1ph_mean_u,
                        const TailConfig& cfg) {
  if (!(n1_lower > 0.0)) {
    throw ConfigurationError("phase-error bound undefined: n_1 lower bound is 0");
  }
  return clamp_error_rate(bounds::real_upper(n1_lower * e1ph_mean_u, cfg) /
                          n1_lower);
}

DecoyBounds decoy_chain(const ProtocolParams& p, const VirtualIntensities& v,
                        const TaggedDecomposition& td, const RateBounds& rb,
                        const ObservedStats& o, const DecoyOptions& opts) {
  const TailConfig cfg{p.xi};
  const double s00_upper = opts.s00_override.value_or(rb.s00.hi);
  const double s00_lower = opts.s00_override.value_or(rb.s00.lo);
  const SideCoeffs ca = side_coeffs(v.mu_a1_u, v.mu_a2);
  const SideCoeffs cb = side_coeffs(v.mu_b1_u, v.mu_b2);

  DecoyBounds db;
  const double shift_10 = opts.outlier ? o.n_delta / o.n_pairs_10 : 0.0;
  const double shift_01 = opts.outlier ? o.n_delta / o.n_pairs_01 : 0.0;
  db.s10_lower = single_photon_yield_lower(rb.s10_lower - shift_10,
                                           rb.s20_upper, s00_upper, ca);
  db.s01_lower = single_photon_yield_lower(rb.s01_lower - shift_01,
                                           rb.s02_upper, s00_upper, cb);
  db.yields_clamped = db.s10_lower == 0.0 || db.s01_lower == 0.0;
  db.s1_lower = s1_lower(db.s10_lower, db.s01_lower, v);
  if (!(db.s1_lower > 0.0)) {
    db.degenerate = true;
    db.e1ph_mean_upper = 0.5;
    db.e1ph_real_upper = 0.5;
    return db;
  }
  const Clamped mean =
      opts.outlier ? e1ph_mean_upper_novacuum(rb.tx_upper, db.s1_lower, v)
                   : e1ph_mean_upper(rb.tx_upper, s00_lower, db.s1_lower, v);
  db.e1ph_mean_upper = mean.value;
  db.e1ph_mean_clamped = mean.clamped;

  const UntaggedCounts uc =
      untagged_counts(p, td, db.s10_lower, db.s01_lower, db.s1_lower, cfg);
  db.n1_mean_lower = uc.n1_mean_lower;
  db.n1_lower = uc.n1_lower;
  db.nu1_mean_lower = uc.nu1_mean_lower;
  db.nu0_mean_lower = uc.nu0_mean_lower;
  if (!(db.n1_lower > 0.0)) {
    db.degenerate = true;
    db.e1ph_real_upper = 0.5;
    return db;
  }
  const Clamped real = e1ph_real_upper(db.n1_lower, db.e1ph_mean_upper, cfg);
  db.e1ph_real_upper = real.value;
  db.e1ph_real_clamped = real.clamped;
  return db;
}

double bb84_n1y_lower(const Bb84Inputs& in) {
  if (!(in.p_o > 0.0)) throw ValidationError("bb84_n1y_lower: p_o must be > 0");
  const double den = in.ax[1].hi * in.ay[2].lo - in.ay[1].lo * in.ax[2].hi;
  if (!(den > 0.0)) {
    throw ConfigurationError(
        "bb84 decoy denominator not positive: x/y intensities too close");
  }
  const double num =
      in.ay[1].lo *
      (in.ay[2].lo * in.n_x_lower - in.ax[2].hi * in.n_y_upper -
       (in.ay[2].lo * in.ax[0].hi - in.ax[2].hi * in.ay[0].lo) * in.n_vac_upper *
           in.p_y / in.p_o);
  return std::max(0.0, num / den);
}

}  // namespace snskr::decoy

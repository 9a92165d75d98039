#include "keyrate.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace snskr::keyrate {

namespace {

constexpr double kRateFloor = 1e-12;  // below simulation resolution at N=1e13

double floor_rate(double raw) { return raw < kRateFloor ? 0.0 : raw; }

double log2_term(double x) { return std::log2(x); }

}  // namespace

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw ValidationError("binary_entropy: argument must lie in [0, 1]");
  }
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

AoppChain aopp_chain(const decoy::DecoyBounds& db, const ObservedStats& o,
                     const ProtocolParams& p) {
  const bounds::TailConfig cfg{p.xi};
  const double eps = p.eps_aopp;
  AoppChain c;
  if (db.degenerate || o.n_odd <= 0 || o.n_t <= 0) {
    c.degenerate = true;
    return c;
  }
  c.u = o.n_g / (2.0 * o.n_odd);
  c.n_u1_lower = bounds::real_lower(c.u * db.nu1_mean_lower, cfg);
  c.n_u0_lower = bounds::real_lower(c.u * db.nu0_mean_lower, cfg);
  c.n1_lower = c.n_u1_lower + c.n_u0_lower;
  if (c.n1_lower <= 0.0) {
    c.degenerate = true;
    return c;
  }
  c.n1_pairs_lower =
      bounds::real_lower(c.n1_lower * c.n1_lower / (2.0 * c.u * o.n_t), cfg);
  if (c.n1_pairs_lower <= 0.0 || c.n1_lower <= 2.0 * c.n1_pairs_lower) {
    c.degenerate = true;
    return c;
  }
  const double spread = std::sqrt(-std::log(eps) / (2.0 * c.n1_pairs_lower));
  c.n_u1_prime = 2.0 * c.n1_pairs_lower * (c.n_u1_lower / c.n1_lower - spread);
  c.n_u0_prime = 2.0 * c.n1_pairs_lower * (c.n_u0_lower / c.n1_lower - spread);
  c.n_min = std::min(c.n_u0_prime, c.n_u1_prime);
  if (c.n_min <= 0.0) {
    c.degenerate = true;
    return c;
  }
  c.n1_prime_lower = 2.0 * bounds::real_lower(
      c.n_min * (1.0 - c.n_min / (2.0 * c.n1_pairs_lower)), cfg);
  if (c.n1_prime_lower <= 0.0) {
    c.degenerate = true;
    return c;
  }
  const double excess = c.n1_lower - 2.0 * c.n1_pairs_lower;
  c.r_correction = c.n1_lower / excess * std::log(3.0 * excess * excess / eps);
  if (2.0 * c.n1_pairs_lower <= c.r_correction ||
      c.n1_pairs_lower <= c.r_correction) {
    c.degenerate = true;
    return c;
  }
  const double e_tau_raw =
      bounds::real_upper(2.0 * c.n1_pairs_lower * db.e1ph_mean_upper, cfg) /
      (2.0 * c.n1_pairs_lower - c.r_correction);
  c.e_tau = std::clamp(e_tau_raw, 0.0, 0.5);
  c.e_tau_clamped = c.e_tau != e_tau_raw;
  c.ms_upper = bounds::real_upper((c.n1_pairs_lower - c.r_correction) *
                                      c.e_tau * (1.0 - c.e_tau),
                                  cfg) +
               c.r_correction;
  const double e1p_raw = 2.0 * c.ms_upper / c.n1_prime_lower;
  c.e1ph_prime_upper = std::clamp(e1p_raw, 0.0, 0.5);
  c.e1ph_prime_clamped = c.e1ph_prime_upper != e1p_raw;
  return c;
}

double key_rate_original_raw(const decoy::DecoyBounds& db,
                             const ObservedStats& o, const ProtocolParams& p) {
  const double tail = log2_term(2.0 / p.eps_cor) +
                      2.0 * log2_term(1.0 / (std::sqrt(2.0) * p.eps_pa *
                                             p.eps_hat));
  if (db.degenerate) return -tail / p.n_total;
  return (db.n1_lower * (1.0 - binary_entropy(db.e1ph_real_upper)) -
          p.f_ec * o.n_t * binary_entropy(o.e_z) - tail) /
         p.n_total;
}

double key_rate_original(const decoy::DecoyBounds& db, const ObservedStats& o,
                         const ProtocolParams& p) {
  return floor_rate(key_rate_original_raw(db, o, p));
}

double key_rate_aopp_raw(const AoppChain& chain, const ObservedStats& o,
                         const ProtocolParams& p) {
  const double tail = 2.0 * log2_term(2.0 / p.eps_cor) +
                      4.0 * log2_term(1.0 / (std::sqrt(2.0) * p.eps_pa *
                                             p.eps_hat));
  if (chain.degenerate) return -tail / p.n_total;
  return (chain.n1_prime_lower *
              (1.0 - binary_entropy(chain.e1ph_prime_upper)) -
          p.f_ec * o.n_t_prime * binary_entropy(o.e_z_prime) - tail) /
         p.n_total;
}

double key_rate_aopp(const AoppChain& chain, const ObservedStats& o,
                     const ProtocolParams& p) {
  return floor_rate(key_rate_aopp_raw(chain, o, p));
}

namespace {

// Failure probabilities consumed by the bound chain: seven expected-value
// bounds on counting rates, two realized-value bounds for the original rate,
// six more for the pairing chain plus its three direct concentration terms.
double failure_budget(const ProtocolParams& p, const AnalysisOptions& opts) {
  double budget = p.xi * (7 + 2 + 6) + p.eps_aopp * 3;
  if (opts.outlier) budget += p.xi;  // the N_delta estimate itself
  return budget;
}

}  // namespace

KeyRateReport analyze(const ProtocolParams& p, const ObservedStats& o,
                      const AnalysisOptions& opts) {
  p.validate();
  const VirtualIntensities v = virtual_intensities(p);
  const TaggedDecomposition td = tagged_decomposition(p, v);
  const bounds::TailConfig cfg{p.xi};
  const decoy::RateBounds rb = decoy::rate_bounds(o, cfg, opts.tight_s00);

  decoy::DecoyOptions dopts;
  dopts.outlier = opts.outlier;

  ObservedStats obs = o;
  obs.n_delta = opts.outlier ? opts.n_delta : 0.0;

  KeyRateReport rep;
  rep.rate_bounds = rb;
  rep.decoy = decoy::decoy_chain(p, v, td, rb, obs, dopts);
  rep.aopp = aopp_chain(rep.decoy, obs, p);
  rep.rate_original_raw = key_rate_original_raw(rep.decoy, obs, p);
  rep.rate_original = floor_rate(rep.rate_original_raw);
  rep.rate_aopp_raw = key_rate_aopp_raw(rep.aopp, obs, p);
  rep.rate_aopp = floor_rate(rep.rate_aopp_raw);
  rep.failure_budget = failure_budget(p, opts);

  if (opts.mode == AnalysisMode::kAoppScan) {
    rep.scanned = true;
    const int points = std::max(2, opts.s00_grid_points);
    double best = rep.rate_aopp_raw;
    double argmin = 0.0;
    bool first = true;
    for (int i = 0; i < points; ++i) {
      decoy::DecoyOptions scan = dopts;
      scan.s00_override = rb.s00.lo + (rb.s00.hi - rb.s00.lo) * i / (points - 1);
      const decoy::DecoyBounds db = decoy::decoy_chain(p, v, td, rb, obs, scan);
      const double rate = key_rate_aopp_raw(aopp_chain(db, obs, p), obs, p);
      if (first || rate < best) {
        best = rate;
        argmin = *scan.s00_override;
        first = false;
      }
    }
    rep.rate_aopp_raw = best;
    rep.rate_aopp = floor_rate(best);
    rep.scan_s00_argmin = argmin;
  }
  return rep;
}

double key_rate_aopp_scan_s00(const ProtocolParams& p, const ObservedStats& o,
                              const AnalysisOptions& opts) {
  AnalysisOptions scan = opts;
  scan.mode = AnalysisMode::kAoppScan;
  return analyze(p, o, scan).rate_aopp;
}

}  // namespace snskr::keyrate

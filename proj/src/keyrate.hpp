#pragma once

// Final key-rate assembly: the original-protocol rate, the pairing-based
// two-way variant with its estimation chain, and the scan over the vacuum
// counting-rate interval.

#include "decoy.hpp"

namespace snskr::keyrate {

// Binary Shannon entropy in bits; throws outside [0, 1].
double binary_entropy(double x);

struct AoppChain {
  bool degenerate = false;  // some intermediate collapsed; rate is 0
  double u = 0;
  double n_u1_lower = 0, n_u0_lower = 0;
  double n1_lower = 0;        // n_u1^L + n_u0^L
  double n1_pairs_lower = 0;  // n_1^r, untagged pairs surviving the grouping
  double n_u1_prime = 0, n_u0_prime = 0;
  double n_min = 0;
  double n1_prime_lower = 0;  // untagged bits after pairing
  double r_correction = 0;
  double e_tau = 0;
  double ms_upper = 0;
  double e1ph_prime_upper = 0;
  bool e_tau_clamped = false;
  bool e1ph_prime_clamped = false;
};

AoppChain aopp_chain(const decoy::DecoyBounds& db, const ObservedStats& o,
                     const ProtocolParams& p);

// Per-pulse rates; *_raw keeps the sign for optimization, the public value is
// floored at 0. Rates below 1e-12 per pulse are reported as 0.
double key_rate_original_raw(const decoy::DecoyBounds& db,
                             const ObservedStats& o, const ProtocolParams& p);
double key_rate_original(const decoy::DecoyBounds& db, const ObservedStats& o,
                         const ProtocolParams& p);
double key_rate_aopp_raw(const AoppChain& chain, const ObservedStats& o,
                         const ProtocolParams& p);
double key_rate_aopp(const AoppChain& chain, const ObservedStats& o,
                     const ProtocolParams& p);

enum class AnalysisMode { kOriginal, kAopp, kAoppScan };

struct AnalysisOptions {
  AnalysisMode mode = AnalysisMode::kAopp;
  bool tight_s00 = false;
  bool outlier = false;
  double n_delta = 0;
  int s00_grid_points = 64;
};

struct KeyRateReport {
  double rate_original = 0;
  double rate_aopp = 0;  // scanned minimum in kAoppScan mode
  double rate_original_raw = 0;
  double rate_aopp_raw = 0;
  decoy::RateBounds rate_bounds;
  decoy::DecoyBounds decoy;  // evaluated at the standard interval endpoints
  AoppChain aopp;
  double failure_budget = 0;  // summed failure probability of all bounds used
  bool scanned = false;
  double scan_s00_argmin = 0;
};

// Full pipeline: virtual mapping, tagged decomposition, Chernoff rate
// bounds, decoy chain, both rates (and the scan when requested).
KeyRateReport analyze(const ProtocolParams& p, const ObservedStats& o,
                      const AnalysisOptions& opts);

// Minimum of the pairing rate over a grid of common <S00> values across its
// Chernoff interval.
double key_rate_aopp_scan_s00(const ProtocolParams& p, const ObservedStats& o,
                              const AnalysisOptions& opts);

}  // namespace snskr::keyrate

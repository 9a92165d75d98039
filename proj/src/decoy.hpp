#pragma once

// Decoy-state bound chain with source errors: Chernoff-bounded counting
// rates, single-photon yield lower bounds, phase-error upper bound, untagged
// counts, the outlier-tolerant variant and the BB84 single-photon cross-check.

#include <optional>

#include "channel.hpp"
#include "chernoff.hpp"
#include "protocol.hpp"

namespace snskr::decoy {

using bounds::TailConfig;

// Chernoff-bounded expected counting rates of the announced source pairs.
struct RateBounds {
  Interval s00;
  double s01_lower = 0, s10_lower = 0;
  double s02_upper = 0, s20_upper = 0;
  double tx_upper = 0;
};

RateBounds rate_bounds(const ObservedStats& o, const TailConfig& cfg,
                       bool tight_s00 = false);

// Photon-number coefficients of one side: point values for the stable weak
// decoy source at mu_1^U, interval bounds for the unstable strong source.
struct SideCoeffs {
  double c1[3] = {0, 0, 0};
  Interval c2[3];
};

SideCoeffs side_coeffs(double mu1_u, const Interval& mu2_range);

// Expected single-photon yield lower bound from one side's decoy data,
// clamped at 0. Throws ConfigurationError when the decoy denominator is not
// positive (intensities too close after fluctuation widening).
double single_photon_yield_lower(double s_weak_lower, double s_strong_upper,
                                 double s00_upper, const SideCoeffs& side);

double s10_lower(const RateBounds& rb, const SideCoeffs& a);
double s01_lower(const RateBounds& rb, const SideCoeffs& b);

// Outlier-tolerant variant: the weak-source rate loses n_delta/N_pairs.
double s10_lower_outlier(const RateBounds& rb, const SideCoeffs& a,
                         double n_delta, double n_pairs_10);
double s01_lower_outlier(const RateBounds& rb, const SideCoeffs& b,
                         double n_delta, double n_pairs_01);

// Intensity-weighted mixture of the two one-sided yields.
double s1_lower(double s10_l, double s01_l, const VirtualIntensities& v);

struct Clamped {
  double value = 0;
  bool clamped = false;
};

// Upper bound on the expected phase-flip error rate of the untagged photons,
// clamped to [0, 1/2].
Clamped e1ph_mean_upper(double tx_upper, double s00_lower, double s1_l,
                        const VirtualIntensities& v);
// Appendix-D variant with the vacuum subtraction dropped.
Clamped e1ph_mean_upper_novacuum(double tx_upper, double s1_l,
                                 const VirtualIntensities& v);

struct UntaggedCounts {
  double n1_mean_lower = 0;   // <n_1>^L
  double n1_lower = 0;        // n_1^L (realized)
  double nu1_mean_lower = 0;  // <n_u1>^L
  double nu0_mean_lower = 0;  // <n_u0>^L
};

UntaggedCounts untagged_counts(const ProtocolParams& p,
                               const TaggedDecomposition& td, double s10_l,
                               double s01_l, double s1_l, const TailConfig& cfg);

// e_1^{ph,U} = O^U(n_1^L <e_1^ph>^U) / n_1^L, clamped to [0, 1/2].
Clamped e1ph_real_upper(double n1_lower, double e1ph_mean_u,
                        const TailConfig& cfg);

// Assembled chain.
struct DecoyBounds {
  double s10_lower = 0, s01_lower = 0, s1_lower = 0;
  double e1ph_mean_upper = 0;
  double n1_mean_lower = 0, n1_lower = 0;
  double e1ph_real_upper = 0;
  double nu1_mean_lower = 0, nu0_mean_lower = 0;
  bool yields_clamped = false;
  bool e1ph_mean_clamped = false;
  bool e1ph_real_clamped = false;
  bool degenerate = false;  // s1 or n1 vanished; key rate must be 0
};

struct DecoyOptions {
  bool outlier = false;  // Appendix-D formulas (n_delta subtraction, no vacuum term)
  // Scan support: replaces both roles of <S00> by one common value.
  std::optional<double> s00_override;
};

DecoyBounds decoy_chain(const ProtocolParams& p, const VirtualIntensities& v,
                        const TaggedDecomposition& td, const RateBounds& rb,
                        const ObservedStats& o, const DecoyOptions& opts);

// Appendix-C cross-check: single-photon count lower bound of the 3-intensity
// decoy BB84 source set, evaluated verbatim.
struct Bb84Inputs {
  double n_vac_upper = 0;  // <N_o>^U
  double n_x_lower = 0;    // <N_x>^L
  double n_y_upper = 0;    // <N_y>^U
  Interval ax[3];          // decoy-source coefficient bounds
  Interval ay[3];          // signal-source coefficient bounds
  double p_o = 0, p_x = 0, p_y = 0;
};

double bb84_n1y_lower(const Bb84Inputs& in);

}  // namespace snskr::decoy

#pragma once

// Protocol configuration, the real->virtual intensity mapping and the tagged
// single-photon decomposition of the signal sources.

#include <string>

namespace snskr {

// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const { return x >= lo && x <= hi; }
  double width() const { return hi - lo; }
};

struct ProtocolParams {
  // Nominal source intensities (mean photon number per pulse). Sources a0/b0
  // are vacuum; a1/b1 and a2/b2 are the weak and strong decoy sources, az/bz
  // the signal sources.
  double mu_a1 = 0.0, mu_a2 = 0.0, mu_az = 0.0;
  double mu_b1 = 0.0, mu_b2 = 0.0, mu_bz = 0.0;

  // Maximum relative intensity fluctuation per source, |delta_i| <= delta.
  double delta_a1 = 0.0, delta_a2 = 0.0, delta_az = 0.0;
  double delta_b1 = 0.0, delta_b2 = 0.0, delta_bz = 0.0;

  // Signal-window probabilities and decoy-source choice probabilities
  // (p_a0 = 1 - p_a1 - p_a2 within a decoy window).
  double p_az = 0.0, p_bz = 0.0;
  double p_a1 = 0.0, p_a2 = 0.0, p_b1 = 0.0, p_b2 = 0.0;

  // Sending probabilities within signal windows.
  double eps_a = 0.0, eps_b = 0.0;

  double n_total = 0.0;  // total pulse-pair count N
  double xi = 1e-10;     // Chernoff failure probability per bound
  double f_ec = 1.1;     // error-correction inefficiency

  // Finite-size security parameters.
  double eps_cor = 1e-10;
  double eps_pa = 1e-10;
  double eps_hat = 1e-10;
  double eps_aopp = 1e-10;  // failure probability in the pairing corrections

  double p_a0() const { return 1.0 - p_a1 - p_a2; }
  double p_b0() const { return 1.0 - p_b1 - p_b2; }

  // Throws ValidationError naming the violated invariant.
  void validate() const;

  // Set all six fluctuation bounds at once.
  void set_delta(double delta);
};

// Virtual-protocol intensities. The weak decoy sources become stable at
// mu^U = (1+delta)mu; the strong decoy and signal sources keep an intensity
// interval after the window-dependent virtual attenuation.
struct VirtualIntensities {
  double mu_a1_u = 0.0;
  double mu_b1_u = 0.0;
  Interval mu_a2, mu_b2, mu_az, mu_bz;
};

VirtualIntensities virtual_intensities(const ProtocolParams& p);

// Convex weights of the perfect single-photon parts of the two signal
// sources, chosen so that the untagged single photon matches the X-window
// single photon exactly.
struct TaggedDecomposition {
  double c_az1 = 0.0;
  double c_bz1 = 0.0;
};

TaggedDecomposition tagged_decomposition(const ProtocolParams& p,
                                         const VirtualIntensities& v);

// Poisson photon-number coefficient mu^k e^{-mu} / k!.
double poisson_coeff(double mu, int k);

// Exact range of poisson_coeff over an intensity interval (the coefficient
// peaks at mu = k).
Interval poisson_coeff_bounds(const Interval& mu_range, int k);

}  // namespace snskr

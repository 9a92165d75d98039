#pragma once

// Channel model and generation of observed statistics: the deterministic
// linear model used for the key-rate curves, and a statistical Monte-Carlo
// oracle that samples the same per-window click probabilities (with optional
// per-window intensity fluctuation) for validating both the linear model and
// the soundness of the bound chain.

#include <cstdint>
#include <optional>

#include "protocol.hpp"

namespace snskr {

struct ChannelParams {
  double length_ac_km = 0.0;
  double length_bc_km = 0.0;
  double alpha_db_per_km = 0.2;  // fiber loss coefficient
  double eta_d = 0.6;            // detector efficiency
  double p_d = 1e-8;             // dark-count probability per pulse per detector
  double e_d = 0.04;             // misalignment-error probability
  int phase_slices = 16;         // number M of phase post-selection slices

  double eta_a() const;  // detector efficiency folded into the A-side loss
  double eta_b() const;

  void validate() const;
};

struct ObservedStats {
  // Pulse-pair counts N_lr of the announced decoy source pairs.
  double n_pairs_00 = 0, n_pairs_01 = 0, n_pairs_10 = 0, n_pairs_02 = 0,
         n_pairs_20 = 0;
  // One-detector heralded counts n_lr of the same pairs.
  double heralds_00 = 0, heralds_01 = 0, heralds_10 = 0, heralds_02 = 0,
         heralds_20 = 0;

  double n_x_pairs = 0;   // N_X, pulse pairs passing phase post-selection
  double m_x_errors = 0;  // M_X, effective wrong events in X windows

  double n_t = 0;  // effective events in Z windows
  double e_z = 0;  // raw-key bit error rate

  // Pairing observables.
  double n_g = 0;        // pairs formed by odd-parity pairing
  double n_odd = 0;      // odd-parity pairs under random pairing
  double n_t_prime = 0;  // survived bits after pairing
  double e_z_prime = 0;  // bit error rate of survived bits

  // Full vacuum-vacuum population (includes not-send/not-send signal
  // windows); used by the tightened S00 estimation mode.
  double n_pairs_00_all = 0;
  double heralds_00_all = 0;

  double n_delta = 0;  // outlier-window bound, 0 when unused

  void validate() const;
};

struct PairCounts {
  double n00 = 0, n01 = 0, n10 = 0, n02 = 0, n20 = 0;
};

// Closed-form pulse-pair counts of the announced source pairs.
PairCounts pair_counts(const ProtocolParams& p);

// One-detector heralding probability of a phase-randomized pulse pair with
// received intensities mu_a', mu_b'.
double heralding_probability(double mu_a_recv, double mu_b_recv, double p_d);

// Deterministic expected-value statistics (counts rounded to integers).
ObservedStats linear_model_observed(const ProtocolParams& p,
                                    const ChannelParams& ch);

// Exact per-window probabilities behind the linear model, for statistical
// consistency checks against the Monte-Carlo sampler.
struct ModelProbabilities {
  double s00 = 0, s01 = 0, s10 = 0, s02 = 0, s20 = 0;
  double t_x = 0;  // wrong events per accepted X pair
  double s_z = 0;  // effective events per Z window
};

ModelProbabilities linear_model_probabilities(const ProtocolParams& p,
                                              const ChannelParams& ch);

struct MonteCarloOptions {
  double n_windows = 1e8;
  std::uint64_t seed = 1;
  // Soundness mode: draw per-window intensities uniformly within the
  // fluctuation box (aggregated exactly through the mixture marginals).
  bool fluctuate = false;
};

// Ground truth recorded by the Monte-Carlo oracle for soundness checks.
struct MonteCarloTruth {
  double untagged_count = 0;         // heralded single-photon Z-tilde events
  double untagged_phase_errors = 0;  // realized phase-flip errors among them
  double phase_error_prob = 0;       // per-bit phase-error probability used
};

ObservedStats monte_carlo_observed(const ProtocolParams& p,
                                   const ChannelParams& ch,
                                   const MonteCarloOptions& opts,
                                   MonteCarloTruth* truth = nullptr);

// Repeaterless secret-key capacity -log2(1 - eta) of a channel with total
// transmittance eta.
double plob_bound(double eta);

// PLOB bound of the configured channel including detector efficiency, and
// the absolute variant with perfect detectors.
double plob_of_channel(const ChannelParams& ch);
double absolute_plob(const ChannelParams& ch);

}  // namespace snskr

#include "channel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include "errors.hpp"

namespace snskr {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

double round_count(double x) { return std::floor(x + 0.5); }

struct Quadrature {
  std::vector<double> x;
  std::vector<double> w;
};

// Gauss-Legendre nodes/weights on [-1, 1] via Newton iteration on P_n.
Quadrature make_gauss_legendre(int n) {
  Quadrature q;
  q.x.resize(n);
  q.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    q.x[i] = -x;
    q.x[n - 1 - i] = x;
    q.w[i] = q.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  return q;
}

const Quadrature& gauss_legendre(int n) {
  static std::map<int, Quadrature> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
  return it->second;
}

// Average f over [lo, hi].
template <typename F>
double average(F&& f, double lo, double hi, int nodes) {
  if (hi <= lo) return f(lo);
  const Quadrature& q = gauss_legendre(nodes);
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double acc = 0.0;
  for (size_t i = 0; i < q.x.size(); ++i) acc += q.w[i] * f(mid + half * q.x[i]);
  return 0.5 * acc;
}

struct XWindowProbs {
  double right = 0.0;
  double wrong = 0.0;
};

// Lone-click probabilities averaged over the accepted phase slice of full
// width 2*pi/M around alignment. Misalignment enters as an interference
// visibility factor (1 - 2 e_d) on cos(theta).
XWindowProbs x_window_probs(double mu_a_recv, double mu_b_recv, double p_d,
                            double e_d, int slices) {
  const double sum = mu_a_recv + mu_b_recv;
  const double cross = 2.0 * std::sqrt(mu_a_recv * mu_b_recv) * (1.0 - 2.0 * e_d);
  const double half_width = std::numbers::pi / slices;
  XWindowProbs out;
  const Quadrature& q = gauss_legendre(64);
  for (size_t i = 0; i < q.x.size(); ++i) {
    const double theta = half_width * q.x[i];
    const double n_plus = 0.5 * (sum + cross * std::cos(theta));
    const double n_minus = 0.5 * (sum - cross * std::cos(theta));
    const double quiet_plus = (1.0 - p_d) * std::exp(-n_plus);
    const double quiet_minus = (1.0 - p_d) * std::exp(-n_minus);
    out.right += 0.5 * q.w[i] * (1.0 - quiet_plus) * quiet_minus;
    out.wrong += 0.5 * q.w[i] * (1.0 - quiet_minus) * quiet_plus;
  }
  return out;
}

}  // namespace

double ChannelParams::eta_a() const {
  return eta_d * std::pow(10.0, -alpha_db_per_km * length_ac_km / 10.0);
}

double ChannelParams::eta_b() const {
  return eta_d * std::pow(10.0, -alpha_db_per_km * length_bc_km / 10.0);
}

void ChannelParams::validate() const {
  require(length_ac_km >= 0.0 && length_bc_km >= 0.0, "fiber lengths must be >= 0");
  require(alpha_db_per_km >= 0.0, "loss coefficient must be >= 0");
  require(eta_d >= 0.0 && eta_d <= 1.0, "eta_d must lie in [0, 1]");
  require(p_d >= 0.0 && p_d <= 1.0, "p_d must lie in [0, 1]");
  require(e_d >= 0.0 && e_d <= 1.0, "e_d must lie in [0, 1]");
  require(phase_slices >= 1, "phase_slices must be >= 1");
}

void ObservedStats::validate() const {
  for (double c : {n_pairs_00, n_pairs_01, n_pairs_10, n_pairs_02, n_pairs_20,
                   heralds_00, heralds_01, heralds_10, heralds_02, heralds_20,
                   n_x_pairs, m_x_errors, n_t, n_g, n_odd, n_t_prime,
                   n_pairs_00_all, heralds_00_all, n_delta}) {
    require(c >= 0.0, "counts must be >= 0");
  }
  require(heralds_00 <= n_pairs_00 && heralds_01 <= n_pairs_01 &&
              heralds_10 <= n_pairs_10 && heralds_02 <= n_pairs_02 &&
              heralds_20 <= n_pairs_20,
          "heralded counts cannot exceed pulse-pair counts");
  require(m_x_errors <= n_x_pairs, "M_X cannot exceed N_X");
  require(e_z >= 0.0 && e_z <= 1.0, "e_z must lie in [0, 1]");
  require(e_z_prime >= 0.0 && e_z_prime <= 1.0, "e_z_prime must lie in [0, 1]");
  require(n_t_prime <= n_t, "survived bits cannot exceed raw bits");
}

PairCounts pair_counts(const ProtocolParams& p) {
  const double n = p.n_total;
  const double pa0 = p.p_a0(), pb0 = p.p_b0();
  PairCounts c;
  c.n00 = ((1 - p.p_az) * (1 - p.p_bz) * pa0 * pb0 +
           (1 - p.p_az) * p.p_bz * pa0 * (1 - p.eps_b) +
           p.p_az * (1 - p.p_bz) * (1 - p.eps_a) * pb0) *
          n;
  c.n01 = ((1 - p.p_az) * pa0 + p.p_az * (1 - p.eps_a)) * (1 - p.p_bz) * p.p_b1 * n;
  c.n10 = ((1 - p.p_bz) * pb0 + p.p_bz * (1 - p.eps_b)) * (1 - p.p_az) * p.p_a1 * n;
  c.n02 = ((1 - p.p_az) * pa0 + p.p_az * (1 - p.eps_a)) * (1 - p.p_bz) * p.p_b2 * n;
  c.n20 = ((1 - p.p_bz) * pb0 + p.p_bz * (1 - p.eps_b)) * (1 - p.p_az) * p.p_a2 * n;
  return c;
}

double heralding_probability(double mu_a_recv, double mu_b_recv, double p_d) {
  const double sum = mu_a_recv + mu_b_recv;
  const double bessel = std::cyl_bessel_i(0.0, std::sqrt(mu_a_recv * mu_b_recv));
  return 2.0 * (1.0 - p_d) * std::exp(-0.5 * sum) * bessel -
         2.0 * (1.0 - p_d) * (1.0 - p_d) * std::exp(-sum);
}

ObservedStats linear_model_observed(const ProtocolParams& p,
                                    const ChannelParams& ch) {
  p.validate();
  ch.validate();
  const double eta_a = ch.eta_a();
  const double eta_b = ch.eta_b();
  const double pd = ch.p_d;

  ObservedStats o;
  const PairCounts counts = pair_counts(p);
  o.n_pairs_00 = round_count(counts.n00);
  o.n_pairs_01 = round_count(counts.n01);
  o.n_pairs_10 = round_count(counts.n10);
  o.n_pairs_02 = round_count(counts.n02);
  o.n_pairs_20 = round_count(counts.n20);
  o.heralds_00 = round_count(o.n_pairs_00 * heralding_probability(0, 0, pd));
  o.heralds_01 =
      round_count(o.n_pairs_01 * heralding_probability(0, eta_b * p.mu_b1, pd));
  o.heralds_10 =
      round_count(o.n_pairs_10 * heralding_probability(eta_a * p.mu_a1, 0, pd));
  o.heralds_02 =
      round_count(o.n_pairs_02 * heralding_probability(0, eta_b * p.mu_b2, pd));
  o.heralds_20 =
      round_count(o.n_pairs_20 * heralding_probability(eta_a * p.mu_a2, 0, pd));

  // X windows: both picked the weak decoy source and the announced phase
  // difference fell into one of the two accepted slices.
  const double accept = 2.0 / ch.phase_slices;
  o.n_x_pairs = round_count(p.n_total * (1 - p.p_az) * (1 - p.p_bz) * p.p_a1 *
                            p.p_b1 * accept);
  const XWindowProbs xp = x_window_probs(eta_a * p.mu_a1, eta_b * p.mu_b1, pd,
                                         ch.e_d, ch.phase_slices);
  o.m_x_errors = round_count(o.n_x_pairs * xp.wrong);

  // Z windows. Effective events from exactly-one-sends windows carry the
  // correct bit; both-send and neither-send events are raw-key errors.
  const double n_z = p.n_total * p.p_az * p.p_bz;
  const double z_alice = p.eps_a * (1 - p.eps_b) *
                         heralding_probability(eta_a * p.mu_az, 0, pd);
  const double z_bob = (1 - p.eps_a) * p.eps_b *
                       heralding_probability(0, eta_b * p.mu_bz, pd);
  const double z_both = p.eps_a * p.eps_b *
                        heralding_probability(eta_a * p.mu_az, eta_b * p.mu_bz, pd);
  const double z_none =
      (1 - p.eps_a) * (1 - p.eps_b) * heralding_probability(0, 0, pd);
  const double z_tot = z_alice + z_bob + z_both + z_none;
  o.n_t = round_count(n_z * z_tot);
  o.e_z = z_tot > 0 ? (z_both + z_none) / z_tot : 0.0;

  // Pairing observables. Bob's bit is 1 when he did not send, so the 1-group
  // collects the Alice-sends and neither-sends events.
  const double ones = n_z * (z_alice + z_none);
  const double zeros = n_z * (z_bob + z_both);
  o.n_g = round_count(std::min(ones, zeros));
  o.n_odd = n_z * z_tot > 1 ? round_count(ones * zeros / (n_z * z_tot - 1)) : 0.0;
  const double alice1_given_one = z_alice + z_none > 0
                                      ? z_alice / (z_alice + z_none)
                                      : 0.0;
  const double alice1_given_zero = z_bob + z_both > 0
                                       ? z_both / (z_bob + z_both)
                                       : 0.0;
  const double survive = alice1_given_one * (1 - alice1_given_zero) +
                         (1 - alice1_given_one) * alice1_given_zero;
  o.n_t_prime = round_count(std::min(o.n_g * survive, o.n_t));
  o.e_z_prime = survive > 0
                    ? (1 - alice1_given_one) * alice1_given_zero / survive
                    : 0.0;

  // Full vacuum-vacuum population for the tightened S00 estimate.
  const double n00_all = ((1 - p.p_az) * p.p_a0() + p.p_az * (1 - p.eps_a)) *
                         ((1 - p.p_bz) * p.p_b0() + p.p_bz * (1 - p.eps_b)) *
                         p.n_total;
  o.n_pairs_00_all = round_count(n00_all);
  o.heralds_00_all = round_count(o.n_pairs_00_all * heralding_probability(0, 0, pd));

  o.validate();
  return o;
}

ModelProbabilities linear_model_probabilities(const ProtocolParams& p,
                                              const ChannelParams& ch) {
  const double eta_a = ch.eta_a();
  const double eta_b = ch.eta_b();
  const double pd = ch.p_d;
  ModelProbabilities m;
  m.s00 = heralding_probability(0, 0, pd);
  m.s01 = heralding_probability(0, eta_b * p.mu_b1, pd);
  m.s10 = heralding_probability(eta_a * p.mu_a1, 0, pd);
  m.s02 = heralding_probability(0, eta_b * p.mu_b2, pd);
  m.s20 = heralding_probability(eta_a * p.mu_a2, 0, pd);
  m.t_x = x_window_probs(eta_a * p.mu_a1, eta_b * p.mu_b1, pd, ch.e_d,
                         ch.phase_slices)
              .wrong;
  m.s_z = p.eps_a * (1 - p.eps_b) *
              heralding_probability(eta_a * p.mu_az, 0, pd) +
          (1 - p.eps_a) * p.eps_b *
              heralding_probability(0, eta_b * p.mu_bz, pd) +
          p.eps_a * p.eps_b *
              heralding_probability(eta_a * p.mu_az, eta_b * p.mu_bz, pd) +
          (1 - p.eps_a) * (1 - p.eps_b) * m.s00;
  return m;
}

namespace {

// One-detector heralding probability for k photons entering one arm: the
// photons must all exit toward the same detector and the other must stay
// dark. No interference partner, so the splitter acts binomially.
double fock_yield(int k, double eta, double p_d) {
  const double dark_only = 2.0 * p_d * (1.0 - p_d);
  double prob = 0.0;
  double binom = 1.0;  // C(k, m) eta^m (1-eta)^(k-m), built incrementally
  for (int m = 0; m <= k; ++m) {
    const double weight =
        binom * std::pow(eta, m) * std::pow(1.0 - eta, k - m);
    prob += weight * (m == 0 ? dark_only
                             : std::pow(2.0, 1 - m) * (1.0 - p_d));
    binom = binom * (k - m) / (m + 1);
  }
  return prob;
}

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double binomial(double n, double prob) {
    if (n <= 0 || prob <= 0) return 0;
    if (prob >= 1) return n;
    std::binomial_distribution<long long> dist(static_cast<long long>(n), prob);
    return static_cast<double>(dist(rng_));
  }

  // Multinomial split of n over the given cell probabilities (must sum to
  // <= 1; the remainder is dropped).
  std::vector<double> multinomial(double n, const std::vector<double>& probs) {
    std::vector<double> out(probs.size(), 0.0);
    double remaining = n;
    double mass = 1.0;
    for (size_t i = 0; i < probs.size(); ++i) {
      if (remaining <= 0 || mass <= 0) break;
      const double q = std::min(1.0, probs[i] / mass);
      out[i] = binomial(remaining, q);
      remaining -= out[i];
      mass -= probs[i];
    }
    return out;
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

ObservedStats monte_carlo_observed(const ProtocolParams& p,
                                   const ChannelParams& ch,
                                   const MonteCarloOptions& opts,
                                   MonteCarloTruth* truth) {
  p.validate();
  ch.validate();
  require(opts.n_windows >= 1, "n_windows must be >= 1");
  Sampler sampler(opts.seed);
  const double eta_a = ch.eta_a();
  const double eta_b = ch.eta_b();
  const double pd = ch.p_d;

  const double da1 = opts.fluctuate ? p.delta_a1 : 0.0;
  const double da2 = opts.fluctuate ? p.delta_a2 : 0.0;
  const double daz = opts.fluctuate ? p.delta_az : 0.0;
  const double db1 = opts.fluctuate ? p.delta_b1 : 0.0;
  const double db2 = opts.fluctuate ? p.delta_b2 : 0.0;
  const double dbz = opts.fluctuate ? p.delta_bz : 0.0;

  // Per-window click probabilities, marginalized over the uniform intensity
  // draw. Mixing i.i.d. windows keeps every aggregate count exactly binomial
  // with the averaged probability.
  auto herald_one_sided = [&](double mu, double eta, double delta) {
    return average(
        [&](double d) { return heralding_probability(eta * mu * (1 + d), 0, pd); },
        -delta, delta, 16);
  };
  auto herald_two_sided = [&](double mu_a, double delta_a, double mu_b,
                              double delta_b) {
    return average(
        [&](double d_a) {
          return average(
              [&](double d_b) {
                return heralding_probability(eta_a * mu_a * (1 + d_a),
                                             eta_b * mu_b * (1 + d_b), pd);
              },
              -delta_b, delta_b, 16);
        },
        -delta_a, delta_a, 16);
  };

  const double s_dark = heralding_probability(0, 0, pd);
  const double s01 = herald_one_sided(p.mu_b1, eta_b, db1);
  const double s10 = herald_one_sided(p.mu_a1, eta_a, da1);
  const double s02 = herald_one_sided(p.mu_b2, eta_b, db2);
  const double s20 = herald_one_sided(p.mu_a2, eta_a, da2);

  const double t_x = average(
      [&](double d_a) {
        return average(
            [&](double d_b) {
              return x_window_probs(eta_a * p.mu_a1 * (1 + d_a),
                                    eta_b * p.mu_b1 * (1 + d_b), pd, ch.e_d,
                                    ch.phase_slices)
                  .wrong;
            },
            -db1, db1, 16);
      },
      -da1, da1, 16);

  // Window-class probabilities (announced data determines the class).
  const double pa0 = p.p_a0(), pb0 = p.p_b0();
  const double a_vac = (1 - p.p_az) * pa0 + p.p_az * (1 - p.eps_a);
  const double b_vac = (1 - p.p_bz) * pb0 + p.p_bz * (1 - p.eps_b);
  const double q00 = a_vac * b_vac - p.p_az * p.p_bz * (1 - p.eps_a) * (1 - p.eps_b);
  const double q01 = a_vac * (1 - p.p_bz) * p.p_b1;
  const double q10 = b_vac * (1 - p.p_az) * p.p_a1;
  const double q02 = a_vac * (1 - p.p_bz) * p.p_b2;
  const double q20 = b_vac * (1 - p.p_az) * p.p_a2;
  const double qx = (1 - p.p_az) * (1 - p.p_bz) * p.p_a1 * p.p_b1;
  const double qz = p.p_az * p.p_bz;
  const double qzA = qz * p.eps_a * (1 - p.eps_b);
  const double qzB = qz * (1 - p.eps_a) * p.eps_b;
  const double qzC = qz * p.eps_a * p.eps_b;
  const double qzD = qz * (1 - p.eps_a) * (1 - p.eps_b);

  const std::vector<double> cells =
      sampler.multinomial(std::floor(opts.n_windows),
                          {q00, q01, q10, q02, q20, qx, qzA, qzB, qzC, qzD});

  ObservedStats o;
  o.n_pairs_00 = cells[0];
  o.n_pairs_01 = cells[1];
  o.n_pairs_10 = cells[2];
  o.n_pairs_02 = cells[3];
  o.n_pairs_20 = cells[4];
  o.heralds_00 = sampler.binomial(cells[0], s_dark);
  o.heralds_01 = sampler.binomial(cells[1], s01);
  o.heralds_10 = sampler.binomial(cells[2], s10);
  o.heralds_02 = sampler.binomial(cells[3], s02);
  o.heralds_20 = sampler.binomial(cells[4], s20);

  o.n_x_pairs = sampler.binomial(cells[5], 2.0 / ch.phase_slices);
  o.m_x_errors = sampler.binomial(o.n_x_pairs, t_x);

  // Z windows with photon-number resolution on the one-sender classes, so
  // the heralded single-photon (untagged) events are identifiable.
  constexpr int kMaxPhotons = 30;
  auto send_class = [&](double windows, double mu, double delta, double eta,
                        double* single_photon_heralds) {
    std::vector<double> photon_probs(kMaxPhotons + 1);
    double tail = 1.0;
    for (int k = 0; k < kMaxPhotons; ++k) {
      photon_probs[k] = average(
          [&](double d) { return poisson_coeff(mu * (1 + d), k); }, -delta,
          delta, 16);
      tail -= photon_probs[k];
    }
    photon_probs[kMaxPhotons] = std::max(0.0, tail);
    const std::vector<double> by_k = sampler.multinomial(windows, photon_probs);
    double heralds = 0.0;
    for (int k = 0; k <= kMaxPhotons; ++k) {
      const double h = sampler.binomial(by_k[k], fock_yield(k, eta, pd));
      heralds += h;
      if (k == 1 && single_photon_heralds) *single_photon_heralds += h;
    }
    return heralds;
  };

  double untagged = 0.0;
  const double n_zA = send_class(cells[6], p.mu_az, daz, eta_a, &untagged);
  const double n_zB = send_class(cells[7], p.mu_bz, dbz, eta_b, &untagged);
  const double n_zC =
      sampler.binomial(cells[8], herald_two_sided(p.mu_az, daz, p.mu_bz, dbz));
  const double n_zD = sampler.binomial(cells[9], s_dark);

  o.n_t = n_zA + n_zB + n_zC + n_zD;
  o.e_z = o.n_t > 0 ? (n_zC + n_zD) / o.n_t : 0.0;

  o.n_pairs_00_all = o.n_pairs_00 + cells[9];
  o.heralds_00_all = o.heralds_00 + n_zD;

  // Literal pairing on the sampled raw keys. Bob's 1-group holds the
  // Alice-sends (correct) and neither-sends (wrong) events.
  {
    auto fill_bits = [](std::vector<std::uint8_t>& v, double n_ones,
                        double n_zeros) {
      v.assign(static_cast<size_t>(n_ones + n_zeros), 0);
      std::fill(v.begin(), v.begin() + static_cast<size_t>(n_ones), 1);
    };
    std::vector<std::uint8_t> bob_bits;
    fill_bits(bob_bits, n_zA + n_zD, n_zB + n_zC);
    std::shuffle(bob_bits.begin(), bob_bits.end(), sampler.rng());
    double odd = 0.0;
    for (size_t i = 0; i + 1 < bob_bits.size(); i += 2) {
      odd += bob_bits[i] != bob_bits[i + 1];
    }
    o.n_odd = odd;

    std::vector<std::uint8_t> alice_of_one, alice_of_zero;
    fill_bits(alice_of_one, n_zA, n_zD);   // alice sent on the correct ones
    fill_bits(alice_of_zero, n_zC, n_zB);  // alice sent on the wrong zeros
    std::shuffle(alice_of_one.begin(), alice_of_one.end(), sampler.rng());
    std::shuffle(alice_of_zero.begin(), alice_of_zero.end(), sampler.rng());
    const size_t pairs = std::min(alice_of_one.size(), alice_of_zero.size());
    o.n_g = static_cast<double>(pairs);
    double survived = 0.0, wrong = 0.0;
    for (size_t i = 0; i < pairs; ++i) {
      if (alice_of_one[i] != alice_of_zero[i]) {
        survived += 1.0;
        wrong += alice_of_one[i] == 0;  // both bits of the pair were errors
      }
    }
    o.n_t_prime = survived;
    o.e_z_prime = survived > 0 ? wrong / survived : 0.0;
  }

  if (truth) {
    // Counterfactual X-basis test of the untagged single photon: amplitudes
    // follow the virtual X-window intensities, detection goes through the
    // same slice-averaged interferometer.
    const VirtualIntensities v = virtual_intensities(p);
    const double wa = v.mu_a1_u / (v.mu_a1_u + v.mu_b1_u);
    const double wb = 1.0 - wa;
    const double direct = wa * eta_a + wb * eta_b;
    const double cross =
        2.0 * std::sqrt(wa * eta_a * wb * eta_b) * (1.0 - 2.0 * ch.e_d);
    const double half_width = std::numbers::pi / ch.phase_slices;
    double p_right = 0.0, p_wrong = 0.0;
    const Quadrature& q = gauss_legendre(64);
    for (size_t i = 0; i < q.x.size(); ++i) {
      const double c = std::cos(half_width * q.x[i]);
      const double to_plus = 0.5 * (direct + cross * c);
      const double to_minus = 0.5 * (direct - cross * c);
      const double lost = 1.0 - to_plus - to_minus;
      p_right += 0.5 * q.w[i] * (to_plus * (1 - pd) + lost * pd * (1 - pd));
      p_wrong += 0.5 * q.w[i] * (to_minus * (1 - pd) + lost * pd * (1 - pd));
    }
    truth->phase_error_prob =
        p_right + p_wrong > 0 ? p_wrong / (p_right + p_wrong) : 0.0;
    truth->untagged_count = untagged;
    truth->untagged_phase_errors =
        sampler.binomial(untagged, truth->phase_error_prob);
  }

  o.validate();
  return o;
}

double plob_bound(double eta) {
  if (!(eta >= 0.0 && eta < 1.0)) {
    throw ValidationError("plob_bound: eta must lie in [0, 1)");
  }
  return -std::log2(1.0 - eta);
}

double plob_of_channel(const ChannelParams& ch) {
  const double loss =
      ch.alpha_db_per_km * (ch.length_ac_km + ch.length_bc_km) / 10.0;
  return plob_bound(ch.eta_d * std::pow(10.0, -loss));
}

double absolute_plob(const ChannelParams& ch) {
  const double loss =
      ch.alpha_db_per_km * (ch.length_ac_km + ch.length_bc_km) / 10.0;
  return plob_bound(std::pow(10.0, -loss));
}

}  // namespace snskr

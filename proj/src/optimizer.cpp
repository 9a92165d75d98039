#include "optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "errors.hpp"

namespace snskr::opt {

const std::vector<std::string> kParameterNames = {
    "mu_a1", "mu_a2", "mu_az", "mu_b1", "mu_b2", "mu_bz", "p_a1",
    "p_a2",  "p_b1",  "p_b2",  "p_az",  "p_bz",  "eps_a", "eps_b"};

namespace {

// Objective ordering: invalid parameters < degenerate bound chains < any
// finite raw rate (raw rates are bounded below by -f_ec, so -2 sits under
// them all). Keeps the search off the flat degenerate plateau.
constexpr double kInfeasible = -10.0;
constexpr double kDegenerate = -2.0;

double* field(ProtocolParams& p, const std::string& name) {
  if (name == "mu_a1") return &p.mu_a1;
  if (name == "mu_a2") return &p.mu_a2;
  if (name == "mu_az") return &p.mu_az;
  if (name == "mu_b1") return &p.mu_b1;
  if (name == "mu_b2") return &p.mu_b2;
  if (name == "mu_bz") return &p.mu_bz;
  if (name == "p_a1") return &p.p_a1;
  if (name == "p_a2") return &p.p_a2;
  if (name == "p_b1") return &p.p_b1;
  if (name == "p_b2") return &p.p_b2;
  if (name == "p_az") return &p.p_az;
  if (name == "p_bz") return &p.p_bz;
  if (name == "eps_a") return &p.eps_a;
  if (name == "eps_b") return &p.eps_b;
  return nullptr;
}

bool is_intensity(const std::string& name) { return name.rfind("mu_", 0) == 0; }

Interval default_box(const std::string& name) {
  return is_intensity(name) ? Interval{1e-4, 1.0} : Interval{1e-4, 0.999};
}

struct Mapper {
  std::vector<std::string> names;              // free parameters, canonical order
  std::vector<Interval> boxes;
  bool symmetric = false;
  ProtocolParams base;

  size_t dim() const { return names.size(); }

  // Internal coordinates live in [0,1]^d. The strong decoy intensity maps to
  // a position inside [mu_1, box.hi] so the source ordering always holds, and
  // the second decoy probability maps to a fraction of what the first one
  // left free in the simplex.
  ProtocolParams to_params(const std::vector<double>& x) const {
    ProtocolParams p = base;
    for (size_t i = 0; i < names.size(); ++i) {
      const double t = std::clamp(x[i], 0.0, 1.0);
      const Interval& box = boxes[i];
      double value = box.lo + t * (box.hi - box.lo);
      if (names[i] == "mu_a2") {
        value = p.mu_a1 + t * std::max(0.0, box.hi - p.mu_a1);
      } else if (names[i] == "mu_b2") {
        value = p.mu_b1 + t * std::max(0.0, box.hi - p.mu_b1);
      } else if (names[i] == "p_a2") {
        value = t * std::min(box.hi, 1.0 - p.p_a1);
      } else if (names[i] == "p_b2") {
        value = t * std::min(box.hi, 1.0 - p.p_b1);
      }
      *field(p, names[i]) = value;
    }
    if (symmetric) {
      p.mu_b1 = p.mu_a1;
      p.mu_b2 = p.mu_a2;
      p.mu_bz = p.mu_az;
      p.p_b1 = p.p_a1;
      p.p_b2 = p.p_a2;
      p.p_bz = p.p_az;
      p.eps_b = p.eps_a;
      p.delta_b1 = p.delta_a1;
      p.delta_b2 = p.delta_a2;
      p.delta_bz = p.delta_az;
    }
    return p;
  }

  std::vector<double> from_params(const ProtocolParams& q) const {
    ProtocolParams p = q;
    std::vector<double> x(names.size(), 0.5);
    for (size_t i = 0; i < names.size(); ++i) {
      const Interval& box = boxes[i];
      const double value = *field(p, names[i]);
      double t;
      if (names[i] == "mu_a2") {
        const double span = std::max(0.0, box.hi - p.mu_a1);
        t = span > 0 ? (value - p.mu_a1) / span : 0.0;
      } else if (names[i] == "mu_b2") {
        const double span = std::max(0.0, box.hi - p.mu_b1);
        t = span > 0 ? (value - p.mu_b1) / span : 0.0;
      } else if (names[i] == "p_a2") {
        const double span = std::min(box.hi, 1.0 - p.p_a1);
        t = span > 0 ? value / span : 0.0;
      } else if (names[i] == "p_b2") {
        const double span = std::min(box.hi, 1.0 - p.p_b1);
        t = span > 0 ? value / span : 0.0;
      } else {
        t = (value - box.lo) / (box.hi - box.lo);
      }
      x[i] = std::clamp(t, 0.0, 1.0);
    }
    return x;
  }
};

struct Incumbent {
  double rate = -1e300;
  std::vector<double> x;

  // Deterministic reduction: higher rate wins, lexicographically smaller
  // position breaks ties.
  void offer(double r, const std::vector<double>& pos) {
    if (r > rate || (r == rate && !x.empty() && pos < x)) {
      rate = r;
      x = pos;
    }
  }
};

class Search {
 public:
  Search(const Mapper& mapper, const ChannelParams& ch,
         keyrate::AnalysisOptions analysis, long long budget,
         std::vector<TraceEntry>* trace)
      : mapper_(mapper), ch_(ch), analysis_(analysis), budget_(budget),
        trace_(trace) {}

  bool exhausted() const { return used_ >= budget_; }
  long long used() const { return used_; }

  double eval(const std::vector<double>& x, keyrate::AnalysisMode mode) {
    if (exhausted()) return kInfeasible;
    ++used_;
    double rate = kInfeasible;
    try {
      const ProtocolParams p = mapper_.to_params(x);
      p.validate();
      const ObservedStats o = linear_model_observed(p, ch_);
      keyrate::AnalysisOptions opts = analysis_;
      opts.mode = mode;
      const keyrate::KeyRateReport rep = keyrate::analyze(p, o, opts);
      if (mode == keyrate::AnalysisMode::kOriginal) {
        rate = rep.decoy.degenerate ? kDegenerate : rep.rate_original_raw;
      } else {
        rate = rep.aopp.degenerate ? kDegenerate : rep.rate_aopp_raw;
      }
    } catch (const ValidationError&) {
      rate = kInfeasible;
    }
    if (trace_) trace_->push_back({rate, x});
    return rate;
  }

  // Greedy per-coordinate moves with adaptive step shrinking.
  void coordinate_descent(std::vector<double> x, keyrate::AnalysisMode mode,
                          long long max_evals, Incumbent* best) {
    const long long stop = std::min(budget_, used_ + max_evals);
    double fx = eval(x, mode);
    best->offer(fx, x);
    double step = 0.25;
    while (step > 1e-4 && used_ < stop) {
      bool improved = false;
      for (size_t i = 0; i < mapper_.dim() && used_ < stop; ++i) {
        for (double dir : {+1.0, -1.0}) {
          std::vector<double> cand = x;
          cand[i] = std::clamp(cand[i] + dir * step, 0.0, 1.0);
          if (cand[i] == x[i]) continue;
          const double fc = eval(cand, mode);
          if (fc > fx) {
            x = cand;
            fx = fc;
            best->offer(fx, x);
            improved = true;
            break;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
  }

  // Downhill simplex (maximizing), deterministic, with dimension-adapted
  // expansion/contraction/shrink coefficients.
  void nelder_mead(std::vector<double> start, keyrate::AnalysisMode mode,
                   long long max_evals, Incumbent* best,
                   double spread = 0.05) {
    const long long stop = std::min(budget_, used_ + max_evals);
    const size_t d = mapper_.dim();
    const double dd = static_cast<double>(d);
    const double expand = 1.0 + 2.0 / dd;
    const double contract = 0.75 - 1.0 / (2.0 * dd);
    const double shrink = 1.0 - 1.0 / dd;
    std::vector<std::vector<double>> simplex;
    std::vector<double> value;
    simplex.push_back(start);
    value.push_back(eval(start, mode));
    best->offer(value.back(), start);
    for (size_t i = 0; i < d; ++i) {
      std::vector<double> v = start;
      v[i] = std::clamp(v[i] + (v[i] > 1.0 - spread ? -spread : spread), 0.0,
                        1.0);
      simplex.push_back(v);
      value.push_back(eval(v, mode));
      best->offer(value.back(), v);
    }
    auto order = [&] {
      std::vector<size_t> idx(simplex.size());
      for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      std::stable_sort(idx.begin(), idx.end(),
                       [&](size_t a, size_t b) { return value[a] > value[b]; });
      std::vector<std::vector<double>> s2;
      std::vector<double> v2;
      for (size_t i : idx) {
        s2.push_back(simplex[i]);
        v2.push_back(value[i]);
      }
      simplex.swap(s2);
      value.swap(v2);
    };
    auto blend = [&](const std::vector<double>& a, const std::vector<double>& b,
                     double w) {
      std::vector<double> out(d);
      for (size_t i = 0; i < d; ++i) {
        out[i] = std::clamp(a[i] + w * (a[i] - b[i]), 0.0, 1.0);
      }
      return out;
    };
    while (used_ < stop) {
      order();
      if (value.front() - value.back() < 1e-15) break;
      std::vector<double> centroid(d, 0.0);
      for (size_t i = 0; i + 1 < simplex.size(); ++i) {
        for (size_t k = 0; k < d; ++k) centroid[k] += simplex[i][k];
      }
      for (size_t k = 0; k < d; ++k) centroid[k] /= static_cast<double>(d);
      const std::vector<double>& worst = simplex.back();
      const std::vector<double> refl = blend(centroid, worst, 1.0);
      const double f_refl = eval(refl, mode);
      best->offer(f_refl, refl);
      if (f_refl > value.front()) {
        const std::vector<double> expd = blend(centroid, worst, expand);
        const double f_expd = eval(expd, mode);
        best->offer(f_expd, expd);
        simplex.back() = f_expd > f_refl ? expd : refl;
        value.back() = std::max(f_expd, f_refl);
        continue;
      }
      if (f_refl > value[value.size() - 2]) {
        simplex.back() = refl;
        value.back() = f_refl;
        continue;
      }
      const std::vector<double> contr = blend(centroid, worst, -contract);
      const double f_contr = eval(contr, mode);
      best->offer(f_contr, contr);
      if (f_contr > value.back()) {
        simplex.back() = contr;
        value.back() = f_contr;
        continue;
      }
      for (size_t i = 1; i < simplex.size() && used_ < stop; ++i) {
        for (size_t k = 0; k < d; ++k) {
          simplex[i][k] =
              simplex[0][k] + shrink * (simplex[i][k] - simplex[0][k]);
        }
        value[i] = eval(simplex[i], mode);
        best->offer(value[i], simplex[i]);
      }
    }
  }

 private:
  const Mapper& mapper_;
  const ChannelParams& ch_;
  keyrate::AnalysisOptions analysis_;
  long long budget_ = 0;
  long long used_ = 0;
  std::vector<TraceEntry>* trace_;
};

std::vector<std::vector<double>> latin_hypercube(size_t count, size_t dim,
                                                 std::mt19937_64& rng) {
  std::vector<std::vector<double>> seeds(count, std::vector<double>(dim));
  std::uniform_real_distribution<double> jitter(0.0, 1.0);
  for (size_t k = 0; k < dim; ++k) {
    std::vector<size_t> strata(count);
    for (size_t i = 0; i < count; ++i) strata[i] = i;
    std::shuffle(strata.begin(), strata.end(), rng);
    for (size_t i = 0; i < count; ++i) {
      seeds[i][k] = (strata[i] + jitter(rng)) / static_cast<double>(count);
    }
  }
  return seeds;
}

// Protocol-shaped random start: signal-heavy windows, decoy intensities
// below the signal one, and the two sides scaled so the received intensities
// roughly balance at the measurement node. The positive-rate region is a
// narrow manifold in 14 dimensions; unstructured draws rarely touch it.
ProtocolParams heuristic_candidate(const ProtocolParams& base,
                                   const ChannelParams& ch,
                                   std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto u = [&] { return u01(rng); };
  ProtocolParams p = base;
  const double ratio = std::clamp(ch.eta_a() / ch.eta_b(), 1e-3, 1e3);
  p.mu_az = 0.1 + 0.7 * u();
  p.mu_bz = std::clamp(p.mu_az * ratio * (0.6 + 0.8 * u()), 1e-4, 0.999);
  p.mu_a1 = p.mu_az * (0.03 + 0.25 * u());
  p.mu_b1 = std::clamp(p.mu_a1 * ratio * (0.6 + 0.8 * u()), 1e-4, 0.999);
  p.mu_a2 = p.mu_a1 + (0.2 + 0.6 * u()) * std::max(0.05, p.mu_az - p.mu_a1);
  p.mu_b2 = p.mu_b1 + (0.2 + 0.6 * u()) * std::max(0.05, p.mu_bz - p.mu_b1);
  p.p_az = 0.35 + 0.6 * u();
  p.p_bz = 0.35 + 0.6 * u();
  p.p_a1 = 0.2 + 0.75 * u();
  p.p_a2 = (1.0 - p.p_a1) * (0.05 + 0.6 * u());
  p.p_b1 = 0.2 + 0.75 * u();
  p.p_b2 = (1.0 - p.p_b1) * (0.05 + 0.6 * u());
  p.eps_a = 0.02 + 0.4 * u();
  p.eps_b = 0.02 + 0.4 * u();
  return p;
}

}  // namespace

void OptimizationSpec::validate() const {
  if (budget < 1) throw ValidationError("optimizer budget must be >= 1");
  if (restarts < 1) throw ValidationError("optimizer restarts must be >= 1");
  for (const auto& name : free_parameters) {
    ProtocolParams probe;
    if (field(probe, name) == nullptr) {
      throw ValidationError("unknown free parameter '" + name + "'");
    }
  }
  for (const auto& [name, box] : box_bounds) {
    ProtocolParams probe;
    if (field(probe, name) == nullptr) {
      throw ValidationError("unknown box-bound parameter '" + name + "'");
    }
    if (!(box.lo < box.hi)) {
      throw ValidationError("empty box for parameter '" + name + "'");
    }
  }
}

OptimResult optimize(const OptimizationSpec& spec, const ChannelParams& ch,
                     const ProtocolParams& base,
                     const ProtocolParams* warm_start) {
  spec.validate();
  ch.validate();

  Mapper mapper;
  mapper.symmetric = spec.symmetric;
  mapper.base = base;
  std::vector<std::string> wanted = spec.free_parameters;
  if (wanted.empty()) {
    for (const auto& name : kParameterNames) {
      if (spec.symmetric && name.find("_b") != std::string::npos) continue;
      wanted.push_back(name);
    }
  }
  // Canonical order so that mu_1 is applied before mu_2 (the latter is
  // expressed relative to the former), and deterministically overall.
  for (const auto& name : kParameterNames) {
    if (std::find(wanted.begin(), wanted.end(), name) == wanted.end()) continue;
    mapper.names.push_back(name);
    auto it = spec.box_bounds.find(name);
    mapper.boxes.push_back(it != spec.box_bounds.end() ? it->second
                                                       : default_box(name));
  }

  const keyrate::AnalysisMode final_mode =
      spec.objective == Objective::kOriginal ? keyrate::AnalysisMode::kOriginal
      : spec.objective == Objective::kAopp   ? keyrate::AnalysisMode::kAopp
                                             : keyrate::AnalysisMode::kAoppScan;
  // The scan objective costs one chain per grid point; the bulk of the search
  // runs on the unscanned rate and only the polish pays for the scan.
  const keyrate::AnalysisMode bulk_mode =
      final_mode == keyrate::AnalysisMode::kAoppScan
          ? keyrate::AnalysisMode::kAopp
          : final_mode;

  OptimResult result;
  Search search(mapper, ch, spec.analysis, spec.budget, &result.trace);
  Incumbent best;

  const std::vector<double> center(mapper.dim(), 0.5);
  if (spec.budget == 1) {
    const double rate = search.eval(center, final_mode);
    best.offer(rate, center);
  } else {
    std::mt19937_64 rng(spec.seed);
    const size_t shaped = (static_cast<size_t>(spec.restarts) + 1) / 2;
    std::vector<std::vector<double>> seeds = latin_hypercube(
        static_cast<size_t>(spec.restarts) - shaped, mapper.dim(), rng);
    for (size_t i = 0; i < shaped; ++i) {
      seeds.push_back(mapper.from_params(heuristic_candidate(base, ch, rng)));
    }
    if (warm_start) {
      seeds.insert(seeds.begin(), mapper.from_params(*warm_start));
    }
    // Simplex exploration from every seed (single-coordinate moves stall on
    // this landscape's penalty plateaus), coordinate-descent refinement of
    // the incumbent, then a tight simplex polish under the true objective.
    const long long polish = std::max<long long>(spec.budget / 4, 100);
    const long long per_restart =
        std::max<long long>((spec.budget - polish) /
                                static_cast<long long>(seeds.size()),
                            1);
    for (const auto& seed_point : seeds) {
      if (search.exhausted()) break;
      search.nelder_mead(seed_point, bulk_mode, per_restart, &best, 0.15);
    }
    if (!best.x.empty() && !search.exhausted()) {
      search.coordinate_descent(best.x, bulk_mode, polish / 2, &best);
      if (final_mode != bulk_mode) {
        // Re-anchor the incumbent under the scan objective before polishing.
        Incumbent polished;
        polished.offer(search.eval(best.x, final_mode), best.x);
        search.nelder_mead(best.x, final_mode, polish / 2, &polished, 0.03);
        best = polished;
      } else {
        search.nelder_mead(best.x, final_mode, polish / 2, &best, 0.03);
      }
    }
  }

  if (best.x.empty()) best.x = center;
  result.evaluations = search.used();
  result.params = mapper.to_params(best.x);
  // One clean re-evaluation of the reported optimum through the pipeline.
  keyrate::AnalysisOptions opts = spec.analysis;
  opts.mode = final_mode;
  try {
    result.params.validate();
    const ObservedStats o = linear_model_observed(result.params, ch);
    const keyrate::KeyRateReport rep = keyrate::analyze(result.params, o, opts);
    result.rate_raw = final_mode == keyrate::AnalysisMode::kOriginal
                          ? rep.rate_original_raw
                          : rep.rate_aopp_raw;
    result.rate = final_mode == keyrate::AnalysisMode::kOriginal
                      ? rep.rate_original
                      : rep.rate_aopp;
  } catch (const ValidationError&) {
    result.rate_raw = kInfeasible;
    result.rate = 0.0;
  }
  result.zero_rate = result.rate <= 0.0;
  return result;
}

}  // namespace snskr::opt

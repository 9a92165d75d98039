#include "optimizer.hpp"

#include <random>

#include "doctest.h"
#include "errors.hpp"

using namespace snskr;

namespace {

ProtocolParams base_params() {
  ProtocolParams p;
  p.n_total = 1e13;
  p.xi = 1e-10;
  return p;
}

ChannelParams channel_at(double total_km) {
  ChannelParams ch;
  ch.length_ac_km = total_km / 2;
  ch.length_bc_km = total_km / 2;
  return ch;
}

double evaluate(const ProtocolParams& p, const ChannelParams& ch,
                keyrate::AnalysisMode mode) {
  const ObservedStats o = linear_model_observed(p, ch);
  keyrate::AnalysisOptions opts;
  opts.mode = mode;
  const keyrate::KeyRateReport rep = keyrate::analyze(p, o, opts);
  return mode == keyrate::AnalysisMode::kOriginal ? rep.rate_original
                                                  : rep.rate_aopp;
}

}  // namespace

TEST_CASE("budget of one evaluates the box center") {
  opt::OptimizationSpec spec;
  spec.budget = 1;
  spec.symmetric = true;
  spec.objective = opt::Objective::kOriginal;
  const opt::OptimResult res =
      opt::optimize(spec, channel_at(200), base_params());
  CHECK(res.trace.size() == 1);
  for (double x : res.trace.front().position) CHECK(x == 0.5);
  CHECK(res.evaluations == 1);
}

TEST_CASE("same seed reproduces the identical trace") {
  opt::OptimizationSpec spec;
  spec.budget = 300;
  spec.restarts = 2;
  spec.seed = 77;
  spec.symmetric = true;
  spec.objective = opt::Objective::kOriginal;
  const opt::OptimResult a = opt::optimize(spec, channel_at(250), base_params());
  const opt::OptimResult b = opt::optimize(spec, channel_at(250), base_params());
  REQUIRE(a.trace.size() == b.trace.size());
  for (size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].rate == b.trace[i].rate);
    CHECK(a.trace[i].position == b.trace[i].position);
  }
  CHECK(a.rate == b.rate);

  opt::OptimizationSpec other = spec;
  other.seed = 78;
  const opt::OptimResult c = opt::optimize(other, channel_at(250), base_params());
  CHECK((a.trace.size() != c.trace.size() || a.rate != c.rate ||
         a.trace.back().position != c.trace.back().position));
}

TEST_CASE("result respects boxes and invariants, rate re-verifies") {
  opt::OptimizationSpec spec;
  spec.budget = 600;
  spec.restarts = 3;
  spec.seed = 5;
  spec.symmetric = true;
  spec.objective = opt::Objective::kAopp;
  const ChannelParams ch = channel_at(220);
  ProtocolParams base = base_params();
  base.set_delta(0.02);
  const opt::OptimResult res = opt::optimize(spec, ch, base);
  CHECK_NOTHROW(res.params.validate());
  CHECK(res.params.mu_a1 < res.params.mu_a2);
  CHECK(res.params.p_a1 + res.params.p_a2 <= 1.0);
  CHECK(res.params.mu_a1 >= 1e-4);
  CHECK(res.params.mu_az <= 1.0);
  // Symmetric ties.
  CHECK(res.params.mu_b1 == res.params.mu_a1);
  CHECK(res.params.eps_b == res.params.eps_a);
  CHECK(res.params.delta_b2 == res.params.delta_a2);
  // The reported rate equals one clean pipeline evaluation.
  CHECK(res.rate == evaluate(res.params, ch, keyrate::AnalysisMode::kAopp));
}

TEST_CASE("beats a large random search") {
  // Optimizer with a 2000-evaluation budget against 10^4 random draws over
  // the same box.
  const ChannelParams ch = channel_at(300);
  const ProtocolParams base = base_params();

  opt::OptimizationSpec spec;
  spec.budget = 2000;
  spec.restarts = 8;
  spec.seed = 9;
  spec.symmetric = true;
  spec.objective = opt::Objective::kOriginal;
  const opt::OptimResult res = opt::optimize(spec, ch, base);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double best_random = 0.0;
  for (int i = 0; i < 10000; ++i) {
    ProtocolParams p = base;
    p.mu_a1 = 1e-4 + u(rng) * (1.0 - 1e-4);
    p.mu_a2 = p.mu_a1 + u(rng) * (1.0 - p.mu_a1);
    p.mu_az = 1e-4 + u(rng) * (1.0 - 1e-4);
    p.p_a1 = 1e-4 + u(rng) * 0.999;
    p.p_a2 = u(rng) * (1.0 - p.p_a1);
    p.p_az = 1e-4 + u(rng) * 0.999;
    p.eps_a = 1e-4 + u(rng) * 0.999;
    p.mu_b1 = p.mu_a1;
    p.mu_b2 = p.mu_a2;
    p.mu_bz = p.mu_az;
    p.p_b1 = p.p_a1;
    p.p_b2 = p.p_a2;
    p.p_bz = p.p_az;
    p.eps_b = p.eps_a;
    try {
      p.validate();
      best_random =
          std::max(best_random,
                   evaluate(p, ch, keyrate::AnalysisMode::kOriginal));
    } catch (const ValidationError&) {
    }
  }
  CHECK(res.rate >= 0.95 * best_random);
  CHECK(res.rate > 0.0);
}

TEST_CASE("flat-zero objectives flag instead of failing") {
  // A hopeless channel: far beyond any positive-rate distance.
  opt::OptimizationSpec spec;
  spec.budget = 150;
  spec.restarts = 2;
  spec.seed = 3;
  spec.symmetric = true;
  spec.objective = opt::Objective::kOriginal;
  const opt::OptimResult res =
      opt::optimize(spec, channel_at(2000), base_params());
  CHECK(res.zero_rate);
  CHECK(res.rate == 0.0);
}

TEST_CASE("spec validation") {
  opt::OptimizationSpec spec;
  spec.budget = 0;
  CHECK_THROWS_AS(spec.validate(), ValidationError);
  spec.budget = 10;
  spec.free_parameters = {"mu_qq"};
  CHECK_THROWS_AS(spec.validate(), ValidationError);
  spec.free_parameters = {"mu_a1"};
  spec.box_bounds["mu_a1"] = {0.5, 0.1};
  CHECK_THROWS_AS(spec.validate(), ValidationError);
}

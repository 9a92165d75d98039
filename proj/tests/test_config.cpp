#include "config.hpp"

#include <string>

#include "doctest.h"
#include "errors.hpp"
#include "runner.hpp"

using namespace snskr;

namespace {

// A fully explicit protocol so point runs need no optimizer.
const char* kExplicitConfig = R"(
# explicit parameters, no optimization
channel.l_ac_km = 140
channel.l_bc_km = 140
protocol.mu_a1 = 0.05
protocol.mu_a2 = 0.25
protocol.mu_az = 0.42
protocol.mu_b1 = 0.05
protocol.mu_b2 = 0.25
protocol.mu_bz = 0.42
protocol.p_az = 0.75
protocol.p_bz = 0.75
protocol.p_a1 = 0.5
protocol.p_a2 = 0.15
protocol.p_b1 = 0.5
protocol.p_b2 = 0.15
protocol.eps_a = 0.05
protocol.eps_b = 0.05
optimize.enabled = false
)";

}  // namespace

TEST_CASE("defaults carry the published experimental parameter set") {
  const RunConfig cfg = default_config();
  CHECK(cfg.channel.p_d == 1e-8);
  CHECK(cfg.channel.e_d == 0.04);
  CHECK(cfg.channel.eta_d == 0.6);
  CHECK(cfg.channel.alpha_db_per_km == 0.2);
  CHECK(cfg.protocol.f_ec == 1.1);
  CHECK(cfg.protocol.xi == 1e-10);
  CHECK(cfg.protocol.n_total == 1e13);
  CHECK(cfg.protocol.eps_cor == 1e-10);
  CHECK(cfg.optimize_enabled);
}

TEST_CASE("config text parsing") {
  RunConfig cfg = default_config();
  cfg.merge_text(kExplicitConfig, "test.cfg");
  CHECK(cfg.channel.length_ac_km == 140);
  CHECK(cfg.protocol.mu_az == 0.42);
  CHECK_FALSE(cfg.optimize_enabled);
  CHECK(cfg.protocol_given);

  cfg.merge_text("protocol.delta = 0.05");
  CHECK(cfg.protocol.delta_a1 == 0.05);
  CHECK(cfg.protocol.delta_bz == 0.05);

  cfg.merge_text("optimize.box.mu_az = 0.2, 0.8");
  CHECK(cfg.optimizer.box_bounds.at("mu_az").lo == 0.2);
  CHECK(cfg.optimizer.box_bounds.at("mu_az").hi == 0.8);

  cfg.merge_text("optimize.free = mu_az , eps_a");
  CHECK(cfg.optimizer.free_parameters ==
        std::vector<std::string>{"mu_az", "eps_a"});

  cfg.merge_text("analysis.mode = aopp-scan");
  CHECK(cfg.analysis.mode == keyrate::AnalysisMode::kAoppScan);
  CHECK(cfg.optimizer.objective == opt::Objective::kAoppScan);
}

TEST_CASE("parse errors carry the location and field") {
  RunConfig cfg = default_config();
  CHECK_THROWS_WITH_AS(cfg.merge_text("nonsense line", "f.cfg"),
                       "f.cfg line 1: expected 'key = value', got 'nonsense "
                       "line'",
                       ValidationError);
  try {
    cfg.merge_text("\nchannel.p_d = fast\n", "f.cfg");
    FAIL("expected throw");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("f.cfg line 2") != std::string::npos);
    CHECK(std::string(e.what()).find("channel.p_d") != std::string::npos);
  }
  CHECK_THROWS_AS(cfg.merge_text("mystery.key = 1"), ValidationError);
  CHECK_THROWS_AS(cfg.merge_text("output.format = yaml"), ValidationError);
  CHECK_THROWS_AS(cfg.merge_file("/nonexistent/path.cfg"), ValidationError);
}

TEST_CASE("invalid parameter values surface as validation errors") {
  RunConfig cfg = default_config();
  cfg.merge_text(kExplicitConfig);
  cfg.merge_text("protocol.delta = 1.0");  // delta must stay below 1
  try {
    run::evaluate_point(cfg);
    FAIL("expected throw");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("delta") != std::string::npos);
  }

  RunConfig none = default_config();
  none.optimize_enabled = false;
  none.channel.length_ac_km = 100;
  none.channel.length_bc_km = 100;
  CHECK_THROWS_AS(run::evaluate_point(none), ValidationError);
}

TEST_CASE("point run output is byte-stable and self-consistent") {
  RunConfig cfg = default_config();
  cfg.merge_text(kExplicitConfig);
  const std::string a = run::run_point(cfg, "json");
  const std::string b = run::run_point(cfg, "json");
  CHECK(a == b);
  CHECK(a.find("\"rates\"") != std::string::npos);
  CHECK(a.find("\"failure_budget\"") != std::string::npos);

  const std::string csv = run::run_point(cfg, "csv");
  CHECK(csv.find("distance_km,") == 0);
  CHECK(csv.find("280") != std::string::npos);
}

TEST_CASE("emitted rate is re-derivable from the emitted intermediates") {
  RunConfig cfg = default_config();
  cfg.merge_text(kExplicitConfig);
  const run::PointOutcome out = run::evaluate_point(cfg);
  const keyrate::KeyRateReport& r = out.report;
  const ObservedStats o = linear_model_observed(out.params, cfg.channel);
  const ProtocolParams& p = out.params;
  const double tail =
      std::log2(2.0 / p.eps_cor) +
      2.0 * std::log2(1.0 / (std::sqrt(2.0) * p.eps_pa * p.eps_hat));
  const double rate =
      (r.decoy.n1_lower * (1 - keyrate::binary_entropy(r.decoy.e1ph_real_upper)) -
       p.f_ec * o.n_t * keyrate::binary_entropy(o.e_z) - tail) /
      p.n_total;
  CHECK(r.rate_original == doctest::Approx(std::max(rate, 0.0)).epsilon(1e-12));

  const double tail2 = 2 * std::log2(2.0 / p.eps_cor) +
                       4 * std::log2(1.0 / (std::sqrt(2.0) * p.eps_pa * p.eps_hat));
  const double rate2 =
      (r.aopp.n1_prime_lower *
           (1 - keyrate::binary_entropy(r.aopp.e1ph_prime_upper)) -
       p.f_ec * o.n_t_prime * keyrate::binary_entropy(o.e_z_prime) - tail2) /
      p.n_total;
  CHECK(r.rate_aopp == doctest::Approx(std::max(rate2, 0.0)).epsilon(1e-12));
}

TEST_CASE("sweep over explicit parameters reports the plob crossing") {
  RunConfig cfg = default_config();
  cfg.merge_text(kExplicitConfig);
  cfg.merge_text(
      "sweep.start_km = 260\n"
      "sweep.stop_km = 300\n"
      "sweep.step_km = 10\n"
      "sweep.asymmetry_km = 0\n");
  const run::SweepOutcome out = run::evaluate_sweep(cfg);
  REQUIRE(out.rows.size() == 5);
  // Rates fall with distance.
  for (size_t i = 1; i < out.rows.size(); ++i) {
    CHECK(out.rows[i].point.selected_rate <=
          out.rows[i - 1].point.selected_rate * (1 + 1e-12));
  }
  const std::string csv = run::run_sweep(cfg, "csv");
  CHECK(csv.find("distance_km,") == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') >= 6);
  const std::string js = run::run_sweep(cfg, "json");
  CHECK(js.find("first_plob_intersection") != std::string::npos);
}

TEST_CASE("sweep validation") {
  RunConfig cfg = default_config();
  cfg.merge_text(kExplicitConfig);
  CHECK_THROWS_AS(run::evaluate_sweep(cfg), ValidationError);  // no sweep block
  cfg.merge_text("sweep.start_km = 100\nsweep.stop_km = 50\n");
  CHECK_THROWS_AS(run::evaluate_sweep(cfg), ValidationError);
}

#pragma once

// Run configuration: flat "section.key = value" text, defaults from the
// paper's experimental parameter set so a minimal config only has to name
// the distances.

#include <optional>
#include <string>

#include "channel.hpp"
#include "optimizer.hpp"

namespace snskr {

struct SweepSpec {
  double start_km = 0;
  double stop_km = 0;
  double step_km = 1;
  double asymmetry_km = 0;  // L_ac - L_bc held fixed along the sweep

  void validate() const;
};

struct McSpec {
  double windows = 1e8;
  int runs = 200;            // seeded soundness runs
  int grid_points = 20;      // linear-vs-MC consistency grid size
  std::uint64_t seed = 20240901;
  double sigma = 5.0;        // consistency tolerance in binomial std deviations
};

struct RunConfig {
  ChannelParams channel;
  ProtocolParams protocol;
  bool protocol_given = false;  // explicit intensities/probabilities supplied
  keyrate::AnalysisOptions analysis;
  bool optimize_enabled = true;
  opt::OptimizationSpec optimizer;
  bool symmetric_forced = false;  // optimize.symmetric was set explicitly
  std::optional<SweepSpec> sweep;
  McSpec mc;
  std::string output_path;          // empty writes to stdout
  std::string output_format = "";   // "csv" | "json"; empty picks per command

  // Apply one "key = value" assignment; `where` names the source location
  // for error messages.
  void set(const std::string& key, const std::string& value,
           const std::string& where = "");

  // Parse and merge flat config text; later keys override earlier ones.
  void merge_text(const std::string& text, const std::string& filename = "");
  void merge_file(const std::string& path);
};

// Defaults: the paper's Table-style parameter set (dark count 1e-8,
// misalignment 4%, detector efficiency 60%, f = 1.1, 0.2 dB/km, xi = 1e-10,
// N = 1e13) with the optimizer enabled.
RunConfig default_config();

}  // namespace snskr

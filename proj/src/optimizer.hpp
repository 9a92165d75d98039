#pragma once

// Derivative-free maximization of the key rate over the free protocol
// parameters: coordinate descent with adaptive step shrinking from multiple
// Latin-hypercube seeds, followed by a downhill-simplex polish.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "keyrate.hpp"

namespace snskr::opt {

enum class Objective { kOriginal, kAopp, kAoppScan };

// Names accepted in free_parameters / box_bounds.
extern const std::vector<std::string> kParameterNames;

struct OptimizationSpec {
  std::vector<std::string> free_parameters;     // empty selects all
  std::map<std::string, Interval> box_bounds;   // overrides of the defaults
  Objective objective = Objective::kAopp;
  long long budget = 4000;  // max objective evaluations
  std::uint64_t seed = 1;
  bool symmetric = false;  // tie the b side to the a side
  int restarts = 8;
  keyrate::AnalysisOptions analysis;  // outlier / tight_s00 / scan grid

  void validate() const;
};

struct TraceEntry {
  double rate = 0;
  std::vector<double> position;  // internal coordinates in [0,1]^d
};

struct OptimResult {
  ProtocolParams params;
  double rate = 0;       // floored public rate, re-verified by a clean run
  double rate_raw = 0;   // signed objective value at the optimum
  bool zero_rate = false;
  long long evaluations = 0;
  std::vector<TraceEntry> trace;
};

OptimResult optimize(const OptimizationSpec& spec, const ChannelParams& ch,
                     const ProtocolParams& base,
                     const ProtocolParams* warm_start = nullptr);

}  // namespace snskr::opt

#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace snskr {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& value, const std::string& where) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(where + ": expected a number, got '" + value + "'");
  }
}

long long parse_int(const std::string& value, const std::string& where) {
  try {
    size_t pos = 0;
    const long long v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(where + ": expected an integer, got '" + value + "'");
  }
}

bool parse_bool(const std::string& value, const std::string& where) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") {
    return true;
  }
  if (value == "false" || value == "0" || value == "no" || value == "off") {
    return false;
  }
  throw ValidationError(where + ": expected a boolean, got '" + value + "'");
}

Interval parse_interval(const std::string& value, const std::string& where) {
  const size_t comma = value.find(',');
  if (comma == std::string::npos) {
    throw ValidationError(where + ": expected 'lo,hi', got '" + value + "'");
  }
  return {parse_double(trim(value.substr(0, comma)), where),
          parse_double(trim(value.substr(comma + 1)), where)};
}

keyrate::AnalysisMode parse_mode(const std::string& value,
                                 const std::string& where) {
  if (value == "original") return keyrate::AnalysisMode::kOriginal;
  if (value == "aopp") return keyrate::AnalysisMode::kAopp;
  if (value == "aopp-scan" || value == "aopp_scan") {
    return keyrate::AnalysisMode::kAoppScan;
  }
  throw ValidationError(where +
                        ": mode must be original|aopp|aopp-scan, got '" + value +
                        "'");
}

}  // namespace

void SweepSpec::validate() const {
  if (!(step_km > 0)) throw ValidationError("sweep.step_km must be > 0");
  if (stop_km < start_km) {
    throw ValidationError("sweep.stop_km must be >= sweep.start_km");
  }
  if (asymmetry_km < 0) throw ValidationError("sweep.asymmetry_km must be >= 0");
}

RunConfig default_config() {
  RunConfig cfg;
  cfg.channel.alpha_db_per_km = 0.2;
  cfg.channel.eta_d = 0.6;
  cfg.channel.p_d = 1e-8;
  cfg.channel.e_d = 0.04;
  cfg.channel.phase_slices = 16;

  cfg.protocol.n_total = 1e13;
  cfg.protocol.xi = 1e-10;
  cfg.protocol.f_ec = 1.1;
  cfg.protocol.eps_cor = 1e-10;
  cfg.protocol.eps_pa = 1e-10;
  cfg.protocol.eps_hat = 1e-10;
  cfg.protocol.eps_aopp = 1e-10;

  cfg.analysis.mode = keyrate::AnalysisMode::kAopp;
  cfg.optimizer.objective = opt::Objective::kAopp;
  cfg.optimizer.budget = 40000;
  cfg.optimizer.restarts = 8;
  cfg.optimizer.seed = 1;
  return cfg;
}

void RunConfig::set(const std::string& raw_key, const std::string& raw_value,
                    const std::string& where) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  const std::string ctx = where.empty() ? "config key '" + key + "'"
                                        : where + " ('" + key + "')";

  if (key == "channel.l_ac_km") {
    channel.length_ac_km = parse_double(value, ctx);
  } else if (key == "channel.l_bc_km") {
    channel.length_bc_km = parse_double(value, ctx);
  } else if (key == "channel.alpha_db_per_km") {
    channel.alpha_db_per_km = parse_double(value, ctx);
  } else if (key == "channel.eta_d") {
    channel.eta_d = parse_double(value, ctx);
  } else if (key == "channel.p_d") {
    channel.p_d = parse_double(value, ctx);
  } else if (key == "channel.e_d") {
    channel.e_d = parse_double(value, ctx);
  } else if (key == "channel.phase_slices") {
    channel.phase_slices = static_cast<int>(parse_int(value, ctx));
  } else if (key == "protocol.mu_a1") {
    protocol.mu_a1 = parse_double(value, ctx);
    protocol_given = true;
  } else if (key == "protocol.mu_a2") {
    protocol.mu_a2 = parse_double(value, ctx);
    protocol_given = true;
  } else if (key == "protocol.mu_az") {
    protocol.mu_az = parse_double(value, ctx);
    protocol_given = true;
  } else if (key == "protocol.mu_b1") {
    protocol.mu_b1 = parse_double(value, ctx);
    protocol_given = true;
  } else if (key == "protocol.mu_b2") {
    protocol.mu_b2 = parse_double(value, ctx);
    protocol_given = true;
  } else if (key == "protocol.mu_bz") {
    protocol.mu_bz = parse_double(value, ctx);
    protocol_given = true;
  } else if (key == "protocol.delta") {
    protocol.set_delta(parse_double(value, ctx));
  } else if (key == "protocol.delta_a1") {
    protocol.delta_a1 = parse_double(value, ctx);
  } else if (key == "protocol.delta_a2") {
    protocol.delta_a2 = parse_double(value, ctx);
  } else if (key == "protocol.delta_az") {
    protocol.delta_az = parse_double(value, ctx);
  } else if (key == "protocol.delta_b1") {
    protocol.delta_b1 = parse_double(value, ctx);
  } else if (key == "protocol.delta_b2") {
    protocol.delta_b2 = parse_double(value, ctx);
  } else if (key == "protocol.delta_bz") {
    protocol.delta_bz = parse_double(value, ctx);
  } else if (key == "protocol.p_az") {
    protocol.p_az = parse_double(value, ctx);
    protocol_given = true;
  } else if (key == "protocol.p_bz") {
    protocol.p_bz = parse_double(value, ctx);
    protocol_given = true;
  } else if (key == "protocol.p_a1") {
    protocol.p_a1 = parse_double(value, ctx);
    protocol_given = true;
  } else if (key == "protocol.p_a2") {
    protocol.p_a2 = parse_double(value, ctx);
    protocol_given = true;
  } else if (key == "protocol.p_b1") {
    protocol.p_b1 = parse_double(value, ctx);
    protocol_given = true;
  } else if (key == "protocol.p_b2") {
    protocol.p_b2 = parse_double(value, ctx);
    protocol_given = true;
  } else if (key == "protocol.eps_a") {
    protocol.eps_a = parse_double(value, ctx);
    protocol_given = true;
  } else if (key == "protocol.eps_b") {
    protocol.eps_b = parse_double(value, ctx);
    protocol_given = true;
  } else if (key == "protocol.n_total") {
    protocol.n_total = parse_double(value, ctx);
  } else if (key == "protocol.xi") {
    protocol.xi = parse_double(value, ctx);
  } else if (key == "protocol.f_ec") {
    protocol.f_ec = parse_double(value, ctx);
  } else if (key == "protocol.eps_cor") {
    protocol.eps_cor = parse_double(value, ctx);
  } else if (key == "protocol.eps_pa") {
    protocol.eps_pa = parse_double(value, ctx);
  } else if (key == "protocol.eps_hat") {
    protocol.eps_hat = parse_double(value, ctx);
  } else if (key == "protocol.eps_aopp") {
    protocol.eps_aopp = parse_double(value, ctx);
  } else if (key == "analysis.mode") {
    analysis.mode = parse_mode(value, ctx);
    optimizer.objective = analysis.mode == keyrate::AnalysisMode::kOriginal
                              ? opt::Objective::kOriginal
                          : analysis.mode == keyrate::AnalysisMode::kAopp
                              ? opt::Objective::kAopp
                              : opt::Objective::kAoppScan;
  } else if (key == "analysis.tight_s00") {
    analysis.tight_s00 = parse_bool(value, ctx);
  } else if (key == "analysis.n_delta") {
    analysis.n_delta = parse_double(value, ctx);
    analysis.outlier = analysis.n_delta > 0;
  } else if (key == "analysis.outlier") {
    analysis.outlier = parse_bool(value, ctx);
  } else if (key == "analysis.s00_grid") {
    analysis.s00_grid_points = static_cast<int>(parse_int(value, ctx));
  } else if (key == "optimize.enabled") {
    optimize_enabled = parse_bool(value, ctx);
  } else if (key == "optimize.budget") {
    optimizer.budget = parse_int(value, ctx);
  } else if (key == "optimize.seed") {
    optimizer.seed = static_cast<std::uint64_t>(parse_int(value, ctx));
  } else if (key == "optimize.restarts") {
    optimizer.restarts = static_cast<int>(parse_int(value, ctx));
  } else if (key == "optimize.symmetric") {
    optimizer.symmetric = parse_bool(value, ctx);
    symmetric_forced = true;
  } else if (key == "optimize.free") {
    optimizer.free_parameters.clear();
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!trim(item).empty()) optimizer.free_parameters.push_back(trim(item));
    }
  } else if (key.rfind("optimize.box.", 0) == 0) {
    optimizer.box_bounds[key.substr(13)] = parse_interval(value, ctx);
  } else if (key == "sweep.start_km") {
    if (!sweep) sweep.emplace();
    sweep->start_km = parse_double(value, ctx);
  } else if (key == "sweep.stop_km") {
    if (!sweep) sweep.emplace();
    sweep->stop_km = parse_double(value, ctx);
  } else if (key == "sweep.step_km") {
    if (!sweep) sweep.emplace();
    sweep->step_km = parse_double(value, ctx);
  } else if (key == "sweep.asymmetry_km") {
    if (!sweep) sweep.emplace();
    sweep->asymmetry_km = parse_double(value, ctx);
  } else if (key == "mc.windows") {
    mc.windows = parse_double(value, ctx);
  } else if (key == "mc.runs") {
    mc.runs = static_cast<int>(parse_int(value, ctx));
  } else if (key == "mc.grid_points") {
    mc.grid_points = static_cast<int>(parse_int(value, ctx));
  } else if (key == "mc.seed") {
    mc.seed = static_cast<std::uint64_t>(parse_int(value, ctx));
  } else if (key == "mc.sigma") {
    mc.sigma = parse_double(value, ctx);
  } else if (key == "output.path") {
    output_path = value;
  } else if (key == "output.format") {
    if (value != "csv" && value != "json") {
      throw ValidationError(ctx + ": format must be csv or json");
    }
    output_format = value;
  } else {
    throw ValidationError(ctx + ": unknown key");
  }
}

void RunConfig::merge_text(const std::string& text, const std::string& filename) {
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    const std::string where =
        (filename.empty() ? "config" : filename) + " line " +
        std::to_string(lineno);
    if (eq == std::string::npos) {
      throw ValidationError(where + ": expected 'key = value', got '" + line +
                            "'");
    }
    set(line.substr(0, eq), line.substr(eq + 1), where);
  }
}

void RunConfig::merge_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  merge_text(ss.str(), path);
}

}  // namespace snskr

// Command-line front end. Talks to the engine exclusively through the C API
// of the shared library.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "snskr.h"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_path;
  std::string format;
  std::string mode;
  std::string delta;
  std::string seed;
  std::string n_delta;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, CommonOpts* opts) {
  cmd->add_option("--config", opts->config_path, "Config file (key = value lines)");
  cmd->add_option("--out", opts->out_path, "Output path (default: stdout)");
  cmd->add_option("--format", opts->format, "Output format: csv or json");
  cmd->add_option("--mode", opts->mode,
                  "Analysis mode: original, aopp or aopp-scan");
  cmd->add_option("--delta", opts->delta,
                  "Override all six intensity-fluctuation bounds");
  cmd->add_option("--seed", opts->seed, "Optimizer / sampler seed");
  cmd->add_option("--n-delta", opts->n_delta,
                  "Outlier-window bound (enables the outlier-tolerant mode)");
  cmd->add_option("--set", opts->sets, "Extra config assignments key=value")
      ->take_all();
}

int fail(snskr_ctx* ctx, snskr_status status) {
  std::fprintf(stderr, "error: %s\n", snskr_last_error(ctx));
  return static_cast<int>(status);
}

int apply_common(snskr_ctx* ctx, const CommonOpts& opts, const char* command) {
  if (!opts.config_path.empty()) {
    const snskr_status st = snskr_config_file(ctx, opts.config_path.c_str());
    if (st != SNSKR_OK) return fail(ctx, st);
  }
  auto set = [&](const char* key, const std::string& value) -> int {
    if (value.empty()) return 0;
    const snskr_status st = snskr_config_set(ctx, key, value.c_str());
    return st == SNSKR_OK ? 0 : fail(ctx, st);
  };
  if (int rc = set("analysis.mode", opts.mode)) return rc;
  if (int rc = set("protocol.delta", opts.delta)) return rc;
  if (int rc = set("analysis.n_delta", opts.n_delta)) return rc;
  if (int rc = set("output.format", opts.format)) return rc;
  if (!opts.seed.empty()) {
    const bool mc = std::string(command) == "mc-validate";
    if (int rc = set(mc ? "mc.seed" : "optimize.seed", opts.seed)) return rc;
  }
  for (const std::string& kv : opts.sets) {
    const size_t eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "error: --set expects key=value, got '%s'\n",
                   kv.c_str());
      return 1;
    }
    const snskr_status st = snskr_config_set(ctx, kv.substr(0, eq).c_str(),
                                             kv.substr(eq + 1).c_str());
    if (st != SNSKR_OK) return fail(ctx, st);
  }
  return 0;
}

int write_output(const CommonOpts& opts, const char* text) {
  if (opts.out_path.empty()) {
    std::fputs(text, stdout);
    return 0;
  }
  std::ofstream out(opts.out_path, std::ios::binary);
  if (!out) {
    std::fprintf(stderr, "error: cannot write '%s'\n", opts.out_path.c_str());
    return 1;
  }
  out << text;
  return 0;
}

int run_command(const std::string& name, const CommonOpts& opts) {
  snskr_ctx* ctx = snskr_ctx_new();
  if (!ctx) {
    std::fprintf(stderr, "error: out of memory\n");
    return 4;
  }
  int rc = apply_common(ctx, opts, name.c_str());
  if (rc == 0) {
    char* text = nullptr;
    snskr_status st = SNSKR_OK;
    if (name == "point") {
      st = snskr_run_point(ctx, &text);
    } else if (name == "optimize") {
      // A point run with the optimizer forced on.
      st = snskr_config_set(ctx, "optimize.enabled", "true");
      if (st == SNSKR_OK) st = snskr_run_point(ctx, &text);
    } else if (name == "sweep") {
      st = snskr_run_sweep(ctx, opts.format.empty() ? nullptr : opts.format.c_str(),
                           &text);
    } else if (name == "tables") {
      st = snskr_run_tables(ctx, &text);
    } else {
      st = snskr_run_mc_validate(ctx, &text);
    }
    if (text) {
      const int wrc = write_output(opts, text);
      snskr_string_free(text);
      if (wrc != 0 && st == SNSKR_OK) rc = wrc;
    }
    if (st != SNSKR_OK) {
      std::fprintf(stderr, "error: %s\n", snskr_last_error(ctx));
      rc = static_cast<int>(st);
    }
  }
  snskr_ctx_free(ctx);
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Key-rate analysis for the sending-or-not-sending twin-field QKD "
      "protocol with bounded source intensity errors"};
  app.require_subcommand(1);

  CommonOpts opts;
  const char* descriptions[][2] = {
      {"point", "Key rate for one channel configuration"},
      {"sweep", "Key-rate curve over a distance grid"},
      {"optimize", "Optimize parameters at one configuration and report them"},
      {"tables", "Reproduce the published key-rate tables (exit 3 on mismatch)"},
      {"mc-validate", "Run the Monte-Carlo consistency and soundness suites"},
  };
  for (auto& d : descriptions) {
    add_common(app.add_subcommand(d[0], d[1]), &opts);
  }

  CLI11_PARSE(app, argc, argv);
  return run_command(app.get_subcommands().front()->get_name(), opts);
}

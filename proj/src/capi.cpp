// C interface of the shared library: an opaque context holding the merged
// run configuration, status codes for every failure path, and heap-allocated
// string results.

#include "snskr.h"

#include <cstring>
#include <new>
#include <string>

#include "config.hpp"
#include "errors.hpp"
#include "runner.hpp"

struct snskr_ctx {
  snskr::RunConfig config = snskr::default_config();
  std::string last_error;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
snskr_status guarded(snskr_ctx* ctx, Fn&& fn) {
  if (!ctx) return SNSKR_ERR_VALIDATION;
  ctx->last_error.clear();
  try {
    return fn();
  } catch (const snskr::SolverError& e) {
    ctx->last_error = e.what();
    return SNSKR_ERR_SOLVER;
  } catch (const snskr::ValidationError& e) {
    ctx->last_error = e.what();
    return SNSKR_ERR_VALIDATION;
  } catch (const std::bad_alloc&) {
    ctx->last_error = "out of memory";
    return SNSKR_ERR_INTERNAL;
  } catch (const std::exception& e) {
    ctx->last_error = e.what();
    return SNSKR_ERR_INTERNAL;
  }
}

snskr_status emit(snskr_ctx* ctx, const std::string& text, char** out) {
  if (!out) {
    ctx->last_error = "output pointer is null";
    return SNSKR_ERR_VALIDATION;
  }
  *out = dup_string(text);
  if (!*out) {
    ctx->last_error = "out of memory";
    return SNSKR_ERR_INTERNAL;
  }
  return SNSKR_OK;
}

std::string resolve_format(const snskr_ctx* ctx, const char* format,
                           const char* fallback) {
  if (format && *format) return format;
  if (!ctx->config.output_format.empty()) return ctx->config.output_format;
  return fallback;
}

}  // namespace

extern "C" {

unsigned snskr_version(void) { return 10000; }

snskr_ctx* snskr_ctx_new(void) { return new (std::nothrow) snskr_ctx(); }

void snskr_ctx_free(snskr_ctx* ctx) { delete ctx; }

const char* snskr_last_error(const snskr_ctx* ctx) {
  return ctx ? ctx->last_error.c_str() : "null context";
}

snskr_status snskr_config_text(snskr_ctx* ctx, const char* text) {
  return guarded(ctx, [&]() {
    if (!text) throw snskr::ValidationError("config text is null");
    ctx->config.merge_text(text);
    return SNSKR_OK;
  });
}

snskr_status snskr_config_file(snskr_ctx* ctx, const char* path) {
  return guarded(ctx, [&]() {
    if (!path) throw snskr::ValidationError("config path is null");
    ctx->config.merge_file(path);
    return SNSKR_OK;
  });
}

snskr_status snskr_config_set(snskr_ctx* ctx, const char* key,
                              const char* value) {
  return guarded(ctx, [&]() {
    if (!key || !value) throw snskr::ValidationError("config key/value is null");
    ctx->config.set(key, value);
    return SNSKR_OK;
  });
}

snskr_status snskr_run_point(snskr_ctx* ctx, char** json_out) {
  return guarded(ctx, [&]() {
    return emit(ctx,
                snskr::run::run_point(ctx->config,
                                      resolve_format(ctx, nullptr, "json")),
                json_out);
  });
}

snskr_status snskr_run_sweep(snskr_ctx* ctx, const char* format, char** out) {
  return guarded(ctx, [&]() {
    return emit(ctx,
                snskr::run::run_sweep(ctx->config,
                                      resolve_format(ctx, format, "csv")),
                out);
  });
}

snskr_status snskr_run_tables(snskr_ctx* ctx, char** json_out) {
  return guarded(ctx, [&]() -> snskr_status {
    const snskr::run::TablesOutcome outcome = snskr::run::run_tables(ctx->config);
    const snskr_status st = emit(
        ctx, snskr::run::tables_json(outcome).dump(2) + "\n", json_out);
    if (st != SNSKR_OK) return st;
    if (!outcome.all_pass) {
      ctx->last_error = "table reproduction outside tolerance";
      return SNSKR_ERR_ACCEPTANCE;
    }
    return SNSKR_OK;
  });
}

snskr_status snskr_run_mc_validate(snskr_ctx* ctx, char** json_out) {
  return guarded(ctx, [&]() -> snskr_status {
    const snskr::run::McOutcome outcome = snskr::run::run_mc_validate(ctx->config);
    const snskr_status st =
        emit(ctx, snskr::run::mc_json(outcome).dump(2) + "\n", json_out);
    if (st != SNSKR_OK) return st;
    if (!outcome.all_pass) {
      ctx->last_error = "Monte-Carlo validation failed";
      return SNSKR_ERR_ACCEPTANCE;
    }
    return SNSKR_OK;
  });
}

void snskr_string_free(char* s) { std::free(s); }

}  // extern "C"

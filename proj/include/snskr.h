/* snskr — key-rate analysis engine for the sending-or-not-sending (SNS)
 * twin-field QKD protocol with bounded source intensity errors.
 *
 * C interface of the shared library. All engine state lives behind an
 * opaque context handle; every call returns a status code and the last
 * error message is retrievable from the context. Strings returned through
 * out-parameters are heap-allocated and must be released with
 * snskr_string_free().
 *
 * Thread-safety: a context is not internally synchronized; use one context
 * per thread. Distinct contexts are fully independent.
 */
#ifndef SNSKR_H
#define SNSKR_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SNSKR_API __declspec(dllexport)
#else
#define SNSKR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Values 1..3 match the CLI exit codes. */
typedef enum snskr_status {
  SNSKR_OK = 0,
  SNSKR_ERR_VALIDATION = 1, /* invalid config/params; includes parse errors */
  SNSKR_ERR_SOLVER = 2,     /* root finder failed to converge */
  SNSKR_ERR_ACCEPTANCE = 3, /* tables reproduction out of tolerance */
  SNSKR_ERR_INTERNAL = 4
} snskr_status;

typedef struct snskr_ctx snskr_ctx;

/* Library version, monotonically increasing (major*10000 + minor*100 + patch). */
SNSKR_API unsigned snskr_version(void);

/* Create a context preloaded with the default configuration (the paper's
 * experimental parameter set, optimizer enabled). Returns NULL on
 * allocation failure. */
SNSKR_API snskr_ctx* snskr_ctx_new(void);
SNSKR_API void snskr_ctx_free(snskr_ctx* ctx);

/* Message describing the most recent failure on this context. The pointer
 * stays valid until the next call on the same context. Never NULL. */
SNSKR_API const char* snskr_last_error(const snskr_ctx* ctx);

/* Merge configuration from flat key-value text ("section.key = value" lines,
 * '#' comments). Later keys override earlier ones. */
SNSKR_API snskr_status snskr_config_text(snskr_ctx* ctx, const char* text);
SNSKR_API snskr_status snskr_config_file(snskr_ctx* ctx, const char* path);
/* Set one configuration key, same keys as the config file. */
SNSKR_API snskr_status snskr_config_set(snskr_ctx* ctx, const char* key,
                                        const char* value);

/* Single-point key rate. Emits the full report (rates, every intermediate
 * bound value, failure budget, flags) as JSON. */
SNSKR_API snskr_status snskr_run_point(snskr_ctx* ctx, char** json_out);

/* Distance sweep; emits one row per distance plus the first intersection
 * with the absolute PLOB bound. format is "csv" or "json". */
SNSKR_API snskr_status snskr_run_sweep(snskr_ctx* ctx, const char* format,
                                       char** out);

/* Reproduce the paper's key-rate tables and compare against the published
 * values. Returns SNSKR_ERR_ACCEPTANCE if any tolerance is violated; the
 * JSON report is produced either way. */
SNSKR_API snskr_status snskr_run_tables(snskr_ctx* ctx, char** json_out);

/* Monte-Carlo validation: linear-model consistency grid and the
 * fluctuation-soundness batch. */
SNSKR_API snskr_status snskr_run_mc_validate(snskr_ctx* ctx, char** json_out);

SNSKR_API void snskr_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* SNSKR_H */

// Exercises the shared-library C interface: context lifecycle, status codes,
// error reporting and the JSON/CSV surfaces.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "snskr.h"

namespace {

const char* kExplicit =
    "channel.l_ac_km = 140\n"
    "channel.l_bc_km = 140\n"
    "protocol.mu_a1 = 0.05\n"
    "protocol.mu_a2 = 0.25\n"
    "protocol.mu_az = 0.42\n"
    "protocol.mu_b1 = 0.05\n"
    "protocol.mu_b2 = 0.25\n"
    "protocol.mu_bz = 0.42\n"
    "protocol.p_az = 0.75\n"
    "protocol.p_bz = 0.75\n"
    "protocol.p_a1 = 0.5\n"
    "protocol.p_a2 = 0.15\n"
    "protocol.p_b1 = 0.5\n"
    "protocol.p_b2 = 0.15\n"
    "protocol.eps_a = 0.05\n"
    "protocol.eps_b = 0.05\n"
    "optimize.enabled = false\n";

struct Ctx {
  snskr_ctx* handle = snskr_ctx_new();
  ~Ctx() { snskr_ctx_free(handle); }
};

}  // namespace

TEST_CASE("context lifecycle and version") {
  CHECK(snskr_version() >= 10000);
  Ctx ctx;
  REQUIRE(ctx.handle != nullptr);
  CHECK(std::string(snskr_last_error(ctx.handle)).empty());
}

TEST_CASE("config errors map to validation status with a message") {
  Ctx ctx;
  CHECK(snskr_config_text(ctx.handle, "garbage") == SNSKR_ERR_VALIDATION);
  CHECK(std::string(snskr_last_error(ctx.handle)).find("key = value") !=
        std::string::npos);
  CHECK(snskr_config_set(ctx.handle, "channel.p_d", "not-a-number") ==
        SNSKR_ERR_VALIDATION);
  CHECK(snskr_config_set(ctx.handle, "no.such.key", "1") ==
        SNSKR_ERR_VALIDATION);
  CHECK(snskr_config_file(ctx.handle, "/does/not/exist.cfg") ==
        SNSKR_ERR_VALIDATION);
  // A successful call clears the error.
  CHECK(snskr_config_set(ctx.handle, "channel.p_d", "1e-8") == SNSKR_OK);
  CHECK(std::string(snskr_last_error(ctx.handle)).empty());
}

TEST_CASE("point run emits a JSON report") {
  Ctx ctx;
  REQUIRE(snskr_config_text(ctx.handle, kExplicit) == SNSKR_OK);
  char* out = nullptr;
  REQUIRE(snskr_run_point(ctx.handle, &out) == SNSKR_OK);
  REQUIRE(out != nullptr);
  const std::string text(out);
  snskr_string_free(out);
  CHECK(text.find("\"rates\"") != std::string::npos);
  CHECK(text.find("\"n1_lower\"") != std::string::npos);
  CHECK(text.find("\"failure_budget\"") != std::string::npos);
}

TEST_CASE("invalid parameters refuse to run") {
  Ctx ctx;
  REQUIRE(snskr_config_text(ctx.handle, kExplicit) == SNSKR_OK);
  REQUIRE(snskr_config_set(ctx.handle, "protocol.delta", "1.0") == SNSKR_OK);
  char* out = nullptr;
  CHECK(snskr_run_point(ctx.handle, &out) == SNSKR_ERR_VALIDATION);
  CHECK(out == nullptr);
  CHECK(std::string(snskr_last_error(ctx.handle)).find("delta") !=
        std::string::npos);
}

TEST_CASE("sweep emits CSV with the documented header") {
  Ctx ctx;
  REQUIRE(snskr_config_text(ctx.handle, kExplicit) == SNSKR_OK);
  REQUIRE(snskr_config_text(ctx.handle,
                            "sweep.start_km = 270\n"
                            "sweep.stop_km = 290\n"
                            "sweep.step_km = 10\n") == SNSKR_OK);
  char* out = nullptr;
  REQUIRE(snskr_run_sweep(ctx.handle, "csv", &out) == SNSKR_OK);
  const std::string text(out);
  snskr_string_free(out);
  CHECK(text.rfind("distance_km,l_ac_km,l_bc_km,rate,", 0) == 0);

  char* js = nullptr;
  REQUIRE(snskr_run_sweep(ctx.handle, "json", &js) == SNSKR_OK);
  const std::string jtext(js);
  snskr_string_free(js);
  CHECK(jtext.find("\"rows\"") != std::string::npos);
}

TEST_CASE("null handling") {
  CHECK(snskr_config_text(nullptr, "x") == SNSKR_ERR_VALIDATION);
  Ctx ctx;
  CHECK(snskr_config_text(ctx.handle, nullptr) == SNSKR_ERR_VALIDATION);
  CHECK(snskr_run_point(ctx.handle, nullptr) == SNSKR_ERR_VALIDATION);
}

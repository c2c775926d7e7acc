#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <string>

#include <json.hpp>

#include "doctest.h"
#include "superlab.h"

using nlohmann::json;

namespace {

json parse_and_free(char* s) {
  REQUIRE(s != nullptr);
  json j = json::parse(std::string(s));
  slab_string_free(s);
  return j;
}

slab_extraction_config canonical_config() {
  slab_extraction_config config;
  config.c = "1";
  config.a = "1/2";
  config.i_bar = "101/100";
  config.epsilon = "1/10";
  config.L = "-1/20";
  config.R = "1/20";
  config.n_min = 1;
  config.grid_points = 64;
  config.tolerance = 1e-3;
  config.max_iterations = 100;
  return config;
}

}  // namespace

TEST_CASE("version and scalar entry points") {
  CHECK(std::strcmp(slab_version(), "0.1.0") == 0);
  double v = 0.0;
  CHECK(slab_normal_cdf(-1.0, &v) == SLAB_OK);
  CHECK(v == doctest::Approx(0.15865525393145705).epsilon(1e-14));
  CHECK(slab_log_normal_cdf(-8.0, &v) == SLAB_OK);
  CHECK(v == doctest::Approx(-35.013437159914550).epsilon(1e-13));
}

TEST_CASE("model lifecycle and error reporting") {
  slab_model* model = nullptr;
  CHECK(slab_model_create(-1.0, -1.0, 1.0, &model) == SLAB_ERR_INVALID);
  CHECK(std::strlen(slab_last_error()) > 0);
  REQUIRE(slab_model_create(1.0, -10.0, 10.0, &model) == SLAB_OK);

  double v = 0.0;
  CHECK(slab_affinity_gaussian(model, 0.0, 2.0, 1, &v) == SLAB_OK);
  CHECK(v == doctest::Approx(0.15865525393145705).epsilon(1e-14));
  CHECK(slab_tv_gaussian(model, 0.0, 2.0, 1, &v) == SLAB_OK);
  CHECK(v == doctest::Approx(0.6826894921370859).epsilon(1e-14));
  // Out-of-domain parameter surfaces as an invalid-argument status.
  CHECK(slab_affinity_gaussian(model, 0.0, 20.0, 1, &v) == SLAB_ERR_INVALID);
  slab_model_free(model);
}

TEST_CASE("discrete affinity endpoints") {
  const double p[] = {0.9, 0.1};
  const double q[] = {0.2, 0.8};
  double np = 0.0, brute = 0.0, tv = 0.0, lb = 0.0;
  int witness[2] = {-1, -1};
  CHECK(slab_affinity_discrete_np(p, q, 2, &np) == SLAB_OK);
  CHECK(slab_affinity_discrete_bruteforce(p, q, 2, &brute, witness) == SLAB_OK);
  CHECK(np == doctest::Approx(brute).epsilon(1e-15));
  CHECK((witness[0] == 0 || witness[0] == 1));
  CHECK(slab_tv_discrete(p, q, 2, &tv) == SLAB_OK);
  CHECK(tv == doctest::Approx(0.7));
  CHECK(slab_affinity_lower_bound_from_tv(tv, &lb) == SLAB_OK);
  CHECK(np >= lb - 1e-12);
  CHECK(slab_affinity_discrete_np(nullptr, q, 2, &np) == SLAB_ERR_INVALID);
}

TEST_CASE("assumption and LAN reports") {
  slab_model* model = nullptr;
  REQUIRE(slab_model_create(1.0, -10.0, 10.0, &model) == SLAB_OK);
  const double theta1[] = {0.0, 0.0};
  const double theta2[] = {0.5, -0.3};
  const long n[] = {25, 100};
  char* out = nullptr;
  REQUIRE(slab_check_assumption_json(model, 1, 0.0, theta1, theta2, n, 2, 0.0,
                                     &out) == SLAB_OK);
  auto j = parse_and_free(out);
  CHECK(j["all_pass"].get<bool>());
  CHECK(j["rows"].size() == 2);
  CHECK(std::fabs(j["rows"][0]["slack"].get<double>()) <= 1e-12);
  CHECK(slab_check_assumption_json(model, 3, 0.0, theta1, theta2, n, 2, 0.0,
                                   &out) == SLAB_ERR_INVALID);

  REQUIRE(slab_check_lan_json(model, 0.3, 1.0, 100, 2000, 7, &out) == SLAB_OK);
  j = parse_and_free(out);
  CHECK(j["max_abs_residual"].get<double>() <= 1e-10);
  CHECK(j["ks_pass"].get<bool>());
  slab_model_free(model);
}

TEST_CASE("estimators and concentration") {
  slab_model* model = nullptr;
  slab_estimator* hodges = nullptr;
  REQUIRE(slab_model_create(1.0, -10.0, 10.0, &model) == SLAB_OK);
  REQUIRE(slab_estimator_hodges(0.0, &hodges) == SLAB_OK);

  double v = 0.0;
  CHECK(slab_estimate(hodges, 10000, 0.0999, &v) == SLAB_OK);
  CHECK(v == doctest::Approx(0.0));
  CHECK(slab_estimate(hodges, 10000, 0.5, &v) == SLAB_OK);
  CHECK(v == doctest::Approx(0.5));

  double exact = 0.0, lp = 0.0, mc = 0.0, se = 0.0;
  CHECK(slab_concentration_exact(model, hodges, 0.3, 100, 0.15, 0.3, &exact) ==
        SLAB_OK);
  CHECK(slab_concentration_exact_log(model, hodges, 0.3, 100, 0.15, 0.3, &lp) ==
        SLAB_OK);
  CHECK(lp == doctest::Approx(std::log(exact)).epsilon(1e-12));
  CHECK(slab_concentration_mc(model, hodges, 0.3, 100, 0.15, 0.3, 200000, 5, 0,
                              &mc, &se) == SLAB_OK);
  CHECK(std::fabs(mc - exact) <= 4.0 * se + 1e-6);

  char* out = nullptr;
  const long n_list[] = {10, 100, 10000};
  REQUIRE(slab_mle_bound_check_json(model, 1.5, n_list, 3, 0.0, &out) ==
          SLAB_OK);
  auto j = parse_and_free(out);
  CHECK(j["pass"].get<bool>());
  CHECK(j["max_abs_deviation"].get<double>() <= 1e-12);

  slab_estimator_free(hodges);
  slab_model_free(model);
}

TEST_CASE("efficiency reports, including infinities") {
  slab_model* model = nullptr;
  slab_estimator* constant = nullptr;
  REQUIRE(slab_model_create(1.0, -10.0, 10.0, &model) == SLAB_OK);
  REQUIRE(slab_estimator_constant(0.4, &constant) == SLAB_OK);
  const double c_grid[] = {1.0, 2.0};
  const long n_grid[] = {100, 1000};
  char* out = nullptr;
  REQUIRE(slab_ae_estimate_json(model, constant, 0.4, c_grid, 2, n_grid, 2,
                                &out) == SLAB_OK);
  auto j = parse_and_free(out);
  CHECK(j["ae_approx"].get<std::string>() == "inf");

  const double thetas[] = {0.0};
  REQUIRE(slab_corollary3_json(model, thetas, 1, c_grid, 2, n_grid, 2, &out) ==
          SLAB_OK);
  j = parse_and_free(out);
  CHECK(j["rows"].size() == 3);
  slab_estimator_free(constant);
  slab_model_free(model);
}

TEST_CASE("extraction through the C API") {
  slab_model* model = nullptr;
  slab_estimator* hodges = nullptr;
  slab_estimator* mle = nullptr;
  REQUIRE(slab_model_create(1.0, -10.0, 10.0, &model) == SLAB_OK);
  REQUIRE(slab_estimator_hodges(0.0, &hodges) == SLAB_OK);
  REQUIRE(slab_estimator_mle(&mle) == SLAB_OK);
  const auto config = canonical_config();

  char* out = nullptr;
  char* text = nullptr;
  REQUIRE(slab_extract_json(model, hodges, &config, &out, &text) == SLAB_OK);
  auto j = parse_and_free(out);
  CHECK(j["outcome"].get<std::string>() == "converged");
  CHECK(std::fabs(j["theta_hat"].get<double>()) <= 1e-3);
  CHECK(j["iterations"].size() <= 30);
  CHECK(j["config"]["epsilon"].get<std::string>() == "1/10");
  REQUIRE(text != nullptr);
  CHECK(std::string(text).find("converged") != std::string::npos);
  slab_string_free(text);

  REQUIRE(slab_extract_json(model, mle, &config, &out, nullptr) == SLAB_OK);
  j = parse_and_free(out);
  CHECK(j["outcome"].get<std::string>() == "no_superefficient_point");
  CHECK(j["failed_iteration"].get<long>() == 1);

  // An over-wide interval fails config validation.
  auto wide = config;
  wide.L = "-2";
  wide.R = "2";
  CHECK(slab_extract_json(model, hodges, &wide, &out, nullptr) ==
        SLAB_ERR_INVALID);

  char* json_out = nullptr;
  REQUIRE(slab_lemma1_check_json(model, hodges, "-1/200", "1/200", 586, &config,
                                 &json_out) == SLAB_OK);
  j = parse_and_free(json_out);
  CHECK(j["accepted"].get<bool>());
  CHECK(j["separation_ok"].get<bool>());
  CHECK(j["affinity_ok"].get<bool>());

  REQUIRE(slab_countability_json(model, hodges, &config, 7200, &json_out) ==
          SLAB_OK);
  j = parse_and_free(json_out);
  CHECK(j["pass"].get<bool>());
  CHECK(j["persistent_points"].size() > 0);

  char* eps = nullptr;
  REQUIRE(slab_suggest_epsilon("1", "1/2", "101/100", &eps) == SLAB_OK);
  CHECK(std::string(eps) == "1/32");
  slab_string_free(eps);

  slab_estimator_free(mle);
  slab_estimator_free(hodges);
  slab_model_free(model);
}

// Copyright 2026 The twodevp Authors
// SPDX-License-Identifier: Apache-2.0

// Exercises the shared library through its C header only.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "twodevp/twodevp.h"

TEST_CASE("version and status strings") {
  CHECK(std::strlen(twodevp_version()) > 0);
  CHECK(std::string(twodevp_status_string(TWODEVP_OK)) == "ok");
  CHECK(std::strlen(twodevp_status_string(TWODEVP_UNSTABLE)) > 0);
  CHECK(std::strlen(twodevp_status_string(static_cast<twodevp_status>(77))) > 0);
}

TEST_CASE("example 6.1 through the C interface") {
  twodevp_pair* p = nullptr;
  REQUIRE(twodevp_pair_example61(&p) == TWODEVP_OK);
  CHECK(twodevp_pair_dim(p) == 3);
  twodevp_solve_options o;
  twodevp_solve_options_init(&o);
  o.tol = 3 * 2.220446049250313e-16;
  twodevp_result* r = nullptr;
  REQUIRE(twodevp_solve(p, -0.145810069397438 + 1.6, -0.744080780565709 + 0.89, &o, &r) ==
          TWODEVP_OK);
  CHECK(twodevp_result_converged(r));
  double mu = 0, lambda = 0, it = 0;
  CHECK(twodevp_result_number(r, "mu", &mu) == TWODEVP_OK);
  CHECK(twodevp_result_number(r, "lambda", &lambda) == TWODEVP_OK);
  CHECK(twodevp_result_number(r, "iterations", &it) == TWODEVP_OK);
  CHECK(std::abs(mu + 0.145810069397438) <= 1e-14);
  CHECK(std::abs(lambda + 0.744080780565709) <= 1e-14);
  CHECK(it == 4);
  CHECK(std::string(twodevp_result_string(r, "status")) == "converged");
  CHECK(std::string(twodevp_result_string(r, "version")) == twodevp_version());
  CHECK(twodevp_result_string(r, "no-such-key") == nullptr);
  CHECK(std::string(twodevp_result_csv(r)).rfind("k,mu,lambda", 0) == 0);
  CHECK(std::string(twodevp_result_json(r)).find("\"eta_bracket\"") != std::string::npos);

  double x = 0;
  CHECK(twodevp_result_number(r, "missing", &x) == TWODEVP_INVALID_ARGUMENT);
  CHECK(std::string(twodevp_last_error()).find("missing") != std::string::npos);
  CHECK(twodevp_result_number(r, "status", &x) == TWODEVP_INVALID_ARGUMENT);
  twodevp_result_free(r);
  twodevp_pair_free(p);
}

TEST_CASE("dense input and error codes") {
  // interleaved column-major: A = [[1, 2i], [-2i, 0]], C = diag(1, -1)
  const std::vector<double> a{1, 0, 0, -2, 0, 2, 0, 0};
  const std::vector<double> c{1, 0, 0, 0, 0, 0, -1, 0};
  twodevp_pair* p = nullptr;
  REQUIRE(twodevp_pair_from_dense(2, a.data(), c.data(), &p) == TWODEVP_OK);
  CHECK(std::string(twodevp_last_error()).empty());
  twodevp_pair_free(p);

  const std::vector<double> bad{1, 0, 1, 0, 0, 0, -1, 0};
  p = reinterpret_cast<twodevp_pair*>(0x1);
  CHECK(twodevp_pair_from_dense(2, a.data(), bad.data(), &p) == TWODEVP_INVALID_ARGUMENT);
  CHECK(p == nullptr);
  CHECK(std::string(twodevp_last_error()).find("Hermitian") != std::string::npos);

  CHECK(twodevp_pair_example61(nullptr) == TWODEVP_INVALID_ARGUMENT);
  twodevp_result* r = nullptr;
  CHECK(twodevp_solve(nullptr, 0, 0, nullptr, &r) == TWODEVP_INVALID_ARGUMENT);
  CHECK(twodevp_pair_load("/nonexistent/a.mtx", "/nonexistent/c.mtx", &p) == TWODEVP_IO_ERROR);

  // freeing null handles is harmless
  twodevp_pair_free(nullptr);
  twodevp_result_free(nullptr);
  twodevp_matrix_free(nullptr);
  twodevp_minmax_free(nullptr);
}

TEST_CASE("unstable matrix") {
  const std::vector<double> d{0.5, 0};
  twodevp_matrix* m = nullptr;
  REQUIRE(twodevp_matrix_from_dense(1, d.data(), &m) == TWODEVP_OK);
  twodevp_result* r = nullptr;
  CHECK(twodevp_dti(m, nullptr, &r) == TWODEVP_UNSTABLE);
  CHECK(r == nullptr);
  twodevp_matrix_free(m);
}

TEST_CASE("distance to instability of -1") {
  const std::vector<double> d{-1, 0};
  twodevp_matrix* m = nullptr;
  REQUIRE(twodevp_matrix_from_dense(1, d.data(), &m) == TWODEVP_OK);
  twodevp_result* r = nullptr;
  REQUIRE(twodevp_dti(m, nullptr, &r) == TWODEVP_OK);
  double beta = 0;
  CHECK(twodevp_result_number(r, "beta", &beta) == TWODEVP_OK);
  CHECK(beta == doctest::Approx(1.0).epsilon(1e-14));
  twodevp_result_free(r);
  REQUIRE(twodevp_dti_validate(m, 1.0, 1e-3, &r) == TWODEVP_OK);
  CHECK(std::string(twodevp_result_string(r, "validated")) == "passed");
  twodevp_result_free(r);
  REQUIRE(twodevp_oracle_dti_scan(m, -3, 3, 61, &r) == TWODEVP_OK);
  CHECK(twodevp_result_number(r, "beta", &beta) == TWODEVP_OK);
  CHECK(beta == doctest::Approx(1.0).epsilon(1e-14));
  twodevp_result_free(r);
  twodevp_matrix_free(m);
}

TEST_CASE("minmax round trip through files") {
  twodevp_minmax* p = nullptr;
  REQUIRE(twodevp_minmax_mimo(3, 4, &p) == TWODEVP_OK);
  CHECK(twodevp_minmax_dim(p) == 9);
  const auto dir = std::filesystem::temp_directory_path() / "twodevp_capi_test";
  std::filesystem::create_directories(dir);
  const std::string fa = (dir / "a.mtx").string(), fb = (dir / "b.mtx").string();
  REQUIRE(twodevp_minmax_save(p, fa.c_str(), fb.c_str()) == TWODEVP_OK);
  twodevp_minmax* q = nullptr;
  REQUIRE(twodevp_minmax_load(fa.c_str(), fb.c_str(), &q) == TWODEVP_OK);

  twodevp_result *r1 = nullptr, *r2 = nullptr, *r3 = nullptr;
  REQUIRE(twodevp_rqminmax(p, nullptr, &r1) == TWODEVP_OK);
  REQUIRE(twodevp_rqminmax(q, nullptr, &r2) == TWODEVP_OK);
  REQUIRE(twodevp_oracle_evopt(q, 0.0, 1.0, 1e-8, 0.0, &r3) == TWODEVP_OK);
  double v1 = 0, v2 = 0, v3 = 0;
  CHECK(twodevp_result_number(r1, "value", &v1) == TWODEVP_OK);
  CHECK(twodevp_result_number(r2, "value", &v2) == TWODEVP_OK);
  CHECK(twodevp_result_number(r3, "value", &v3) == TWODEVP_OK);
  CHECK(v2 == doctest::Approx(v1).epsilon(1e-12));
  CHECK(v3 == doctest::Approx(v1).epsilon(1e-7));
  twodevp_result_free(r1);
  twodevp_result_free(r2);
  twodevp_result_free(r3);
  twodevp_minmax_free(p);
  twodevp_minmax_free(q);
  std::filesystem::remove_all(dir);
}

TEST_CASE("bench and unknown names") {
  twodevp_bench_options o;
  twodevp_bench_options_init(&o);
  twodevp_result* r = nullptr;
  REQUIRE(twodevp_bench("table62", &o, &r) == TWODEVP_OK);
  CHECK(std::strlen(twodevp_result_csv(r)) > 0);
  twodevp_result_free(r);
  CHECK(twodevp_bench("no-such-bench", &o, &r) == TWODEVP_INVALID_ARGUMENT);
}

TEST_CASE("eigencurves oracle") {
  twodevp_pair* p = nullptr;
  REQUIRE(twodevp_pair_example61(&p) == TWODEVP_OK);
  twodevp_result* r = nullptr;
  REQUIRE(twodevp_oracle_eigencurves(p, -1.5, 1.5, 300, &r) == TWODEVP_OK);
  CHECK(std::string(twodevp_result_json(r)).find("-0.74408078056570") != std::string::npos);
  twodevp_result_free(r);
  twodevp_pair_free(p);
}

// Copyright 2026 the beltrami-lab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Exercises the shared-library C surface only: handles, error codes, and
// the JSON scenario runner.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "beltrami/capi.h"

namespace {

std::string strip_timestamp(std::string s) {
  const auto pos = s.find("\"timestamp\"");
  if (pos == std::string::npos) return s;
  const auto end = s.find('\n', pos);
  return s.erase(pos, end - pos);
}

std::string run(const std::string& config, bel_status expect = BEL_OK) {
  char* report = nullptr;
  const bel_status st = bel_run_scenario(config.c_str(), &report);
  REQUIRE(st == expect);
  std::string out;
  if (report) {
    out = report;
    bel_string_free(report);
  }
  return out;
}

}  // namespace

TEST_CASE("version and constants") {
  CHECK(std::strlen(bel_version()) > 0);
  CHECK(bel_cj(0) == 1);
  CHECK(bel_cj(1) == 1);
  CHECK(bel_cj(2) == 13);
}

TEST_CASE("grid handles and error codes") {
  bel_grid* g = nullptr;
  REQUIRE(bel_grid_create(0.0, 1.0, 16, &g) == BEL_OK);
  REQUIRE(g != nullptr);
  CHECK(bel_grid_resolution(g) == 16);
  CHECK(bel_grid_node_count(g) == 256);
  CHECK(bel_grid_area(g) == doctest::Approx(1.0));
  bel_grid_destroy(g);

  bel_grid* bad = nullptr;
  CHECK(bel_grid_create(0.0, -1.0, 16, &bad) == BEL_ERR_CONFIG);
  CHECK(bad == nullptr);
  CHECK(std::strlen(bel_last_error()) > 0);

  CHECK(bel_grid_create(0.0, 1.0, 7, &bad) == BEL_ERR_CONFIG);
  CHECK(bel_grid_create(0.0, 1.0, 16, nullptr) == BEL_ERR_INVALID);
}

TEST_CASE("solving through the C surface") {
  bel_grid* g = nullptr;
  REQUIRE(bel_grid_create(0.0, 1.0, 16, &g) == BEL_OK);
  const int count = bel_grid_node_count(g);

  std::vector<double> mu(2 * count, 0.0);
  for (int k = 0; k < count; ++k) mu[2 * k] = 0.2;  // constant 0.2

  bel_qc_solution* sol = nullptr;
  REQUIRE(bel_solve_beltrami(g, mu.data(), 0.0, 0, &sol) == BEL_OK);
  CHECK(bel_qc_residual(sol) < 1e-12);
  CHECK(bel_qc_iterations(sol) >= 1);

  double cre = 0, cim = 0;
  REQUIRE(bel_qc_shear(sol, &cre, &cim) == BEL_OK);
  CHECK(cre == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(std::abs(cim) < 1e-13);

  std::vector<double> lambda(2 * count, 0.0);
  REQUIRE(bel_qc_lambda(sol, lambda.data()) == BEL_OK);
  for (int k = 0; k < count; ++k) {
    CHECK(lambda[2 * k] == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(std::abs(lambda[2 * k + 1]) < 1e-11);
  }

  std::vector<double> Z(2 * count, 0.0);
  CHECK(bel_qc_coordinate(sol, Z.data()) == BEL_OK);

  bel_qc_solution_destroy(sol);

  // sup-norm violation surfaces as a config error
  for (int k = 0; k < count; ++k) mu[2 * k] = 0.95;
  bel_qc_solution* bad = nullptr;
  CHECK(bel_solve_beltrami(g, mu.data(), 0.0, 0, &bad) == BEL_ERR_CONFIG);
  CHECK(bad == nullptr);

  bel_grid_destroy(g);
}

TEST_CASE("scenario runner round trip") {
  const std::string report =
      run(R"({"subcommand":"cj","j":2})");
  CHECK(report.find("\"c_j\": 13") != std::string::npos);
  CHECK(report.find("\"version\"") != std::string::npos);
  CHECK(report.find("\"config\"") != std::string::npos);

  // deterministic modulo the timestamp
  const std::string again = run(R"({"subcommand":"cj","j":2})");
  CHECK(strip_timestamp(report) == strip_timestamp(again));
}

TEST_CASE("scenario runner error paths") {
  char* report = nullptr;
  CHECK(bel_run_scenario("this is not json", &report) == BEL_ERR_CONFIG);
  CHECK(report == nullptr);
  CHECK(bel_run_scenario(R"({"subcommand":"nope"})", &report) == BEL_ERR_CONFIG);
  CHECK(bel_run_scenario(nullptr, &report) == BEL_ERR_INVALID);

  // sup|mu| >= 0.7 rejected at config level
  CHECK(bel_run_scenario(
            R"({"subcommand":"solve","n":16,"mu":{"kind":"const","value":[0.75,0.0]}})",
            &report) == BEL_ERR_CONFIG);

  // eigen-work grid cap
  CHECK(bel_run_scenario(R"({"subcommand":"spectrum","n":64})", &report) == BEL_ERR_CONFIG);
}

TEST_CASE("scenario solve reports the image modulus") {
  const std::string report = run(
      R"({"subcommand":"solve","n":16,"tau":[0.0,1.0],"mu":{"kind":"const","value":[0.2,0.0]}})");
  CHECK(report.find("tau_prime") != std::string::npos);
  CHECK(report.find("0.6666666666666") != std::string::npos);
}

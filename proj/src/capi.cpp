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

#include "beltrami/capi.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "beltrami/beltrami_eq.hpp"
#include "beltrami/grid.hpp"
#include "beltrami/scenario.hpp"
#include "beltrami/version.hpp"

// Opaque handle bodies.
struct bel_grid {
  bel::Grid grid;
};
struct bel_qc_solution {
  bel::QcSolution sol;
};

namespace {

thread_local std::string g_last_error;

bel_status set_error(bel_status code, const char* what) {
  g_last_error = what ? what : "";
  return code;
}

template <typename Fn>
bel_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return BEL_OK;
  } catch (const bel::ConfigError& e) {
    return set_error(BEL_ERR_CONFIG, e.what());
  } catch (const bel::SolverError& e) {
    return set_error(BEL_ERR_NUMERICAL, e.what());
  } catch (const bel::NumericalError& e) {
    return set_error(BEL_ERR_NUMERICAL, e.what());
  } catch (const std::exception& e) {
    return set_error(BEL_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(BEL_ERR_INTERNAL, "unknown error");
  }
}

void copy_interleaved(const std::vector<bel::cplx>& v, double* out) {
  for (size_t k = 0; k < v.size(); ++k) {
    out[2 * k] = v[k].real();
    out[2 * k + 1] = v[k].imag();
  }
}

}  // namespace

extern "C" {

const char* bel_version(void) { return BELTRAMI_LAB_VERSION; }

const char* bel_last_error(void) { return g_last_error.c_str(); }

int bel_cj(int j) { return 6 * j * (j - 1) + 1; }

bel_status bel_grid_create(double tau_re, double tau_im, int n, bel_grid** out) {
  if (!out) return set_error(BEL_ERR_INVALID, "bel_grid_create: null output pointer");
  *out = nullptr;
  return guarded([&] {
    *out = new bel_grid{bel::Grid(bel::TorusModulus(bel::cplx(tau_re, tau_im)), n)};
  });
}

void bel_grid_destroy(bel_grid* grid) { delete grid; }

int bel_grid_resolution(const bel_grid* grid) { return grid ? grid->grid.n() : 0; }

int bel_grid_node_count(const bel_grid* grid) { return grid ? grid->grid.size() : 0; }

double bel_grid_area(const bel_grid* grid) { return grid ? grid->grid.area() : 0.0; }

bel_status bel_solve_beltrami(const bel_grid* grid, const double* mu_interleaved, double tol,
                              int max_iter, bel_qc_solution** out) {
  if (!grid || !mu_interleaved || !out)
    return set_error(BEL_ERR_INVALID, "bel_solve_beltrami: null argument");
  *out = nullptr;
  return guarded([&] {
    const int sz = grid->grid.size();
    std::vector<bel::cplx> mu(static_cast<size_t>(sz));
    for (int k = 0; k < sz; ++k)
      mu[static_cast<size_t>(k)] = bel::cplx(mu_interleaved[2 * k], mu_interleaved[2 * k + 1]);
    bel::SolveOptions opts;
    if (tol > 0.0) opts.tol = tol;
    if (max_iter > 0) opts.max_iter = max_iter;
    bel::QcSolution sol =
        bel::solve_beltrami(bel::BeltramiField(bel::Field(grid->grid, std::move(mu))), opts);
    *out = new bel_qc_solution{std::move(sol)};
  });
}

void bel_qc_solution_destroy(bel_qc_solution* sol) { delete sol; }

double bel_qc_residual(const bel_qc_solution* sol) { return sol ? sol->sol.residual : -1.0; }

int bel_qc_iterations(const bel_qc_solution* sol) { return sol ? sol->sol.iterations : -1; }

bel_status bel_qc_shear(const bel_qc_solution* sol, double* re, double* im) {
  if (!sol || !re || !im) return set_error(BEL_ERR_INVALID, "bel_qc_shear: null argument");
  *re = sol->sol.c.real();
  *im = sol->sol.c.imag();
  return BEL_OK;
}

bel_status bel_qc_coordinate(const bel_qc_solution* sol, double* z_interleaved) {
  if (!sol || !z_interleaved)
    return set_error(BEL_ERR_INVALID, "bel_qc_coordinate: null argument");
  return guarded([&] { copy_interleaved(sol->sol.Z_samples().values(), z_interleaved); });
}

bel_status bel_qc_lambda(const bel_qc_solution* sol, double* lambda_interleaved) {
  if (!sol || !lambda_interleaved)
    return set_error(BEL_ERR_INVALID, "bel_qc_lambda: null argument");
  return guarded([&] { copy_interleaved(sol->sol.lambda.values(), lambda_interleaved); });
}

bel_status bel_run_scenario(const char* config_json, char** report_out) {
  if (!config_json || !report_out)
    return set_error(BEL_ERR_INVALID, "bel_run_scenario: null argument");
  *report_out = nullptr;
  return guarded([&] {
    const std::string report = bel::run_scenario(config_json);
    char* buf = static_cast<char*>(std::malloc(report.size() + 1));
    if (!buf) throw std::bad_alloc();
    std::memcpy(buf, report.c_str(), report.size() + 1);
    *report_out = buf;
  });
}

void bel_string_free(char* s) { std::free(s); }

}  // extern "C"

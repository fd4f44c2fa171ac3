/* Copyright 2026 the beltrami-lab authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the beltrami shared library.
 *
 * Objects are opaque handles; every fallible call returns a bel_status and
 * writes its output through pointers.  bel_last_error() returns a
 * thread-local description of the most recent failure.  Complex node data
 * crosses the boundary as re/im interleaved double arrays of length
 * 2 * node_count, row-major in (a, b) with x = a/n, y = b/n.
 *
 * bel_run_scenario is the full scenario runner: it takes a JSON config
 * (see the CLI for the schema) and returns a malloc'd report that must be
 * released with bel_string_free.
 */

#ifndef BELTRAMI_CAPI_H
#define BELTRAMI_CAPI_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bel_status {
  BEL_OK = 0,
  BEL_ERR_CONFIG = 2,     /* invalid input or config */
  BEL_ERR_NUMERICAL = 3,  /* solver stall, degenerate spectrum, ... */
  BEL_ERR_INVALID = 4,    /* null handle / bad pointer */
  BEL_ERR_INTERNAL = 5
} bel_status;

typedef struct bel_grid bel_grid;
typedef struct bel_qc_solution bel_qc_solution;

const char* bel_version(void);
const char* bel_last_error(void);

/* C_j = 6 j (j - 1) + 1 */
int bel_cj(int j);

bel_status bel_grid_create(double tau_re, double tau_im, int n, bel_grid** out);
void bel_grid_destroy(bel_grid* grid);
int bel_grid_resolution(const bel_grid* grid);
int bel_grid_node_count(const bel_grid* grid);
double bel_grid_area(const bel_grid* grid);

/* Solve (dzbar - mu dz) Z = 0; mu as interleaved samples on the grid.
 * Pass tol <= 0 or max_iter <= 0 for the defaults (1e-10, 500). */
bel_status bel_solve_beltrami(const bel_grid* grid, const double* mu_interleaved,
                              double tol, int max_iter, bel_qc_solution** out);
void bel_qc_solution_destroy(bel_qc_solution* sol);
double bel_qc_residual(const bel_qc_solution* sol);
int bel_qc_iterations(const bel_qc_solution* sol);
bel_status bel_qc_shear(const bel_qc_solution* sol, double* re, double* im);
/* Buffers must hold 2 * node_count doubles. */
bel_status bel_qc_coordinate(const bel_qc_solution* sol, double* z_interleaved);
bel_status bel_qc_lambda(const bel_qc_solution* sol, double* lambda_interleaved);

bel_status bel_run_scenario(const char* config_json, char** report_out);
void bel_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* BELTRAMI_CAPI_H */

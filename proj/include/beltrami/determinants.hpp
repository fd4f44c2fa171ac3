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

#pragma once

// Zeta-regularized determinants of the deformed Laplacians, the exact
// flat-torus oracle, and the Quillen norm data.
//
// Numerical backend: from the finite spectrum, the heat trace
// theta(t) = sum' e^{-lambda t} (zero modes excluded) is trusted for
// t >= t0, where t0 is chosen so the true spectrum beyond the grid cutoff
// contributes less than tail_eps to theta(t0).  Below t0 the two-term
// surface asymptotics A/(4 pi t) + c0 (+ c1 t for non-flat metrics) is
// substituted, with c0 (and c1) fitted on the window [t0, window*t0].
// The split Mellin transform then gives
//
//   ln det' = A/(4 pi t0) - c0 ln t0 - c1 t0 - sum' E1(lambda t0) - euler_gamma c0
//
// and zeta(0) = c0 (on the torus c0 = -N for every smooth metric, since
// the integrated curvature term vanishes).
//
// Exact oracle: for the flat torus of modulus tau and metric area A the
// Laplace-Beltrami determinant is, by the Kronecker limit formula,
//
//   ln det' = ln(A * Im(tau_r) * |eta(tau_r)|^4)
//
// with tau_r the fundamental-domain representative (the combination
// Im(tau)|eta|^4 is modular invariant).  The area convention matches the
// numerical backend's 4 T^* T normalization at the reference point
// (tau = i, A = 1) with no further calibration constant.  A second,
// independent route continues the Epstein zeta of the lattice quadratic
// form through its incomplete-gamma (theta-accelerated) representation.

#include <optional>
#include <string>
#include <vector>

#include "beltrami/beltrami_eq.hpp"
#include "beltrami/geometry.hpp"
#include "beltrami/operators.hpp"

namespace bel {

struct SpectrumData {
  std::vector<double> eigenvalues;  // ascending, zero modes included
  int n_zero = 0;
  int grid_n = 0;
  double area = 0.0;  // metric area entering the heat asymptotics
  // Largest continuum eigenvalue the grid resolves; 0 = use the
  // cut_fraction heuristic.  The heat trace is trusted only where the
  // true spectrum above this value is Boltzmann-negligible.
  double lambda_cut = 0.0;

  std::vector<double> nonzero() const {
    return {eigenvalues.begin() + n_zero, eigenvalues.end()};
  }
};

SpectrumData make_spectrum(const WeightedOperator& laplacian, double area,
                           double kernel_tol = -1.0);

// Principal-symbol eigenvalue floor over the first frequency shells
// missing from the grid window: below this every continuum eigenvalue is
// representable, so the grid heat trace is trustworthy once e^{-t lambda}
// suppresses it.  Valid for any smooth mu, rho (the symbol is minimized
// over the nodes).
double resolvable_cutoff(const BeltramiField& mu, const MetricDensity& rho);

struct HeatKernelConfig {
  double tail_eps = 1e-8;        // allowed missing-tail contribution at t0
  double window = 2.0;           // fit window [t0, window * t0]
  int fit_points = 9;
  double cut_fraction = 0.7;     // trusted fraction of the top eigenvalue
  bool fit_linear_term = false;  // include the c1 t term (curved metrics)
  double instability_threshold = 1e-3;  // fit RMS above this flags the result
};

struct ZetaResult {
  double log_det = 0.0;
  double c0 = 0.0;  // = zeta(0)
  double c1 = 0.0;
  double t0 = 0.0;
  double fit_rms = 0.0;
  bool flagged = false;  // fit window unstable
};

ZetaResult zeta_log_det(const SpectrumData& spec, const HeatKernelConfig& cfg = {});

// Exact flat-torus oracle, Dedekind-eta route.
double torus_exact_log_det(TorusModulus tau, double area);

// Independent oracle: direct Epstein-zeta continuation with theta-function
// acceleration.  Agrees with the eta route to ~1e-10.
double torus_exact_log_det_epstein(TorusModulus tau, double area);

// ln |eta(tau)| by the q-product on the reduced modulus.
double log_abs_eta(cplx tau);

// Fundamental-domain representative (|Re| <= 1/2, |tau| >= 1).
cplx reduce_modulus(cplx tau);

enum class DetMethod { numerical_heat_kernel, torus_exact_oracle };

struct QuillenData {
  double log_det_zeta = 0.0;
  double log_l2_norm = 0.0;  // ln ||s||^2_L2 of the kernel section
  double gamma = 0.0;        // = (log_det_zeta + log_l2_norm) / 2
  DetMethod method = DetMethod::numerical_heat_kernel;
  int n_j = 0;      // numerical kernel dimension of Delta_j (1 on the torus)
  double c0 = 0.0;
  double t0 = 0.0;
  bool flagged = false;
  std::string flag_reason;
};

// Quillen data for weight j: ln det' Delta_j plus the L2 norm of the
// section s = gamma^{-1} (x) beta^{-1} built from the mu-holomorphic,
// rho-independent kernel elements gamma = lambda^j, beta = lambda^{1-j}
// (Gram determinants in the (j,0)/(1-j,0) weighted inner products).  The
// oracle method requires constant mu and constant rho.
QuillenData quillen_gamma(int j, const BeltramiField& mu, const MetricDensity& rho,
                          DetMethod method, const HeatKernelConfig& cfg = {},
                          const SolveOptions& solve_opts = {});

}  // namespace bel

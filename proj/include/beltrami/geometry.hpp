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

// Metric data in the Beltrami parametrization ds^2 = rho |dz + mu dzbar|^2:
// volume density, the transformed metric rho_{ZZbar} = rho/|lambda|^2,
// connection/curvature scalars of rho, weighted norms of (j, jbar)
// differentials, the free scalar action in both coordinate systems, and
// the classical stress tensor.
//
// Both action routes evaluate the same functional
//
//   S = 1/2 Int (dz(X) - conj(mu) dzbar(X)) (dzbar(X) - mu dz(X)) / (1 - mu conj(mu))
//
// action_z uses this z-coordinate quadratic form directly (the discrete
// integration-by-parts image of the second-order form, exactly symmetric
// in X); action_Z applies the transformed derivatives d_Z d_Zbar and the
// |lambda|^2 (1 - mu conj(mu)) measure Jacobian.  The normalization is the
// one for which dS/dmu at mu = 0 equals -1/2 (dz X)^2.

#include "beltrami/beltrami_eq.hpp"
#include "beltrami/grid.hpp"

namespace bel {

// Positive real (1,1) density rho_{z zbar}.
class MetricDensity {
 public:
  explicit MetricDensity(Field rho);
  static MetricDensity flat(const Grid& g) { return MetricDensity(Field(g, cplx(1.0, 0.0))); }

  const Field& rho() const { return rho_; }
  const Grid& grid() const { return rho_.grid(); }
  bool is_constant(double tol = 1e-13) const;

 private:
  Field rho_;
};

// Gamma = dz ln(rho), R = dz(Gamma) - Gamma^2/2, plus a holomorphic
// projective connection coefficient (0 is admissible on the torus, where
// z is a global flat coordinate).
struct ConnectionData {
  Field Gamma;
  Field Gamma_bar;
  Field R_scalar;
  Field R_hol;
};

ConnectionData connection_data(const MetricDensity& rho);

struct DifferentialWeight {
  double j = 0.0;
  double j_bar = 0.0;
};

// sqrt(g) = rho (1 - mu conj(mu)).
Field volume_density(const MetricDensity& rho, const BeltramiField& mu);

// rho_{Z Zbar} = rho / |lambda|^2.
Field rho_ZZ(const MetricDensity& rho, const QcSolution& sol);

// Norm^2 of a (j, jbar) coefficient alpha:
//   Int (1 - mu conj(mu)) |alpha|^2 rho^{1 - j - jbar}.
double norm_jj(const Field& alpha, DifferentialWeight w, const MetricDensity& rho,
               const BeltramiField& mu);

// d_Zbar f = (dzbar f - mu dz f) / (conj(lambda) (1 - mu conj(mu))), and
// its conjugate partner d_Z.  Valid for any periodic scalar f.
Field d_Zbar(const Field& f, const QcSolution& sol, const BeltramiField& mu);
Field d_Z(const Field& f, const QcSolution& sol, const BeltramiField& mu);

// Free scalar action, z-coordinate (local-in-mu) form.  X must be real.
double action_z(const Field& X, const BeltramiField& mu);

// Same functional through the quasiconformal coordinate.
double action_Z(const Field& X, const QcSolution& sol, const BeltramiField& mu);

// Theta = -1/2 (dz X)^2: the mu-derivative of the action at mu = 0.
Field stress_tensor(const Field& X);

}  // namespace bel

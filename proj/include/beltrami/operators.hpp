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

// Deformed dbar-operator family on (j,0) coefficients and its Laplacian,
// as dense matrices in the node basis.
//
//   T_j = (1 - mu conj(mu))^{-1} (dzbar - mu dz - j (dz mu))
//
// maps (j,0) coefficients to (j,1) coefficients.  Inner products carry
// the weights induced by ds^2 = rho |dz + mu dzbar|^2:
//
//   domain   (j,0):  (1 - mu conj(mu)) rho^{1-j}
//   codomain (j,1):  (1 - mu conj(mu)) rho^{-j}
//
// and with these weights the adjoint has the closed form
//
//   T_j^* = -rho^{j-1} conj(T_{1-j}) rho^{-j},
//
// discretized in divergence ordering (the dzbar acts on the conj(mu) v
// product) so that it coincides with the weight-twisted conjugate
// transpose of the T matrix to roundoff; build_laplacian cross-validates
// the two.  The Laplacian is returned in the
// Laplace-Beltrami normalization
//
//   Delta_j = 4 T_j^* T_j,
//
// so that at j = 0, mu = 0, rho = 1 it is the flat metric Laplacian
// -(dx^2 + dy^2) with eigenvalues 4 pi^2 (p^2 + q^2) at tau = i.  The
// factor 4 relates the dbar-Laplacian T^*T to the geometric operator
// -(4/rho_{ZZbar}) d_Z d_Zbar; the quadratic form identity is therefore
// <gamma, Delta gamma>_domain = 4 ||T gamma||^2_codomain.
//
// Eigenproblems are solved on the symmetrization W^{1/2} Delta W^{-1/2}
// (W = domain weight), Hermitian in the plain inner product with the same
// spectrum.  Dense matrices cap the grid at n <= 32.

#include <Eigen/Dense>
#include <vector>

#include "beltrami/beltrami_eq.hpp"
#include "beltrami/geometry.hpp"
#include "beltrami/grid.hpp"

namespace bel {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr int kMaxEigenGridN = 32;

enum class OperatorKind { deformed_dbar, adjoint, laplacian };

struct WeightedOperator {
  OperatorKind kind = OperatorKind::deformed_dbar;
  int j = 0;
  Grid grid;
  Matrix matrix;
  Field domain_weight;    // real positive, (1 - mu mubar) rho^{1-j}
  Field codomain_weight;  // real positive; equals domain weight for Delta
};

struct KernelBasis {
  int j = 0;
  double tol = 0.0;                // numerical-rank threshold used
  std::vector<Field> vectors;      // orthonormal in the domain weight
  std::vector<double> rayleigh;    // Delta-eigenvalues of the kept vectors
  int dimension() const { return static_cast<int>(vectors.size()); }
};

// Apply T_j to a field without forming the matrix.
Field apply_T(int j, const BeltramiField& mu, const Field& gamma);

WeightedOperator build_T(int j, const BeltramiField& mu, const MetricDensity& rho);

// Analytic adjoint matrix -rho^{j-1} conj(T_{1-j}) rho^{-j}.
WeightedOperator build_T_star(int j, const BeltramiField& mu, const MetricDensity& rho);

// Delta_j = 4 T^* T; throws NumericalError if the analytic adjoint and the
// weight-twisted transpose disagree beyond 1e-8 in relative Frobenius norm.
WeightedOperator build_laplacian(int j, const BeltramiField& mu, const MetricDensity& rho);

// All eigenvalues of a Laplacian-kind operator, ascending.
std::vector<double> eigenvalues(const WeightedOperator& op);

// Default numerical-rank threshold: 1e-6 * largest eigenvalue.
double default_kernel_tol(const std::vector<double>& eigs);

// Weighted-orthonormal basis of the numerical null space of a Laplacian.
// Throws NumericalError when the spectrum has no clean gap at the
// threshold (first kept eigenvalue < 10 * tol above the discarded ones).
KernelBasis kernel_basis(const WeightedOperator& op, double tol = -1.0);

// Relative Frobenius mismatch between the analytic adjoint and the
// weight-twisted conjugate transpose W_dom^{-1} T^H W_cod.
double adjoint_mismatch(const WeightedOperator& T, const WeightedOperator& T_star);

}  // namespace bel

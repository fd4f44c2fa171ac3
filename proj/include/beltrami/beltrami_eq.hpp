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

// Solver for the Beltrami equation (dzbar - mu*dz) Z = 0 on the torus.
//
// The quasiconformal coordinate is sought as Z = z + c*zbar + w with a
// constant shear c and a doubly periodic, zero-mean deviation w.  In this
// ansatz the equation becomes dzbar(w) = mu*(1 + dz(w)) - c, and choosing
// c as the mean of mu*(1 + dz(w)) each sweep keeps the right-hand side in
// the range of dzbar.  The fixed point is reached geometrically with rate
// about sup|mu| (the dz o dzbar^{-1} transform is an isometry mode by
// mode).  The zero-mean normalization of w fixes the additive ambiguity
// of Z and selects the branch holomorphic in mu: the sweep map involves
// no complex conjugation of mu.
//
// The integrating factor lambda = dz(Z) = 1 + dz(w) satisfies
// (dzbar - mu*dz) ln(lambda) = dz(mu); check_pfaff re-evaluates both that
// equation and the Beltrami residual from scratch.

#include <complex>

#include "beltrami/grid.hpp"

namespace bel {

// Beltrami coefficient with sup-norm < 1 (orientation preservation).
class BeltramiField {
 public:
  explicit BeltramiField(Field mu);

  const Field& mu() const { return mu_; }
  double sup_norm() const { return sup_norm_; }
  const Grid& grid() const { return mu_.grid(); }
  bool is_constant(double tol = 1e-13) const;
  cplx constant_value() const { return mu_[0]; }

 private:
  Field mu_;
  double sup_norm_ = 0.0;
};

struct SolveOptions {
  double tol = 1e-10;
  int max_iter = 500;
  // The spectral sweep degrades as sup|mu| -> 1; refuse beyond this.
  double max_sup_norm = 0.7;
};

// Z = z + c*zbar + w, lambda = dz(Z).
struct QcSolution {
  Grid grid;
  Field w;        // periodic deviation, zero mean
  cplx c;         // constant shear
  Field lambda;   // 1 + dz(w)
  double residual = 0.0;   // sup |(dzbar - mu dz) Z| at exit
  int iterations = 0;
  std::vector<double> residual_history;  // one entry per sweep

  Field Z_samples() const;      // z + c*zbar + w at the nodes
  Field dz_Z() const;           // = lambda
  Field dzbar_Z() const;        // c + dzbar(w)
};

QcSolution solve_beltrami(const BeltramiField& mu, const SolveOptions& opts = {});

// Max of the two re-evaluated residuals:
//   sup |dzbar(Z) - mu dz(Z)|   and   sup |(dzbar - mu dz) ln(lambda) - dz(mu)|.
double check_pfaff(const QcSolution& sol, const BeltramiField& mu);

// Image modulus of the constant-coefficient map Z = z + mu*zbar:
// tau' = (tau + mu*conj(tau)) / (1 + mu).
TorusModulus modulus_of_constant(cplx mu, TorusModulus tau);

}  // namespace bel

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

#include "beltrami/beltrami_eq.hpp"

#include <cmath>
#include <string>

namespace bel {

BeltramiField::BeltramiField(Field mu) : mu_(std::move(mu)) {
  sup_norm_ = mu_.sup_norm();
  if (!(sup_norm_ < 1.0))
    throw ConfigError("BeltramiField: sup|mu| = " + std::to_string(sup_norm_) + " >= 1");
}

bool BeltramiField::is_constant(double tol) const {
  const cplx v = mu_[0];
  for (const cplx& s : mu_.values())
    if (std::abs(s - v) > tol) return false;
  return true;
}

Field QcSolution::Z_samples() const {
  std::vector<cplx> v(static_cast<size_t>(grid.size()));
  for (int k = 0; k < grid.size(); ++k) {
    const cplx z = grid.z_at(k);
    v[static_cast<size_t>(k)] = z + c * std::conj(z) + w[k];
  }
  return Field(grid, std::move(v));
}

Field QcSolution::dz_Z() const { return lambda; }

Field QcSolution::dzbar_Z() const { return d_zbar(w) + c; }

QcSolution solve_beltrami(const BeltramiField& mu, const SolveOptions& opts) {
  if (mu.sup_norm() > opts.max_sup_norm)
    throw ConfigError("solve_beltrami: sup|mu| = " + std::to_string(mu.sup_norm()) +
                      " exceeds the solver cap " + std::to_string(opts.max_sup_norm));

  const Grid& g = mu.grid();
  const Field& m = mu.mu();

  Field w(g, cplx(0.0, 0.0));
  Field dw = w;
  cplx c(0.0, 0.0);
  double residual = 0.0;
  int iter = 0;
  std::vector<double> history;

  for (iter = 1; iter <= opts.max_iter; ++iter) {
    Field rhs = m * (dw + cplx(1.0, 0.0));  // mu * dz(Z)
    c = mean(rhs);
    w = dzbar_inv(rhs);  // discards the mean; w stays zero-mean
    dw = d_z(w);

    // residual of (dzbar - mu dz) Z with the current (w, c)
    residual = (d_zbar(w) + c - m * (dw + cplx(1.0, 0.0))).sup_norm();
    history.push_back(residual);
    if (residual <= opts.tol) break;
  }

  if (residual > opts.tol)
    throw SolverError("solve_beltrami: stalled at residual " + std::to_string(residual),
                      residual, iter);

  QcSolution sol{g,        std::move(w),
                 c,        dw + cplx(1.0, 0.0),
                 residual, std::min(iter, opts.max_iter),
                 std::move(history)};

  // Orientation and invertibility of the coordinate change.
  const Field dzbZ = sol.dzbar_Z();
  double min_gap = 1e300, min_lambda = 1e300;
  for (int k = 0; k < g.size(); ++k) {
    const double lam = std::abs(sol.lambda[k]);
    min_lambda = std::min(min_lambda, lam);
    min_gap = std::min(min_gap, lam - std::abs(dzbZ[k]));
  }
  if (min_lambda < 1e-6)
    throw NumericalError("solve_beltrami: integrating factor vanishes (min|lambda| = " +
                         std::to_string(min_lambda) + ")");
  if (min_gap <= 0.0)
    throw NumericalError("solve_beltrami: solution not orientation-preserving");

  return sol;
}

double check_pfaff(const QcSolution& sol, const BeltramiField& mu) {
  if (!sol.grid.compatible(mu.grid())) throw GridMismatchError("check_pfaff: grids differ");

  const Field& m = mu.mu();
  const double r_beltrami = (sol.dzbar_Z() - m * sol.dz_Z()).sup_norm();

  // (dzbar - mu dz) ln(lambda) = dz(mu)
  const Field ln_lambda = sol.lambda.map([](cplx v) { return std::log(v); });
  const double r_pfaff = (d_zbar(ln_lambda) - m * d_z(ln_lambda) - d_z(m)).sup_norm();

  return std::max(r_beltrami, r_pfaff);
}

TorusModulus modulus_of_constant(cplx mu, TorusModulus tau) {
  if (!(std::abs(mu) < 1.0)) throw ConfigError("modulus_of_constant: |mu| >= 1");
  return TorusModulus((tau.tau + mu * std::conj(tau.tau)) / (cplx(1.0, 0.0) + mu));
}

}  // namespace bel

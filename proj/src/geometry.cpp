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

#include "beltrami/geometry.hpp"

#include <cmath>

namespace bel {

namespace {

void require_compatible(const Grid& a, const Grid& b, const char* where) {
  if (!a.compatible(b)) throw GridMismatchError(std::string(where) + ": grids differ");
}

void require_real(const Field& f, const char* where) {
  if (f.max_imag() > 1e-12 * (1.0 + f.sup_norm()))
    throw ConfigError(std::string(where) + ": field must be real");
}

Field one_minus_mu_mubar(const BeltramiField& mu) {
  Field f = mu.mu() * mu.mu().conj();
  return f.map([](cplx v) { return cplx(1.0, 0.0) - v; });
}

}  // namespace

MetricDensity::MetricDensity(Field rho) : rho_(std::move(rho)) {
  for (const cplx& v : rho_.values()) {
    if (!(v.real() > 0.0)) throw ConfigError("MetricDensity: rho must be strictly positive");
    if (std::abs(v.imag()) > 1e-12 * (1.0 + std::abs(v.real())))
      throw ConfigError("MetricDensity: rho must be real");
  }
  rho_ = rho_.real_part();
}

bool MetricDensity::is_constant(double tol) const {
  const cplx v = rho_[0];
  for (const cplx& s : rho_.values())
    if (std::abs(s - v) > tol) return false;
  return true;
}

ConnectionData connection_data(const MetricDensity& rho) {
  const Field ln_rho = log_real(rho.rho());
  Field Gamma = d_z(ln_rho);
  Field Gamma_bar = d_zbar(ln_rho);
  Field R = d_z(Gamma) - cplx(0.5, 0.0) * (Gamma * Gamma);
  return ConnectionData{std::move(Gamma), std::move(Gamma_bar), std::move(R),
                        Field(rho.grid(), cplx(0.0, 0.0))};
}

Field volume_density(const MetricDensity& rho, const BeltramiField& mu) {
  require_compatible(rho.grid(), mu.grid(), "volume_density");
  return rho.rho() * one_minus_mu_mubar(mu);
}

Field rho_ZZ(const MetricDensity& rho, const QcSolution& sol) {
  require_compatible(rho.grid(), sol.grid, "rho_ZZ");
  const Field lam2 = sol.lambda * sol.lambda.conj();
  for (const cplx& v : lam2.values())
    if (!(std::abs(v) > 1e-24)) throw NumericalError("rho_ZZ: lambda vanishes");
  return rho.rho() / lam2;
}

double norm_jj(const Field& alpha, DifferentialWeight w, const MetricDensity& rho,
               const BeltramiField& mu) {
  require_compatible(alpha.grid(), rho.grid(), "norm_jj");
  require_compatible(alpha.grid(), mu.grid(), "norm_jj");
  const double p = 1.0 - w.j - w.j_bar;
  const Field rho_pow = rho.rho().map([p](cplx v) { return cplx(std::pow(v.real(), p), 0.0); });
  const Field integrand = one_minus_mu_mubar(mu) * (alpha * alpha.conj()) * rho_pow;
  return integrate(integrand).real();
}

Field d_Zbar(const Field& f, const QcSolution& sol, const BeltramiField& mu) {
  require_compatible(f.grid(), sol.grid, "d_Zbar");
  const Field num = d_zbar(f) - mu.mu() * d_z(f);
  return num / (sol.lambda.conj() * one_minus_mu_mubar(mu));
}

Field d_Z(const Field& f, const QcSolution& sol, const BeltramiField& mu) {
  require_compatible(f.grid(), sol.grid, "d_Z");
  const Field num = d_z(f) - mu.mu().conj() * d_zbar(f);
  return num / (sol.lambda * one_minus_mu_mubar(mu));
}

double action_z(const Field& X, const BeltramiField& mu) {
  require_compatible(X.grid(), mu.grid(), "action_z");
  require_real(X, "action_z");
  const Field dX = d_z(X);
  const Field dbX = d_zbar(X);
  const Field integrand =
      (dbX - mu.mu() * dX) * (dX - mu.mu().conj() * dbX) / one_minus_mu_mubar(mu);
  return 0.5 * integrate(integrand).real();
}

double action_Z(const Field& X, const QcSolution& sol, const BeltramiField& mu) {
  require_compatible(X.grid(), mu.grid(), "action_Z");
  require_real(X, "action_Z");
  const Field u = d_Zbar(X, sol, mu);
  const Field v = d_Z(u, sol, mu);
  const Field jacobian = (sol.lambda * sol.lambda.conj()) * one_minus_mu_mubar(mu);
  return -0.5 * integrate(jacobian * X * v).real();
}

Field stress_tensor(const Field& X) {
  require_real(X, "stress_tensor");
  const Field dX = d_z(X);
  return cplx(-0.5, 0.0) * (dX * dX);
}

}  // namespace bel

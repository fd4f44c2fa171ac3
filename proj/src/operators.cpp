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

#include "beltrami/operators.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace bel {

namespace {

void require_eigen_grid(const Grid& g, const char* where) {
  if (g.n() > kMaxEigenGridN)
    throw ConfigError(std::string(where) + ": dense eigen-work capped at n <= " +
                      std::to_string(kMaxEigenGridN));
}

Field one_minus_mu_mubar(const BeltramiField& mu) {
  Field f = mu.mu() * mu.mu().conj();
  return f.map([](cplx v) { return cplx(1.0, 0.0) - v; });
}

Field rho_power(const MetricDensity& rho, double p) {
  return rho.rho().map([p](cplx v) { return cplx(std::pow(v.real(), p), 0.0); });
}

// Column-wise assembly of a linear field map.
Matrix assemble(const Grid& g, const std::function<Field(const Field&)>& apply) {
  const int sz = g.size();
  Matrix M(sz, sz);
  std::vector<cplx> e(static_cast<size_t>(sz), cplx(0.0, 0.0));
  for (int col = 0; col < sz; ++col) {
    e[static_cast<size_t>(col)] = cplx(1.0, 0.0);
    const Field out = apply(Field(g, e));
    for (int row = 0; row < sz; ++row) M(row, col) = out[row];
    e[static_cast<size_t>(col)] = cplx(0.0, 0.0);
  }
  return M;
}

Eigen::VectorXd weight_vector(const Field& w) {
  Eigen::VectorXd v(w.size());
  for (int k = 0; k < w.size(); ++k) v(k) = w[k].real();
  return v;
}

}  // namespace

Field apply_T(int j, const BeltramiField& mu, const Field& gamma) {
  const Field& m = mu.mu();
  const Field dmu = d_z(m);
  Field num = d_zbar(gamma) - m * d_z(gamma) - cplx(static_cast<double>(j), 0.0) * (dmu * gamma);
  return num / one_minus_mu_mubar(mu);
}

namespace {

// T^* u = -rho^{j-1} (1 - mu mubar)^{-1}
//           [ dz(v) - dzbar(conj(mu) v) + j conj(dz mu) v ],   v = rho^{-j} u.
//
// Same continuum operator as -rho^{j-1} conj(T_{1-j}) rho^{-j} (expand the
// dzbar of the product), but kept in divergence ordering: with spectral
// derivative matrices the plain product rule suffers aliasing near the
// frequency cutoff, while in this ordering the matrix identity
// T^* = W_dom^{-1} T^H W_cod holds to roundoff.
Field apply_T_star(int j, const BeltramiField& mu, const MetricDensity& rho, const Field& u) {
  const Field rj1 = rho_power(rho, static_cast<double>(j) - 1.0);
  const Field v = rho_power(rho, -static_cast<double>(j)) * u;
  const Field num = d_z(v) - d_zbar(mu.mu().conj() * v) +
                    cplx(static_cast<double>(j), 0.0) * (d_z(mu.mu()).conj() * v);
  return cplx(-1.0, 0.0) * (rj1 * num) / one_minus_mu_mubar(mu);
}

}  // namespace

WeightedOperator build_T(int j, const BeltramiField& mu, const MetricDensity& rho) {
  if (!mu.grid().compatible(rho.grid())) throw GridMismatchError("build_T: grids differ");
  require_eigen_grid(mu.grid(), "build_T");
  const Grid& g = mu.grid();
  const Field omm = one_minus_mu_mubar(mu);
  return WeightedOperator{
      OperatorKind::deformed_dbar,
      j,
      g,
      assemble(g, [&](const Field& f) { return apply_T(j, mu, f); }),
      omm * rho_power(rho, 1.0 - static_cast<double>(j)),
      omm * rho_power(rho, -static_cast<double>(j)),
  };
}

WeightedOperator build_T_star(int j, const BeltramiField& mu, const MetricDensity& rho) {
  if (!mu.grid().compatible(rho.grid())) throw GridMismatchError("build_T_star: grids differ");
  require_eigen_grid(mu.grid(), "build_T_star");
  const Grid& g = mu.grid();
  const Field omm = one_minus_mu_mubar(mu);
  // domain/codomain swapped relative to T: maps (j,1) back to (j,0)
  return WeightedOperator{
      OperatorKind::adjoint,
      j,
      g,
      assemble(g, [&](const Field& f) { return apply_T_star(j, mu, rho, f); }),
      omm * rho_power(rho, -static_cast<double>(j)),
      omm * rho_power(rho, 1.0 - static_cast<double>(j)),
  };
}

double adjoint_mismatch(const WeightedOperator& T, const WeightedOperator& T_star) {
  const Eigen::VectorXd wd = weight_vector(T.domain_weight);
  const Eigen::VectorXd wc = weight_vector(T.codomain_weight);
  // <T* u, g>_dom = <u, T g>_cod  =>  T* = W_dom^{-1} T^H W_cod
  Matrix numeric = wd.cwiseInverse().asDiagonal() * T.matrix.adjoint() * wc.asDiagonal();
  const double scale = numeric.norm();
  return (numeric - T_star.matrix).norm() / (scale > 0.0 ? scale : 1.0);
}

WeightedOperator build_laplacian(int j, const BeltramiField& mu, const MetricDensity& rho) {
  WeightedOperator T = build_T(j, mu, rho);
  WeightedOperator Ts = build_T_star(j, mu, rho);

  const double mismatch = adjoint_mismatch(T, Ts);
  if (mismatch > 1e-8)
    throw NumericalError("build_laplacian: analytic adjoint and weighted transpose disagree (" +
                         std::to_string(mismatch) + ")");

  WeightedOperator D{
      OperatorKind::laplacian, j, T.grid, 4.0 * (Ts.matrix * T.matrix),
      T.domain_weight, T.domain_weight,
  };
  return D;
}

namespace {

// Hermitian matrix with the same spectrum as the weighted operator.
Matrix symmetrized(const WeightedOperator& op) {
  if (op.kind != OperatorKind::laplacian)
    throw ConfigError("eigenvalues/kernel_basis: need a Laplacian-kind operator");
  const Eigen::VectorXd w = weight_vector(op.domain_weight);
  const Eigen::VectorXd ws = w.cwiseSqrt();
  Matrix H = ws.asDiagonal() * op.matrix * ws.cwiseInverse().asDiagonal();
  H = cplx(0.5, 0.0) * (H + Matrix(H.adjoint()));
  return H;
}

}  // namespace

std::vector<double> eigenvalues(const WeightedOperator& op) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrized(op), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericalError("eigenvalues: eigensolver failed to converge");
  std::vector<double> eigs(solver.eigenvalues().data(),
                           solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(eigs.begin(), eigs.end());
  return eigs;
}

double default_kernel_tol(const std::vector<double>& eigs) {
  return 1e-6 * (eigs.empty() ? 1.0 : std::abs(eigs.back()));
}

KernelBasis kernel_basis(const WeightedOperator& op, double tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrized(op));
  if (solver.info() != Eigen::Success)
    throw NumericalError("kernel_basis: eigensolver failed to converge");

  const Eigen::VectorXd evals = solver.eigenvalues();
  const int sz = static_cast<int>(evals.size());
  if (tol <= 0.0) tol = 1e-6 * std::abs(evals(sz - 1));

  int n_zero = 0;
  while (n_zero < sz && evals(n_zero) <= tol) ++n_zero;

  // Demand a clean spectral gap at the threshold.
  if (n_zero == sz || (n_zero > 0 && evals(n_zero) < 10.0 * tol))
    throw NumericalError("kernel_basis: ill-separated spectrum near the kernel threshold");

  const Eigen::VectorXd w = weight_vector(op.domain_weight);
  const Eigen::VectorXd wsi = w.cwiseSqrt().cwiseInverse();
  const double mes = op.grid.quad_weight();

  KernelBasis basis;
  basis.j = op.j;
  basis.tol = tol;
  for (int k = 0; k < n_zero; ++k) {
    Vector u = solver.eigenvectors().col(k);
    Vector v = (wsi.asDiagonal() * u) / std::sqrt(mes);  // unit norm in the weighted product
    std::vector<cplx> samples(v.data(), v.data() + v.size());
    basis.vectors.emplace_back(op.grid, std::move(samples));
    basis.rayleigh.push_back(evals(k));
  }
  return basis;
}

}  // namespace bel

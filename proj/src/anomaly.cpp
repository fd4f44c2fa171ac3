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

#include "beltrami/anomaly.hpp"

#include <cmath>
#include <numbers>

namespace bel {

namespace {

constexpr double kPi = std::numbers::pi;

Field one_minus_mu_mubar(const BeltramiField& mu) {
  Field f = mu.mu() * mu.mu().conj();
  return f.map([](cplx v) { return cplx(1.0, 0.0) - v; });
}

// h = ln rho_{ZZbar} = ln rho - ln |lambda|^2; real and periodic.
Field log_rho_ZZ(const MetricDensity& rho, const QcSolution& sol) {
  const Field log_lam2 =
      sol.lambda.map([](cplx v) { return cplx(std::log(std::norm(v)), 0.0); });
  return log_real(rho.rho()) - log_lam2;
}

}  // namespace

DeformationFamily::DeformationFamily(Field base_, Field direction, double step_)
    : DeformationFamily(std::move(base_), std::vector<Field>{std::move(direction)}, {step_}) {}

DeformationFamily::DeformationFamily(Field base_, std::vector<Field> directions_,
                                     std::vector<double> steps_)
    : base(std::move(base_)), directions(std::move(directions_)), steps(std::move(steps_)) {
  if (directions.empty() || directions.size() > 2)
    throw ConfigError("DeformationFamily: dimension must be 1 or 2");
  if (steps.size() != directions.size())
    throw ConfigError("DeformationFamily: one step per direction");
  for (const Field& d : directions)
    if (!base.grid().compatible(d.grid()))
      throw GridMismatchError("DeformationFamily: grids differ");
  for (double s : steps)
    if (!(s > 0.0)) throw ConfigError("DeformationFamily: step must be positive");
}

BeltramiField DeformationFamily::at(cplx t) const {
  if (dimension() != 1) throw ConfigError("DeformationFamily::at: one-dimensional families only");
  return at(std::vector<cplx>{t});
}

BeltramiField DeformationFamily::at(const std::vector<cplx>& t) const {
  if (static_cast<int>(t.size()) != dimension())
    throw ConfigError("DeformationFamily::at: parameter dimension mismatch");
  Field m = base;
  for (size_t k = 0; k < t.size(); ++k) m += t[k] * directions[k];
  BeltramiField mu(std::move(m));
  if (mu.sup_norm() >= max_sup_norm)
    throw ConfigError("DeformationFamily: sup|mu_t| exceeds " + std::to_string(max_sup_norm) +
                      " on the stencil");
  return mu;
}

TwoFormSamples chi(const MetricDensity& rho, const BeltramiField& mu, const Field& R_hol) {
  if (!rho.grid().compatible(mu.grid()) || !rho.grid().compatible(R_hol.grid()))
    throw GridMismatchError("chi: grids differ");
  if (d_zbar(R_hol).sup_norm() > 1e-8 * (1.0 + R_hol.sup_norm()))
    throw ConfigError("chi: R_hol must be anti-holomorphically closed");

  const ConnectionData conn = connection_data(rho);
  const Field& m = mu.mu();
  const Field mbar = m.conj();

  const Field P = d_z(m) + conn.Gamma * m;
  const Field Pb = d_zbar(mbar) + conn.Gamma_bar * mbar;

  const Field first = m * (R_hol - conn.R_scalar);
  const Field bracket = P * Pb - cplx(0.5, 0.0) * (mbar * (P * P)) -
                        cplx(0.5, 0.0) * (m * (Pb * Pb));
  Field density = first + first.conj() - bracket / one_minus_mu_mubar(mu);

  // A real density is forced by the conjugate pairing; anything beyond
  // unresolved-tail noise signals a bug or badly under-resolved input.
  const double residue = density.max_imag();
  if (residue > 1e-6 * (1.0 + density.sup_norm()))
    throw NumericalError("chi: density acquired an imaginary part (" +
                         std::to_string(residue) + "); input under-resolved?");
  return TwoFormSamples{density.real_part(), TwoFormLabel::chi, residue};
}

double integral_chi(const MetricDensity& rho, const BeltramiField& mu) {
  const Field r_hol(rho.grid(), cplx(0.0, 0.0));
  return integrate(chi(rho, mu, r_hol).density).real();
}

namespace {

struct StencilFields {
  Field center;    // g(t)
  Field dt;        // d_t g at fixed node, 4-point central
  Field dtbar;     // d_tbar g
};

// Complex-parameter central differences of a field-valued map.
StencilFields param_derivative(const std::function<Field(cplx)>& eval, cplx t, double h) {
  const Field gp = eval(t + h), gm = eval(t - h);
  const Field gip = eval(t + cplx(0.0, h)), gim = eval(t - cplx(0.0, h));
  const Field center = eval(t);
  const cplx inv4h(1.0 / (4.0 * h), 0.0);
  const cplx i(0.0, 1.0);
  Field dt = (gp - gm - i * (gip - gim)) * inv4h;
  Field dtbar = (gp - gm + i * (gip - gim)) * inv4h;
  return StencilFields{center, std::move(dt), std::move(dtbar)};
}

// 5-point d_tbar d_t of a real scalar function: quarter of the stencil
// Laplacian in the parameter plane.
double mixed_derivative_5pt(const std::function<double(cplx)>& eval, cplx t, double h) {
  const double sum = eval(t + h) + eval(t - h) + eval(t + cplx(0.0, h)) + eval(t - cplx(0.0, h));
  return (sum - 4.0 * eval(t)) / (4.0 * h * h);
}

}  // namespace

C1Components c1_vertical(const DeformationFamily& family, cplx t, const MetricDensity& rho,
                         const SolveOptions& opts) {
  if (!family.grid().compatible(rho.grid())) throw GridMismatchError("c1_vertical: grids differ");
  const double h = family.step();

  auto dzbar_h = [&](cplx tp) {
    const BeltramiField mu = family.at(tp);
    const QcSolution sol = solve_beltrami(mu, opts);
    return d_Zbar(log_rho_ZZ(rho, sol), sol, mu);
  };
  auto dz_h = [&](cplx tp) {
    const BeltramiField mu = family.at(tp);
    const QcSolution sol = solve_beltrami(mu, opts);
    return d_Z(log_rho_ZZ(rho, sol), sol, mu);
  };

  const BeltramiField mu0 = family.at(t);
  const QcSolution sol0 = solve_beltrami(mu0, opts);
  const Field h0 = log_rho_ZZ(rho, sol0);

  C1Components out{
      d_Z(d_Zbar(h0, sol0, mu0), sol0, mu0),
      param_derivative(dzbar_h, t, h).dt,
      param_derivative(dz_h, t, h).dtbar,
  };
  return out;
}

namespace {

double pushforward_at_step(const DeformationFamily& family, cplx t, const MetricDensity& rho,
                           double h, const SolveOptions& opts) {
  auto dzbar_h = [&](cplx tp) {
    const BeltramiField mu = family.at(tp);
    const QcSolution sol = solve_beltrami(mu, opts);
    return d_Zbar(log_rho_ZZ(rho, sol), sol, mu);
  };
  const Field f = param_derivative(dzbar_h, t, h).dt;

  const BeltramiField mu0 = family.at(t);
  const QcSolution sol0 = solve_beltrami(mu0, opts);
  const Field measure = (sol0.lambda * sol0.lambda.conj()) * one_minus_mu_mubar(mu0);
  const double integral = integrate(measure * (f * f.conj())).real();
  return integral / (2.0 * kPi * kPi);
}

}  // namespace

double pushforward_c1_squared(const DeformationFamily& family, cplx t, const MetricDensity& rho,
                              double step, const SolveOptions& opts) {
  if (family.dimension() != 1)
    throw ConfigError("pushforward_c1_squared: one-dimensional families only");
  if (step <= 0.0) step = family.step();
  return pushforward_at_step(family, t, rho, step, opts);
}

ChiIdentityReport check_chi_identity(const DeformationFamily& family, cplx t,
                                     const MetricDensity& rho, bool richardson,
                                     const SolveOptions& opts) {
  const double h = family.step();

  auto int_chi = [&](cplx tp) { return integral_chi(rho, family.at(tp)); };

  const double lhs_h = pushforward_at_step(family, t, rho, h, opts);
  const double rhs_h = -mixed_derivative_5pt(int_chi, t, h) / (2.0 * kPi * kPi);

  ChiIdentityReport rep;
  rep.step = h;
  rep.lhs_coarse = lhs_h;
  rep.rhs_coarse = rhs_h;

  if (richardson) {
    const double lhs_h2 = pushforward_at_step(family, t, rho, 0.5 * h, opts);
    const double rhs_h2 = -mixed_derivative_5pt(int_chi, t, 0.5 * h) / (2.0 * kPi * kPi);
    rep.lhs = (4.0 * lhs_h2 - lhs_h) / 3.0;
    rep.rhs = (4.0 * rhs_h2 - rhs_h) / 3.0;
  } else {
    rep.lhs = lhs_h;
    rep.rhs = rhs_h;
  }

  rep.abs_gap = std::abs(rep.lhs - rep.rhs);
  const double scale = std::max(std::abs(rep.lhs), std::abs(rep.rhs));
  rep.rel_gap = scale > 0.0 ? rep.abs_gap / scale : 0.0;
  return rep;
}

FactorizationReport check_factorization(int j, const DeformationFamily& family, cplx t,
                                        const MetricDensity& rho, DetMethod method,
                                        const std::optional<Field>& weyl_sigma,
                                        const HeatKernelConfig& cfg, const SolveOptions& opts) {
  if (family.dimension() != 1)
    throw ConfigError("check_factorization: one-dimensional families only");
  const double h = family.step();
  // Orientation note: with the parameter 2-form basis fixed as in
  // check_chi_identity (fiber integral of |d_t d_Zbar h|^2 nonnegative and
  // equal to -d_tbar d_t Int chi), the mixed derivative of Gamma_Q is
  // -(C_j/12 pi) times that integral, so the harmonic combination carries
  // the counterterm with a minus sign.
  const double counter_coef = -static_cast<double>(c_j(j)) / (12.0 * kPi);

  const BeltramiField mu_zero(Field(family.grid(), cplx(0.0, 0.0)));

  FactorizationReport rep;
  rep.c_j = c_j(j);

  int n_j_base = -1;
  auto gamma_at = [&](const BeltramiField& mu, const MetricDensity& r) {
    const QuillenData q = quillen_gamma(j, mu, r, method, cfg, opts);
    if (q.flagged) {
      rep.flagged = true;
      rep.flag_reason = q.flag_reason;
    }
    if (n_j_base < 0)
      n_j_base = q.n_j;
    else if (q.n_j != n_j_base)
      throw NumericalError("check_factorization: kernel dimension drift along the family");
    return q.gamma;
  };

  const double gamma_ref = gamma_at(mu_zero, rho);
  auto F = [&](cplx tp) {
    const BeltramiField mu = family.at(tp);
    return gamma_at(mu, rho) - gamma_ref + counter_coef * integral_chi(rho, mu);
  };

  rep.mixed_derivative = mixed_derivative_5pt(F, t, h);
  rep.gamma_center = gamma_at(family.at(t), rho);
  rep.counterterm_center = counter_coef * integral_chi(rho, family.at(t));
  rep.F_center = rep.gamma_center - gamma_ref + rep.counterterm_center;

  if (weyl_sigma.has_value()) {
    // Weyl comparison always runs through the numerical backend: rho is
    // deformed by a non-constant conformal factor.
    const Field scaled =
        rho.rho() * weyl_sigma->map([](cplx s) { return std::exp(cplx(s.real(), 0.0)); });
    const MetricDensity rho_scaled{scaled};
    const BeltramiField mu_t = family.at(t);

    auto F_of_rho = [&](const MetricDensity& r) {
      const QuillenData qa = quillen_gamma(j, mu_t, r, DetMethod::numerical_heat_kernel, cfg, opts);
      const QuillenData q0 =
          quillen_gamma(j, mu_zero, r, DetMethod::numerical_heat_kernel, cfg, opts);
      return std::make_pair(qa.gamma - q0.gamma + counter_coef * integral_chi(r, mu_t),
                            std::abs(qa.gamma - q0.gamma));
    };

    WeylReport wr;
    const auto [f_rho, scale_rho] = F_of_rho(rho);
    const auto [f_scaled, scale_scaled] = F_of_rho(rho_scaled);
    wr.F_at_rho = f_rho;
    wr.F_at_scaled = f_scaled;
    wr.diff = std::abs(f_scaled - f_rho);
    wr.scale = std::max(scale_rho, scale_scaled);
    wr.flagged = rep.flagged;
    rep.weyl = wr;
  }

  return rep;
}

}  // namespace bel

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

#include "beltrami/determinants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace bel {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;
constexpr double kPi = std::numbers::pi;

// Upper incomplete gamma at s = 0: E1(x) = Gamma(0, x), x > 0.
double exp_int_e1(double x) {
  if (!(x > 0.0)) throw ConfigError("E1: argument must be positive");
  return -std::expint(-x);
}

double heat_trace(const std::vector<double>& lambdas, double t) {
  double s = 0.0;
  for (double l : lambdas) s += std::exp(-l * t);
  return s;
}

}  // namespace

SpectrumData make_spectrum(const WeightedOperator& laplacian, double area, double kernel_tol) {
  SpectrumData spec;
  spec.eigenvalues = eigenvalues(laplacian);
  spec.grid_n = laplacian.grid.n();
  spec.area = area;
  if (kernel_tol <= 0.0) kernel_tol = default_kernel_tol(spec.eigenvalues);
  spec.n_zero = 0;
  while (spec.n_zero < static_cast<int>(spec.eigenvalues.size()) &&
         spec.eigenvalues[spec.n_zero] <= kernel_tol)
    ++spec.n_zero;
  return spec;
}

ZetaResult zeta_log_det(const SpectrumData& spec, const HeatKernelConfig& cfg) {
  const std::vector<double> lam = spec.nonzero();
  if (lam.empty()) throw ConfigError("zeta_log_det: no nonzero eigenvalues");
  if (spec.area <= 0.0) throw ConfigError("zeta_log_det: area must be positive");

  const double lambda_max = lam.back();
  const double lambda_cut =
      spec.lambda_cut > 0.0 ? spec.lambda_cut : cfg.cut_fraction * lambda_max;

  // Smallest t with (A / 4 pi t) e^{-t lambda_cut} <= tail_eps: beyond it
  // the un-resolved part of the true spectrum is negligible in theta(t).
  const double A = spec.area;
  auto tail = [&](double t) { return A / (4.0 * kPi * t) * std::exp(-t * lambda_cut); };
  double lo = 1e-12, hi = 1.0;
  while (tail(hi) > cfg.tail_eps) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (tail(mid) > cfg.tail_eps ? lo : hi) = mid;
  }
  const double t0 = hi;

  // Fit theta(t) - A/(4 pi t) ~ c0 (+ c1 t) on [t0, window t0].
  const int npts = std::max(cfg.fit_points, 3);
  std::vector<double> ts(npts), gs(npts);
  for (int i = 0; i < npts; ++i) {
    ts[i] = t0 * (1.0 + (cfg.window - 1.0) * i / (npts - 1));
    gs[i] = heat_trace(lam, ts[i]) - A / (4.0 * kPi * ts[i]);
  }

  double c0 = 0.0, c1 = 0.0;
  if (cfg.fit_linear_term) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < npts; ++i) {
      sx += ts[i]; sy += gs[i]; sxx += ts[i] * ts[i]; sxy += ts[i] * gs[i];
    }
    const double det = npts * sxx - sx * sx;
    c1 = (npts * sxy - sx * sy) / det;
    c0 = (sy - c1 * sx) / npts;
  } else {
    for (double g : gs) c0 += g;
    c0 /= npts;
  }

  double rms = 0.0;
  for (int i = 0; i < npts; ++i) {
    const double r = gs[i] - (c0 + c1 * ts[i]);
    rms += r * r;
  }
  rms = std::sqrt(rms / npts);

  ZetaResult out;
  out.c0 = c0;
  out.c1 = c1;
  out.t0 = t0;
  out.fit_rms = rms;
  out.flagged = rms > cfg.instability_threshold * std::max(1.0, std::abs(c0));

  double e1_sum = 0.0;
  for (double l : lam) e1_sum += exp_int_e1(l * t0);

  out.log_det = A / (4.0 * kPi * t0) - c0 * std::log(t0) - c1 * t0 - e1_sum - kEulerGamma * c0;
  return out;
}

double resolvable_cutoff(const BeltramiField& mu, const MetricDensity& rho) {
  if (!mu.grid().compatible(rho.grid()))
    throw GridMismatchError("resolvable_cutoff: grids differ");
  const Grid& g = mu.grid();
  const cplx tau = g.tau();
  const double im = tau.imag();
  const int half = g.n() / 2;

  // symbol of Delta at frequency (p, q), minimized over the surface:
  //   4 |w_zbar - mu w_z|^2 / ((1 - mu mubar)^2 rho)
  auto symbol_min = [&](int p, int q) {
    const cplx wz = -kPi * (std::conj(tau) * static_cast<double>(p) - static_cast<double>(q)) / im;
    const cplx wzb = kPi * (tau * static_cast<double>(p) - static_cast<double>(q)) / im;
    double best = 1e300;
    for (int k = 0; k < g.size(); ++k) {
      const cplx m = mu.mu()[k];
      const double omm = 1.0 - std::norm(m);
      const double s = 4.0 * std::norm(wzb - m * wz) / (omm * omm * rho.rho()[k].real());
      best = std::min(best, s);
    }
    return best;
  };

  // first frequency shells outside the resolved window [-n/2, n/2)
  double cut = 1e300;
  for (int q = -half - 1; q <= half + 1; ++q) {
    cut = std::min(cut, symbol_min(half, q));
    cut = std::min(cut, symbol_min(-half - 1, q));
  }
  for (int p = -half - 1; p <= half + 1; ++p) {
    cut = std::min(cut, symbol_min(p, half));
    cut = std::min(cut, symbol_min(p, -half - 1));
  }
  return 0.9 * cut;
}

cplx reduce_modulus(cplx tau) {
  if (!(tau.imag() > 0.0)) throw ConfigError("reduce_modulus: Im(tau) must be positive");
  for (int it = 0; it < 256; ++it) {
    tau -= std::round(tau.real());
    if (std::abs(tau) >= 1.0 - 1e-15) return tau;
    tau = -1.0 / tau;
  }
  throw NumericalError("reduce_modulus: reduction did not terminate");
}

double log_abs_eta(cplx tau) {
  const cplx taur = reduce_modulus(tau);
  const double y = taur.imag();
  const cplx q = std::exp(cplx(0.0, 2.0 * kPi) * taur);
  double s = -kPi * y / 12.0;
  cplx qk(1.0, 0.0);
  for (int k = 1; k <= 64; ++k) {
    qk *= q;
    if (std::abs(qk) < 1e-19) break;
    s += std::log(std::abs(cplx(1.0, 0.0) - qk));
  }
  return s;
}

double torus_exact_log_det(TorusModulus tau, double area) {
  if (!(area > 0.0)) throw ConfigError("torus_exact_log_det: area must be positive");
  const cplx taur = reduce_modulus(tau.tau);
  return std::log(area) + std::log(taur.imag()) + 4.0 * log_abs_eta(taur);
}

double torus_exact_log_det_epstein(TorusModulus tau, double area) {
  if (!(area > 0.0)) throw ConfigError("torus_exact_log_det_epstein: area must be positive");
  const cplx t = reduce_modulus(tau.tau);
  const double y = t.imag();

  // Q(m, n) = |m + n tau|^2 / Im(tau), det Q = 1.
  auto Q = [&](double m, double n) {
    const cplx v = m + n * t;
    return std::norm(v) / y;
  };

  // Smallest eigenvalue of the form fixes the truncation radius.
  const double tr = (1.0 + std::norm(t)) / y;
  const double qmin = 0.5 * (tr - std::sqrt(tr * tr - 4.0));
  const int M = std::min(64, static_cast<int>(std::ceil(std::sqrt(45.0 / (kPi * qmin)))) + 2);

  // R(0) of the symmetric integral representation of pi^{-s} Gamma(s) E(s):
  // sum over the lattice of E1(pi Q) + e^{-pi Q} / (pi Q).
  double r0 = 0.0;
  for (int m = -M; m <= M; ++m)
    for (int n = -M; n <= M; ++n) {
      if (m == 0 && n == 0) continue;
      const double piq = kPi * Q(m, n);
      if (piq > 745.0) continue;  // exp underflow; contribution ~ 0
      r0 += exp_int_e1(piq) + std::exp(-piq) / piq;
    }

  // E(0) = -1 and E'(0) = R(0) - 1 - euler_gamma - ln(pi); then
  // zeta(s) = (A / 4 pi^2)^s E(s) gives ln det' = ln(A/4pi^2) - E'(0).
  const double e_prime = r0 - 1.0 - kEulerGamma - std::log(kPi);
  return std::log(area / (4.0 * kPi * kPi)) - e_prime;
}

namespace {

Field lambda_power(const Field& lambda, int p) {
  return lambda.map([p](cplx v) { return std::pow(v, p); });
}

}  // namespace

QuillenData quillen_gamma(int j, const BeltramiField& mu, const MetricDensity& rho,
                          DetMethod method, const HeatKernelConfig& cfg,
                          const SolveOptions& solve_opts) {
  if (!mu.grid().compatible(rho.grid())) throw GridMismatchError("quillen_gamma: grids differ");

  const double area = integrate(volume_density(rho, mu)).real();

  QuillenData out;
  out.method = method;

  // Gram determinants of the fixed kernel sections gamma = lambda^j,
  // beta = lambda^{1-j} (both one-dimensional on the torus).
  const QcSolution sol = solve_beltrami(mu, solve_opts);
  const double gram_j =
      norm_jj(lambda_power(sol.lambda, j), {static_cast<double>(j), 0.0}, rho, mu);
  const double gram_1mj =
      norm_jj(lambda_power(sol.lambda, 1 - j), {static_cast<double>(1 - j), 0.0}, rho, mu);
  if (!(gram_j > 0.0) || !(gram_1mj > 0.0))
    throw NumericalError("quillen_gamma: degenerate kernel Gram determinant");
  out.log_l2_norm = -(std::log(gram_j) + std::log(gram_1mj));

  if (method == DetMethod::torus_exact_oracle) {
    if (!mu.is_constant() || !rho.is_constant())
      throw ConfigError("quillen_gamma: oracle method needs constant mu and constant rho");
    const TorusModulus tau_prime =
        modulus_of_constant(mu.constant_value(), TorusModulus(mu.grid().tau()));
    out.log_det_zeta = torus_exact_log_det(tau_prime, area);
    out.n_j = 1;
    out.c0 = -1.0;
  } else {
    const WeightedOperator delta = build_laplacian(j, mu, rho);
    SpectrumData spec = make_spectrum(delta, area);
    spec.lambda_cut = resolvable_cutoff(mu, rho);
    HeatKernelConfig local = cfg;
    // curved metric (either factor): the t^1 heat coefficient is nonzero
    if (!rho.is_constant() || !mu.is_constant()) local.fit_linear_term = true;
    const ZetaResult zeta = zeta_log_det(spec, local);
    out.log_det_zeta = zeta.log_det;
    out.n_j = spec.n_zero;
    out.c0 = zeta.c0;
    out.t0 = zeta.t0;
    if (zeta.flagged) {
      out.flagged = true;
      out.flag_reason = "heat-trace fit window unstable";
    }
  }

  out.gamma = 0.5 * (out.log_det_zeta + out.log_l2_norm);
  return out;
}

}  // namespace bel

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

// Test-only oracles, independent of the spectral implementation paths
// they are used to check:
//   * 4th-order periodic finite-difference d_z / d_zbar,
//   * mode-list fields with closed-form derivatives and action sums,
//   * a finite-difference evaluation of the chi density.

#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "beltrami/geometry.hpp"
#include "beltrami/grid.hpp"

namespace oracle {

using bel::cplx;
using bel::Field;
using bel::Grid;

inline constexpr double kPi = std::numbers::pi;

// 4th-order central difference along the x-axis of the node lattice.
inline Field fd_dx(const Field& f) {
  const Grid& g = f.grid();
  const int n = g.n();
  const double h = 1.0 / n;
  std::vector<cplx> out(static_cast<size_t>(g.size()));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const cplx fp1 = f.at((a + 1) % n, b), fm1 = f.at((a - 1 + n) % n, b);
      const cplx fp2 = f.at((a + 2) % n, b), fm2 = f.at((a - 2 + n) % n, b);
      out[g.index(a, b)] = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
    }
  return Field(g, std::move(out));
}

inline Field fd_dy(const Field& f) {
  const Grid& g = f.grid();
  const int n = g.n();
  const double h = 1.0 / n;
  std::vector<cplx> out(static_cast<size_t>(g.size()));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const cplx fp1 = f.at(a, (b + 1) % n), fm1 = f.at(a, (b - 1 + n) % n);
      const cplx fp2 = f.at(a, (b + 2) % n), fm2 = f.at(a, (b - 2 + n) % n);
      out[g.index(a, b)] = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
    }
  return Field(g, std::move(out));
}

// d_z = (conj(tau) dx - dy) / (conj(tau) - tau), d_zbar its mirror.
inline Field fd_d_z(const Field& f) {
  const cplx tau = f.grid().tau();
  const cplx den = std::conj(tau) - tau;
  return (std::conj(tau) / den) * fd_dx(f) + (-1.0 / den) * fd_dy(f);
}

inline Field fd_d_zbar(const Field& f) {
  const cplx tau = f.grid().tau();
  const cplx den = tau - std::conj(tau);
  return (tau / den) * fd_dx(f) + (-1.0 / den) * fd_dy(f);
}

// Trigonometric polynomial kept as an explicit mode list.
struct ModeField {
  struct Mode {
    int p = 0, q = 0;
    cplx c;
  };
  std::vector<Mode> modes;

  Field realize(const Grid& g) const {
    Field f(g, cplx(0.0, 0.0));
    for (const Mode& m : modes)
      f += m.c * Field::sample(g, [&](double x, double y, cplx) {
             return std::exp(cplx(0.0, 2.0 * kPi * (m.p * x + m.q * y)));
           });
    return f;
  }
};

// Random real trig polynomial of degree <= max_deg with decaying spectrum.
inline ModeField random_real_modes(std::mt19937& rng, int max_deg, double amplitude = 1.0) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ModeField mf;
  for (int p = -max_deg; p <= max_deg; ++p)
    for (int q = -max_deg; q <= max_deg; ++q) {
      if (p < 0 || (p == 0 && q < 0)) continue;  // one of each conjugate pair
      if (p == 0 && q == 0) continue;            // keep zero mean
      const double decay = std::exp(-0.25 * (p * p + q * q));
      const cplx c = amplitude * decay * cplx(gauss(rng), gauss(rng));
      mf.modes.push_back({p, q, c});
      mf.modes.push_back({-p, -q, std::conj(c)});
    }
  return mf;
}

// Closed-form -1/2 Int X dz dzbar X for a real mode list (flat metric).
inline double mode_action_mu0(const ModeField& X, const Grid& g) {
  const cplx tau = g.tau();
  const double im = tau.imag();
  double s = 0.0;
  for (const auto& m : X.modes) {
    const cplx wz = -kPi * (std::conj(tau) * static_cast<double>(m.p) - static_cast<double>(m.q)) / im;
    const cplx wzb = kPi * (tau * static_cast<double>(m.p) - static_cast<double>(m.q)) / im;
    s += -0.5 * (std::norm(m.c) * (wz * wzb).real());
  }
  return s * g.area();
}

// chi density evaluated with finite-difference derivatives throughout.
inline double fd_integral_chi(const bel::MetricDensity& rho, const bel::BeltramiField& mu) {
  const Field& m = mu.mu();
  const Field mbar = m.conj();
  const Field ln_rho = bel::log_real(rho.rho());
  const Field Gamma = fd_d_z(ln_rho);
  const Field Gamma_bar = fd_d_zbar(ln_rho);
  const Field R = fd_d_z(Gamma) - cplx(0.5, 0.0) * (Gamma * Gamma);

  const Field P = fd_d_z(m) + Gamma * m;
  const Field Pb = fd_d_zbar(mbar) + Gamma_bar * mbar;
  const Field one_minus = (m * mbar).map([](cplx v) { return cplx(1.0, 0.0) - v; });

  const Field first = cplx(-1.0, 0.0) * (m * R);
  const Field bracket =
      P * Pb - cplx(0.5, 0.0) * (mbar * (P * P)) - cplx(0.5, 0.0) * (m * (Pb * Pb));
  const Field density = first + first.conj() - bracket / one_minus;
  return bel::integrate(density).real();
}

}  // namespace oracle

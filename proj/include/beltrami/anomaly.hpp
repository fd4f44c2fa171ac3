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

// Local anomaly functional chi, Chern-form components of the vertical
// line bundle over a holomorphic deformation family, fiber integration,
// and the curvature/factorization checks.
//
// With Gamma = dz ln(rho), R = dz(Gamma) - Gamma^2/2, P = (dz + Gamma) mu,
// Pb = (dzbar + conj(Gamma)) conj(mu):
//
//   chi = mu (R_hol - R) + c.c.
//         - (1 - mu conj(mu))^{-1} [ P Pb - 1/2 conj(mu) P^2 - 1/2 mu Pb^2 ]
//
// a real (1,1) density, zero at mu = 0 and for constant mu at flat rho.
//
// Base-space derivatives are central finite differences along explicit
// one-parameter holomorphic families mu_t.  The curvature identity checked
// here equates, for h = ln rho_{ZZbar},
//
//   Int_fiber |d_t d_Zbar h|^2  (measure (dZbar ^ dZ)/2i)
//     =  - d_tbar d_t Int_Sigma chi,
//
// both sides reduced to real dtbar dt coefficients; the orientation of the
// parameter 2-form basis is fixed once so that the left side (a squared
// modulus) is nonnegative.  In the same convention the mixed derivative of
// the Quillen functional is -(C_j / 12 pi) times the fiber integral above,
// so the harmonic, Weyl-independent combination reads
//
//   F(t) = Gamma_Q(rho, mu_t) - Gamma_Q(rho, 0) - (C_j / 12 pi) Int chi,
//
// with C_j = 6 j (j - 1) + 1.

#include <optional>
#include <string>
#include <vector>

#include "beltrami/beltrami_eq.hpp"
#include "beltrami/determinants.hpp"
#include "beltrami/geometry.hpp"

namespace bel {

// One- or two-parameter holomorphic family mu_t = base + sum t_k nu_k.
struct DeformationFamily {
  Field base;
  std::vector<Field> directions;
  std::vector<double> steps;   // finite-difference step per direction
  double max_sup_norm = 0.7;   // enforced over every stencil evaluation

  DeformationFamily(Field base_, Field direction, double step_ = 1e-2);
  DeformationFamily(Field base_, std::vector<Field> directions_, std::vector<double> steps_);

  int dimension() const { return static_cast<int>(directions.size()); }
  const Grid& grid() const { return base.grid(); }
  double step() const { return steps[0]; }

  // mu at parameter t (one-dimensional families).
  BeltramiField at(cplx t) const;
  // general evaluation, one parameter per direction
  BeltramiField at(const std::vector<cplx>& t) const;
};

enum class TwoFormLabel { chi, c1_squared_pushforward_integrand };

struct TwoFormSamples {
  Field density;  // coefficient of (dzbar ^ dz)/2i, stored real for chi
  TwoFormLabel label = TwoFormLabel::chi;
  // sup of the imaginary part dropped when storing the density; at the
  // level of machine noise (<= 1e-12 * scale) for grid-resolved inputs.
  double imag_residue = 0.0;
};

// The local anomaly density.  R_hol must be anti-holomorphically closed;
// pass connection_data(rho).R_hol (identically zero on the torus) unless
// probing another projective connection.
TwoFormSamples chi(const MetricDensity& rho, const BeltramiField& mu, const Field& R_hol);

// Int_Sigma chi with R_hol = 0.
double integral_chi(const MetricDensity& rho, const BeltramiField& mu);

// Coefficient fields of (-2 i pi) c1 of the vertical holomorphic tangent
// bundle at family parameter t, in the frame {dZ (fiber), dt}:
// fiber-fiber dZbar dZ, mixed dZbar dt, mixed dtbar dZ.
struct C1Components {
  Field fiber_fiber;
  Field mixed_dt;     // d_t d_Zbar ln rho_{ZZbar} at fixed (z, zbar)
  Field mixed_dtbar;
};

C1Components c1_vertical(const DeformationFamily& family, cplx t, const MetricDensity& rho,
                         const SolveOptions& opts = {});

// dtbar dt coefficient of the fiber integral of c1^2:
//   (1 / 2 pi^2) Int |d_t d_Zbar ln rho_{ZZbar}|^2 in the (Z, Zbar) measure.
// Real and nonnegative.
double pushforward_c1_squared(const DeformationFamily& family, cplx t, const MetricDensity& rho,
                              double step = -1.0, const SolveOptions& opts = {});

struct ChiIdentityReport {
  double lhs = 0.0;  // pushforward of c1^2 (Richardson-extrapolated)
  double rhs = 0.0;  // -(1/2 pi^2) d_tbar d_t Int chi
  double abs_gap = 0.0;
  double rel_gap = 0.0;
  double lhs_coarse = 0.0;  // values at the un-halved step
  double rhs_coarse = 0.0;
  double step = 0.0;
};

// Central-difference check of the curvature identity along a family.
ChiIdentityReport check_chi_identity(const DeformationFamily& family, cplx t,
                                     const MetricDensity& rho, bool richardson = true,
                                     const SolveOptions& opts = {});

struct WeylReport {
  double F_at_rho = 0.0;
  double F_at_scaled = 0.0;
  double diff = 0.0;
  double scale = 0.0;  // |Gamma_Q(rho, mu) - Gamma_Q(rho, 0)| reference size
  bool flagged = false;
};

struct FactorizationReport {
  double mixed_derivative = 0.0;  // 5-point d_tbar d_t of F at t
  double F_center = 0.0;
  double gamma_center = 0.0;
  double counterterm_center = 0.0;  // (C_j / 12 pi) Int chi at t
  int c_j = 0;
  bool flagged = false;
  std::string flag_reason;
  std::optional<WeylReport> weyl;
};

// Mixed base derivative of F(t) = Gamma_Q(mu_t) - Gamma_Q(0) + counterterm.
// With method = torus_exact_oracle the family must be constant in z.  When
// a Weyl bump sigma is supplied, also reports F at rho and at e^sigma rho
// (numerical backend), both evaluated at the family point t.
FactorizationReport check_factorization(int j, const DeformationFamily& family, cplx t,
                                        const MetricDensity& rho, DetMethod method,
                                        const std::optional<Field>& weyl_sigma = std::nullopt,
                                        const HeatKernelConfig& cfg = {},
                                        const SolveOptions& opts = {});

// C_j = 6 j (j - 1) + 1.
constexpr int c_j(int j) { return 6 * j * (j - 1) + 1; }

}  // namespace bel

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numbers>

#include "beltrami/determinants.hpp"

using namespace bel;
constexpr double kPi = std::numbers::pi;

namespace {

// Truncated flat-torus Laplace-Beltrami spectrum at tau = i, area 1:
// 4 pi^2 (p^2 + q^2) over the window |p|, |q| <= P.  No grid involved.
SpectrumData analytic_flat_spectrum(int P, double scale = 1.0, double area = 1.0) {
  SpectrumData spec;
  for (int p = -P; p <= P; ++p)
    for (int q = -P; q <= P; ++q)
      spec.eigenvalues.push_back(scale * 4.0 * kPi * kPi * (p * p + q * q));
  std::sort(spec.eigenvalues.begin(), spec.eigenvalues.end());
  spec.n_zero = 1;
  spec.grid_n = 0;
  spec.area = area;
  return spec;
}

Field mode_field(const Grid& g, double amp, int p, int q) {
  return Field::sample(g, [&](double x, double y, cplx) {
    return amp * std::exp(cplx(0.0, 2.0 * kPi * (p * x + q * y)));
  });
}

}  // namespace

TEST_CASE("eta and Epstein oracles agree") {
  for (const cplx tau : {cplx(0.0, 1.0), cplx(0.0, 2.0 / 3.0), cplx(0.3, 1.1),
                         cplx(5.0, 0.37), cplx(-0.45, 0.21)}) {
    const double eta = torus_exact_log_det(TorusModulus(tau), 1.3);
    const double eps = torus_exact_log_det_epstein(TorusModulus(tau), 1.3);
    CHECK(std::abs(eta - eps) < 1e-8);
  }
}

TEST_CASE("oracle is modular invariant at fixed area") {
  const cplx tau(0.37, 0.82);
  const double v = torus_exact_log_det(TorusModulus(tau), 1.0);
  CHECK(torus_exact_log_det(TorusModulus(tau + 1.0), 1.0) == doctest::Approx(v).epsilon(1e-12));
  CHECK(torus_exact_log_det(TorusModulus(-1.0 / tau), 1.0) == doctest::Approx(v).epsilon(1e-12));
}

TEST_CASE("oracle asymptotics for a long thin torus") {
  // ln det' = ln(Im tau) - pi Im(tau)/3 + O(e^{-2 pi Im tau}) at area 1
  const double Y = 30.0;
  const double v = torus_exact_log_det(TorusModulus(cplx(0.0, Y)), 1.0);
  CHECK(std::abs(v - (std::log(Y) - kPi * Y / 3.0)) < 1e-10);
}

TEST_CASE("zeta assembly on the analytic spectrum list") {
  // Regularization error isolated from discretization error.
  const SpectrumData spec = analytic_flat_spectrum(48);
  const ZetaResult z = zeta_log_det(spec);
  CHECK_FALSE(z.flagged);
  CHECK(z.c0 == doctest::Approx(-1.0).epsilon(1e-6));
  const double exact = torus_exact_log_det(TorusModulus(cplx(0.0, 1.0)), 1.0);
  CHECK(std::abs(z.log_det - exact) < 1e-4);
}

TEST_CASE("scaling the spectrum shifts ln det' by c0 ln k") {
  const double k = 2.7;
  const ZetaResult base = zeta_log_det(analytic_flat_spectrum(40));
  // lambda -> k lambda is the metric scaled by 1/k: area 1/k
  const ZetaResult scaled = zeta_log_det(analytic_flat_spectrum(40, k, 1.0 / k));
  const double shift = scaled.log_det - base.log_det;
  CHECK(shift == doctest::Approx(base.c0 * std::log(k)).epsilon(1e-5));
}

TEST_CASE("degenerate spectra are rejected, unstable fits are flagged") {
  SpectrumData empty;
  empty.eigenvalues = {0.0};
  empty.n_zero = 1;
  empty.area = 1.0;
  CHECK_THROWS_AS(zeta_log_det(empty), ConfigError);

  // four eigenvalues cannot follow the surface asymptotics: flagged
  SpectrumData junk;
  junk.eigenvalues = {0.0, 1.0, 2.0, 3.0};
  junk.n_zero = 1;
  junk.area = 1.0;
  junk.grid_n = 0;
  const ZetaResult z = zeta_log_det(junk);
  CHECK(z.flagged);
}

TEST_CASE("quillen data at the reference point") {
  const Grid g(TorusModulus(cplx(0.0, 1.0)), 16);
  const MetricDensity flat = MetricDensity::flat(g);
  const BeltramiField mu0(Field(g, cplx(0.0, 0.0)));

  const QuillenData q = quillen_gamma(0, mu0, flat, DetMethod::torus_exact_oracle);
  // both Gram blocks are the area = 1
  CHECK(q.log_l2_norm == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(q.gamma == 0.5 * (q.log_det_zeta + q.log_l2_norm));  // exact as stored

  // reference subtraction of the functional from itself
  const QuillenData q2 = quillen_gamma(0, mu0, flat, DetMethod::torus_exact_oracle);
  CHECK(q.gamma - q2.gamma == 0.0);
}

TEST_CASE("constant-mu Gram blocks carry the (1 - mu mubar) factor") {
  const Grid g(TorusModulus(cplx(0.0, 1.0)), 16);
  const MetricDensity flat = MetricDensity::flat(g);
  const BeltramiField mu(Field(g, cplx(0.2, 0.0)));

  for (int j : {0, 1, 2}) {
    const QuillenData q = quillen_gamma(j, mu, flat, DetMethod::torus_exact_oracle);
    // lambda = 1, so every Gram block is 0.96 * area
    CHECK(q.log_l2_norm == doctest::Approx(-2.0 * std::log(0.96)).epsilon(1e-10));
  }
}

TEST_CASE("numerical backend tracks the oracle on flat cases") {
  const Grid g(TorusModulus(cplx(0.0, 1.0)), 16);
  const MetricDensity flat = MetricDensity::flat(g);
  const BeltramiField mu0(Field(g, cplx(0.0, 0.0)));

  const QuillenData num = quillen_gamma(0, mu0, flat, DetMethod::numerical_heat_kernel);
  const QuillenData orc = quillen_gamma(0, mu0, flat, DetMethod::torus_exact_oracle);
  CHECK(num.n_j == 1);
  CHECK_FALSE(num.flagged);
  CHECK(std::abs(num.log_det_zeta - orc.log_det_zeta) <
        0.01 * std::abs(orc.log_det_zeta));
}

TEST_CASE("oracle method rejects non-constant data") {
  const Grid g(TorusModulus(cplx(0.0, 1.0)), 16);
  const MetricDensity flat = MetricDensity::flat(g);
  const BeltramiField mum(mode_field(g, 0.2, 1, 0));
  CHECK_THROWS_AS(quillen_gamma(0, mum, flat, DetMethod::torus_exact_oracle), ConfigError);
}

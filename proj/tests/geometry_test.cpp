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
#include <random>

#include "beltrami/geometry.hpp"
#include "oracles.hpp"

using namespace bel;
constexpr double kPi = std::numbers::pi;

namespace {

Field mode_field(const Grid& g, double amp, int p, int q) {
  return Field::sample(g, [&](double x, double y, cplx) {
    return amp * std::exp(cplx(0.0, 2.0 * kPi * (p * x + q * y)));
  });
}

// Finite-difference functional derivative of the action with respect to
// mu at a node: complex central differences of node-wise bumps.
cplx fd_action_dmu(const Field& X, int node, double h) {
  const Grid& g = X.grid();
  auto bump_action = [&](cplx amp) {
    std::vector<cplx> v(static_cast<size_t>(g.size()), cplx(0.0, 0.0));
    v[static_cast<size_t>(node)] = amp;
    return action_z(X, BeltramiField(Field(g, std::move(v))));
  };
  const double sp = bump_action(cplx(h, 0.0)), sm = bump_action(cplx(-h, 0.0));
  const double sip = bump_action(cplx(0.0, h)), sim = bump_action(cplx(0.0, -h));
  const cplx i(0.0, 1.0);
  return ((sp - sm) - i * (sip - sim)) / (4.0 * h * g.quad_weight());
}

}  // namespace

TEST_CASE("volume density") {
  const Grid g(TorusModulus(cplx(0.0, 1.0)), 8);
  const MetricDensity flat = MetricDensity::flat(g);

  CHECK((volume_density(flat, BeltramiField(Field(g, cplx(0.0, 0.0)))) +
         cplx(-1.0, 0.0)).sup_norm() < 1e-14);
  CHECK((volume_density(flat, BeltramiField(Field(g, cplx(0.2, 0.0)))) +
         cplx(-0.96, 0.0)).sup_norm() < 1e-14);
  CHECK((volume_density(MetricDensity(Field(g, cplx(2.0, 0.0))),
                        BeltramiField(Field(g, cplx(0.0, 0.5)))) +
         cplx(-1.5, 0.0)).sup_norm() < 1e-14);

  // Weyl covariance: e^sigma scales through
  const Field sigma = mode_field(g, 0.2, 1, 1) + mode_field(g, 0.2, -1, -1);
  const MetricDensity rho(sigma.map([](cplx s) { return std::exp(s); }));
  const BeltramiField mu(Field(g, cplx(0.3, 0.1)));
  const Field lhs = volume_density(rho, mu);
  const Field rhs = rho.rho() * volume_density(MetricDensity::flat(g), mu);
  CHECK((lhs - rhs).sup_norm() < 1e-13);
}

TEST_CASE("transformed metric rho_ZZ") {
  const Grid g(TorusModulus(cplx(0.0, 1.0)), 32);
  const MetricDensity flat = MetricDensity::flat(g);

  const BeltramiField mu0(Field(g, cplx(0.0, 0.0)));
  CHECK((rho_ZZ(flat, solve_beltrami(mu0)) + cplx(-1.0, 0.0)).sup_norm() < 1e-13);

  const BeltramiField muc(Field(g, cplx(0.2, 0.0)));
  CHECK((rho_ZZ(flat, solve_beltrami(muc)) + cplx(-1.0, 0.0)).sup_norm() < 1e-11);

  // oracle: 1/|1 + dz(w)|^2 recomputed from the solver output
  const BeltramiField mum(mode_field(g, 0.3, 1, 0));
  const QcSolution sol = solve_beltrami(mum);
  const Field lam = d_z(sol.w) + cplx(1.0, 0.0);
  const Field expect = Field(g, cplx(1.0, 0.0)) / (lam * lam.conj());
  CHECK((rho_ZZ(flat, sol) - expect).sup_norm() < 1e-10);
}

TEST_CASE("weighted norms of (j, jbar) differentials") {
  const Grid g(TorusModulus(cplx(0.0, 1.0)), 16);
  const MetricDensity flat = MetricDensity::flat(g);
  const Field one(g, cplx(1.0, 0.0));

  CHECK(norm_jj(one, {0, 0}, flat, BeltramiField(Field(g, cplx(0.0, 0.0)))) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(norm_jj(one, {1, 0}, flat, BeltramiField(Field(g, cplx(0.2, 0.0)))) ==
        doctest::Approx(0.96).epsilon(1e-14));
  CHECK(norm_jj(Field(g, cplx(0.0, 0.0)), {1, 1}, flat,
                BeltramiField(Field(g, cplx(0.1, 0.0)))) == doctest::Approx(0.0));

  // positivity and conjugation symmetry for real rho
  std::mt19937 rng(3);
  const Field alpha =
      oracle::random_real_modes(rng, 3).realize(g) + mode_field(g, 0.5, 2, -1);
  const Field sigma = mode_field(g, 0.15, 1, 0) + mode_field(g, 0.15, -1, 0);
  const MetricDensity rho(sigma.map([](cplx s) { return std::exp(s); }));
  const BeltramiField mu(mode_field(g, 0.2, 0, 1));
  const double n_a = norm_jj(alpha, {2, 1}, rho, mu);
  CHECK(n_a > 0.0);
  CHECK(norm_jj(alpha.conj(), {1, 2}, rho, mu) == doctest::Approx(n_a).epsilon(1e-12));
}

TEST_CASE("action vanishes on constants and matches the mode sum at mu = 0") {
  const Grid g(TorusModulus(cplx(0.0, 1.0)), 32);
  const BeltramiField mu0(Field(g, cplx(0.0, 0.0)));
  CHECK(action_z(Field(g, cplx(2.5, 0.0)), mu0) == doctest::Approx(0.0).epsilon(1e-15));

  // X = cos(2 pi x): the closed-form value is pi^2/4
  const Field X = Field::sample(g, [](double x, double, cplx) {
    return cplx(std::cos(2.0 * kPi * x), 0.0);
  });
  CHECK(action_z(X, mu0) == doctest::Approx(kPi * kPi / 4.0).epsilon(1e-12));

  // random band-limited X against the independent mode-sum oracle
  std::mt19937 rng(17);
  for (int rep = 0; rep < 3; ++rep) {
    const auto mf = oracle::random_real_modes(rng, 5);
    const double oracle_val = oracle::mode_action_mu0(mf, g);
    CHECK(action_z(mf.realize(g), mu0) == doctest::Approx(oracle_val).epsilon(1e-10));
  }
}

TEST_CASE("coordinate invariance of the action") {
  const Grid g(TorusModulus(cplx(0.0, 1.0)), 64);
  std::mt19937 rng(29);

  // mu = 0: both routes are the same functional evaluated two ways
  const BeltramiField mu0(Field(g, cplx(0.0, 0.0)));
  const QcSolution sol0 = solve_beltrami(mu0);
  const Field X0 = oracle::random_real_modes(rng, 4).realize(g);
  CHECK(std::abs(action_z(X0, mu0) - action_Z(X0, sol0, mu0)) <=
        1e-12 * std::abs(action_z(X0, mu0)));

  const BeltramiField mu(mode_field(g, 0.3, 0, 1));
  const QcSolution sol = solve_beltrami(mu);
  for (int rep = 0; rep < 5; ++rep) {
    const Field X = oracle::random_real_modes(rng, 4).realize(g);
    const double az = action_z(X, mu);
    const double aZ = action_Z(X, sol, mu);
    CHECK(std::abs(az - aZ) <= 1e-6 * std::abs(az));
  }
}

TEST_CASE("stress tensor") {
  const Grid g(TorusModulus(cplx(0.0, 1.0)), 32);
  CHECK(stress_tensor(Field(g, cplx(1.0, 0.0))).sup_norm() < 1e-14);

  // X = cos(2 pi x): Theta = -pi^2/2 sin^2(2 pi x)
  const Field X = Field::sample(g, [](double x, double, cplx) {
    return cplx(std::cos(2.0 * kPi * x), 0.0);
  });
  const Field theta = stress_tensor(X);
  const Field expect = Field::sample(g, [](double x, double, cplx) {
    const double s = std::sin(2.0 * kPi * x);
    return cplx(-0.5 * kPi * kPi * s * s, 0.0);
  });
  CHECK((theta - expect).sup_norm() < 1e-10);

  CHECK_THROWS_AS(stress_tensor(Field(g, cplx(0.0, 1.0))), ConfigError);
}

TEST_CASE("stress tensor is the functional derivative of the action") {
  const Grid g(TorusModulus(cplx(0.0, 1.0)), 32);
  std::mt19937 rng(41);
  const Field X = oracle::random_real_modes(rng, 4).realize(g);
  const Field theta = stress_tensor(X);

  std::uniform_int_distribution<int> pick(0, g.size() - 1);
  for (int probe = 0; probe < 6; ++probe) {
    const int node = pick(rng);
    const cplx fd = fd_action_dmu(X, node, 1e-5);
    CHECK(std::abs(fd - theta[node]) <= 1e-4 * (std::abs(theta[node]) + 1.0));
  }
}

TEST_CASE("connection data on the torus") {
  const Grid g(TorusModulus(cplx(0.0, 1.0)), 32);
  const Field sigma = mode_field(g, 0.1, 1, 0) + mode_field(g, 0.1, -1, 0) +
                      mode_field(g, 0.05, 0, 2) + mode_field(g, 0.05, 0, -2);
  const MetricDensity rho(sigma.map([](cplx s) { return std::exp(s); }));
  const ConnectionData conn = connection_data(rho);

  CHECK((conn.Gamma_bar - conn.Gamma.conj()).sup_norm() < 1e-11);
  CHECK(conn.R_hol.sup_norm() == 0.0);
  CHECK(d_zbar(conn.R_hol).sup_norm() == 0.0);

  // R = dz Gamma - Gamma^2/2 re-evaluated
  const Field R2 = d_z(conn.Gamma) - cplx(0.5, 0.0) * (conn.Gamma * conn.Gamma);
  CHECK((conn.R_scalar - R2).sup_norm() < 1e-12);
}

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

#include "beltrami/scenario.hpp"

#include <Eigen/Core>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "beltrami/anomaly.hpp"
#include "beltrami/beltrami_eq.hpp"
#include "beltrami/determinants.hpp"
#include "beltrami/geometry.hpp"
#include "beltrami/operators.hpp"
#include "beltrami/version.hpp"
#include "json.hpp"

namespace bel {

namespace {

using json = nlohmann::ordered_json;

cplx get_complex(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError(std::string("config: ") + what + " must be a [re, im] pair");
  return cplx(j[0].get<double>(), j[1].get<double>());
}

json put_complex(cplx v) { return json::array({v.real(), v.imag()}); }

struct ScenarioConfig {
  std::string subcommand;
  cplx tau{0.0, 1.0};
  int n = 24;
  int j = 0;
  json mu_spec;   // {"kind":"const","value":[re,im]} or {"kind":"modes","modes":[...]}
  json rho_spec;  // {"kind":"flat"} or {"kind":"bump","amp":..,"width":..}
  std::string method = "numerical";
  cplx t{0.1, 0.0};
  double step = 1e-2;
  double tol = 1e-10;
  int threads = 0;
  std::string format = "json";

  json echo() const {
    json c;
    c["subcommand"] = subcommand;
    c["tau"] = put_complex(tau);
    c["n"] = n;
    c["j"] = j;
    c["mu"] = mu_spec;
    c["rho"] = rho_spec;
    c["method"] = method;
    c["t"] = put_complex(t);
    c["step"] = step;
    c["tol"] = tol;
    c["threads"] = threads;
    c["format"] = format;
    return c;
  }
};

ScenarioConfig parse_config(const std::string& text) {
  json in;
  try {
    in = json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!in.is_object()) throw ConfigError("config: expected a JSON object");

  ScenarioConfig cfg;
  if (!in.contains("subcommand") || !in["subcommand"].is_string())
    throw ConfigError("config: missing subcommand");
  cfg.subcommand = in["subcommand"].get<std::string>();

  if (in.contains("tau")) cfg.tau = get_complex(in["tau"], "tau");
  if (in.contains("n")) cfg.n = in["n"].get<int>();
  if (in.contains("j")) cfg.j = in["j"].get<int>();
  cfg.mu_spec = in.contains("mu") ? in["mu"] : json{{"kind", "const"}, {"value", {0.0, 0.0}}};
  cfg.rho_spec = in.contains("rho") ? in["rho"] : json{{"kind", "flat"}};
  if (in.contains("method")) cfg.method = in["method"].get<std::string>();
  if (in.contains("t")) cfg.t = get_complex(in["t"], "t");
  if (in.contains("step")) cfg.step = in["step"].get<double>();
  if (in.contains("tol")) cfg.tol = in["tol"].get<double>();
  if (in.contains("threads")) cfg.threads = in["threads"].get<int>();
  if (in.contains("format")) cfg.format = in["format"].get<std::string>();

  if (cfg.method != "numerical" && cfg.method != "oracle")
    throw ConfigError("config: method must be 'numerical' or 'oracle'");
  if (cfg.format != "json" && cfg.format != "csv")
    throw ConfigError("config: format must be 'json' or 'csv'");
  if (!(cfg.step > 0.0)) throw ConfigError("config: step must be positive");
  if (!(cfg.tol > 0.0)) throw ConfigError("config: tol must be positive");
  if (cfg.j < -1 || cfg.j > 2) throw ConfigError("config: j must be in {-1, 0, 1, 2}");
  return cfg;
}

Field build_mu_field(const Grid& g, const json& spec) {
  if (!spec.is_object() || !spec.contains("kind"))
    throw ConfigError("config: mu spec needs a kind");
  const std::string kind = spec["kind"].get<std::string>();
  if (kind == "const") {
    const cplx v = get_complex(spec.contains("value") ? spec["value"] : json{0.0, 0.0}, "mu value");
    return Field(g, v);
  }
  if (kind == "modes") {
    if (!spec.contains("modes") || !spec["modes"].is_array())
      throw ConfigError("config: mu modes spec needs a modes array");
    Field f(g, cplx(0.0, 0.0));
    for (const auto& m : spec["modes"]) {
      const double amp = m.at("amp").get<double>();
      const int p = m.at("p").get<int>();
      const int q = m.at("q").get<int>();
      f += Field::sample(g, [&](double x, double y, cplx) {
        return amp * std::exp(cplx(0.0, 2.0 * std::numbers::pi * (p * x + q * y)));
      });
    }
    return f;
  }
  throw ConfigError("config: unknown mu kind '" + kind + "'");
}

Field build_sigma_bump(const Grid& g, double amp, double width) {
  if (!(width > 0.0)) throw ConfigError("config: bump width must be positive");
  // Smooth periodic bump centered at (1/2, 1/2).
  return Field::sample(g, [&](double x, double y, cplx) {
    const double sx = std::sin(std::numbers::pi * (x - 0.5));
    const double sy = std::sin(std::numbers::pi * (y - 0.5));
    return cplx(amp * std::exp(-(sx * sx + sy * sy) / (width * width)), 0.0);
  });
}

MetricDensity build_rho(const Grid& g, const json& spec) {
  if (!spec.is_object() || !spec.contains("kind"))
    throw ConfigError("config: rho spec needs a kind");
  const std::string kind = spec["kind"].get<std::string>();
  if (kind == "flat") return MetricDensity::flat(g);
  if (kind == "bump") {
    const double amp = spec.value("amp", 0.1);
    const double width = spec.value("width", 0.3);
    const Field sigma = build_sigma_bump(g, amp, width);
    return MetricDensity(sigma.map([](cplx s) { return cplx(std::exp(s.real()), 0.0); }));
  }
  throw ConfigError("config: unknown rho kind '" + kind + "'");
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm_utc{};
  gmtime_r(&tt, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%FT%TZ", &tm_utc);
  return buf;
}

BeltramiField make_mu(const Grid& g, const ScenarioConfig& cfg) {
  BeltramiField mu(build_mu_field(g, cfg.mu_spec));
  if (mu.sup_norm() >= 0.7)
    throw ConfigError("config: sup|mu| = " + std::to_string(mu.sup_norm()) +
                      " >= 0.7 (solver operating range)");
  return mu;
}

void require_eigen_n(int n) {
  if (n > kMaxEigenGridN)
    throw ConfigError("config: this subcommand does dense eigen-work; n <= " +
                      std::to_string(kMaxEigenGridN) + " required");
}

json run_solve(const ScenarioConfig& cfg, json& warnings) {
  const Grid g(TorusModulus(cfg.tau), cfg.n);
  const BeltramiField mu = make_mu(g, cfg);
  SolveOptions opts;
  opts.tol = cfg.tol;

  json r;
  try {
    const QcSolution sol = solve_beltrami(mu, opts);
    r["converged"] = true;
    r["residual"] = sol.residual;
    r["iterations"] = sol.iterations;
    r["c"] = put_complex(sol.c);
    r["pfaff_residual"] = check_pfaff(sol, mu);
    double lmin = 1e300, lmax = 0.0;
    for (const cplx& v : sol.lambda.values()) {
      lmin = std::min(lmin, std::abs(v));
      lmax = std::max(lmax, std::abs(v));
    }
    r["min_abs_lambda"] = lmin;
    r["max_abs_lambda"] = lmax;
  } catch (const SolverError& e) {
    // a stalled iteration is reported, with its final residual, not fatal
    r["converged"] = false;
    r["residual"] = e.residual;
    r["iterations"] = e.iterations;
    warnings.push_back(std::string("solver did not reach tolerance: ") + e.what());
  }
  if (mu.is_constant()) {
    const TorusModulus tp = modulus_of_constant(mu.constant_value(), TorusModulus(cfg.tau));
    r["tau_prime"] = put_complex(tp.tau);
  }
  return r;
}

json run_spectrum(const ScenarioConfig& cfg, json& warnings) {
  (void)warnings;
  require_eigen_n(cfg.n);
  const Grid g(TorusModulus(cfg.tau), cfg.n);
  const BeltramiField mu = make_mu(g, cfg);
  const MetricDensity rho = build_rho(g, cfg.rho_spec);
  const WeightedOperator delta = build_laplacian(cfg.j, mu, rho);
  const double area = integrate(volume_density(rho, mu)).real();
  const SpectrumData spec = make_spectrum(delta, area);

  json r;
  r["j"] = cfg.j;
  r["area"] = area;
  r["n_zero"] = spec.n_zero;
  r["eigenvalues"] = spec.eigenvalues;
  return r;
}

json run_zeta_det(const ScenarioConfig& cfg, json& warnings) {
  const Grid g(TorusModulus(cfg.tau), cfg.n);
  const BeltramiField mu = make_mu(g, cfg);
  const MetricDensity rho = build_rho(g, cfg.rho_spec);
  const DetMethod method = cfg.method == "oracle" ? DetMethod::torus_exact_oracle
                                                  : DetMethod::numerical_heat_kernel;
  if (method == DetMethod::numerical_heat_kernel) require_eigen_n(cfg.n);
  SolveOptions opts;
  opts.tol = cfg.tol;
  const QuillenData q = quillen_gamma(cfg.j, mu, rho, method, {}, opts);
  if (q.flagged) warnings.push_back(q.flag_reason);

  json r;
  r["j"] = cfg.j;
  r["log_det_zeta"] = q.log_det_zeta;
  r["log_l2_norm"] = q.log_l2_norm;
  r["gamma"] = q.gamma;
  r["method"] = cfg.method;
  r["n_j"] = q.n_j;
  r["c0"] = q.c0;
  r["t0"] = q.t0;
  r["flagged"] = q.flagged;
  return r;
}

json run_riemann_roch(const ScenarioConfig& cfg, json& warnings) {
  (void)warnings;
  require_eigen_n(cfg.n);
  const Grid g(TorusModulus(cfg.tau), cfg.n);
  const BeltramiField mu = make_mu(g, cfg);
  const MetricDensity rho = build_rho(g, cfg.rho_spec);

  const KernelBasis kj = kernel_basis(build_laplacian(cfg.j, mu, rho));
  const KernelBasis k1mj = kernel_basis(build_laplacian(1 - cfg.j, mu, rho));

  json r;
  r["j"] = cfg.j;
  r["N_j"] = kj.dimension();
  r["N_1mj"] = k1mj.dimension();
  r["difference"] = kj.dimension() - k1mj.dimension();
  r["riemann_roch_rhs"] = 0;  // (g - 1)(2j - 1) at genus 1
  return r;
}

json run_chi_identity(const ScenarioConfig& cfg, json& warnings) {
  (void)warnings;
  const Grid g(TorusModulus(cfg.tau), cfg.n);
  const MetricDensity rho = build_rho(g, cfg.rho_spec);
  const Field direction = build_mu_field(g, cfg.mu_spec);
  DeformationFamily family(Field(g, cplx(0.0, 0.0)), direction, cfg.step);
  SolveOptions opts;
  opts.tol = cfg.tol;
  const ChiIdentityReport rep = check_chi_identity(family, cfg.t, rho, true, opts);

  json r;
  r["lhs_pushforward_c1_sq"] = rep.lhs;
  r["rhs_mixed_derivative_chi"] = rep.rhs;
  r["abs_gap"] = rep.abs_gap;
  r["rel_gap"] = rep.rel_gap;
  r["step"] = rep.step;
  r["richardson"] = true;
  r["coarse"] = json{{"lhs", rep.lhs_coarse}, {"rhs", rep.rhs_coarse}};
  return r;
}

json run_factorization(const ScenarioConfig& cfg, json& warnings) {
  const Grid g(TorusModulus(cfg.tau), cfg.n);
  const Field direction = build_mu_field(g, cfg.mu_spec);
  DeformationFamily family(Field(g, cplx(0.0, 0.0)), direction, cfg.step);
  const DetMethod method = cfg.method == "oracle" ? DetMethod::torus_exact_oracle
                                                  : DetMethod::numerical_heat_kernel;
  if (method == DetMethod::numerical_heat_kernel) require_eigen_n(cfg.n);

  // The base metric stays flat; a bump rho spec requests the
  // Weyl-independence comparison F(rho) vs F(e^sigma rho) on top of the
  // mixed-derivative check.
  const MetricDensity rho = MetricDensity::flat(g);
  std::optional<Field> sigma;
  if (cfg.rho_spec.at("kind").get<std::string>() == "bump") {
    require_eigen_n(cfg.n);
    sigma = build_sigma_bump(g, cfg.rho_spec.value("amp", 0.1), cfg.rho_spec.value("width", 0.3));
  }

  SolveOptions opts;
  opts.tol = cfg.tol;
  const FactorizationReport rep =
      check_factorization(cfg.j, family, cfg.t, rho, method, sigma, {}, opts);
  if (rep.flagged) warnings.push_back(rep.flag_reason);

  json r;
  r["j"] = cfg.j;
  r["c_j"] = rep.c_j;
  r["mixed_derivative_F"] = rep.mixed_derivative;
  r["F_center"] = rep.F_center;
  r["gamma_center"] = rep.gamma_center;
  r["counterterm_center"] = rep.counterterm_center;
  r["flagged"] = rep.flagged;
  if (rep.weyl) {
    r["weyl"] = json{{"F_at_rho", rep.weyl->F_at_rho},
                     {"F_at_scaled", rep.weyl->F_at_scaled},
                     {"diff", rep.weyl->diff},
                     {"scale", rep.weyl->scale}};
  }
  return r;
}

json run_cj(const ScenarioConfig& cfg, json& warnings) {
  (void)warnings;
  json r;
  r["j"] = cfg.j;
  r["c_j"] = c_j(cfg.j);
  r["table"] = json{{"0", c_j(0)}, {"1", c_j(1)}, {"2", c_j(2)}};
  return r;
}

std::string render_csv(const ScenarioConfig& cfg, const json& report) {
  std::ostringstream out;
  out << "# " << report.at("config").dump() << "\n";
  if (cfg.subcommand == "spectrum") {
    out << "index,eigenvalue\n";
    const auto& eigs = report.at("result").at("eigenvalues");
    int idx = 0;
    out.precision(17);
    for (const auto& e : eigs) out << idx++ << "," << e.get<double>() << "\n";
    return out.str();
  }
  throw ConfigError("config: csv format is only available for spectrum dumps");
}

}  // namespace

std::string run_scenario(const std::string& config_json) {
  const ScenarioConfig cfg = parse_config(config_json);
  if (cfg.threads > 0) Eigen::setNbThreads(cfg.threads);

  json warnings = json::array();
  json result;
  if (cfg.subcommand == "solve")
    result = run_solve(cfg, warnings);
  else if (cfg.subcommand == "spectrum")
    result = run_spectrum(cfg, warnings);
  else if (cfg.subcommand == "zeta-det")
    result = run_zeta_det(cfg, warnings);
  else if (cfg.subcommand == "riemann-roch")
    result = run_riemann_roch(cfg, warnings);
  else if (cfg.subcommand == "check-chi-identity")
    result = run_chi_identity(cfg, warnings);
  else if (cfg.subcommand == "check-factorization")
    result = run_factorization(cfg, warnings);
  else if (cfg.subcommand == "cj")
    result = run_cj(cfg, warnings);
  else
    throw ConfigError("config: unknown subcommand '" + cfg.subcommand + "'");

  json report;
  report["version"] = BELTRAMI_LAB_VERSION;
  report["timestamp"] = timestamp_utc();
  report["config"] = cfg.echo();
  report["result"] = result;
  report["warnings"] = warnings;

  if (cfg.format == "csv") return render_csv(cfg, report);
  return report.dump(2) + "\n";
}

}  // namespace bel

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

// Scenario runner CLI.  Flags are translated into a JSON config and
// handed to the shared library's C entry point; reports land on stdout
// or at --out.  Exit codes: 0 success (warnings allowed), 2 config
// error, 3 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "beltrami/capi.h"
#include "json.hpp"

namespace {

using json = nlohmann::ordered_json;

// Accepts "re,im", "re", "i", "-i", "bi", "a+bi", "a-bi".
bool parse_complex(std::string s, double& re, double& im) {
  s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' '; }), s.end());
  if (s.empty()) return false;
  const auto comma = s.find(',');
  try {
    if (comma != std::string::npos) {
      re = std::stod(s.substr(0, comma));
      im = std::stod(s.substr(comma + 1));
      return true;
    }
    if (s.back() == 'i') {
      std::string body = s.substr(0, s.size() - 1);
      // split a+bi / a-bi at the last sign that is not an exponent sign
      size_t split = std::string::npos;
      for (size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
          split = k;
          break;
        }
      }
      if (split == std::string::npos) {
        re = 0.0;
        if (body.empty() || body == "+")
          im = 1.0;
        else if (body == "-")
          im = -1.0;
        else
          im = std::stod(body);
      } else {
        re = std::stod(body.substr(0, split));
        std::string imag = body.substr(split);
        if (imag == "+")
          im = 1.0;
        else if (imag == "-")
          im = -1.0;
        else
          im = std::stod(imag);
      }
      return true;
    }
    re = std::stod(s);
    im = 0.0;
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

bool parse_mu_spec(const std::string& s, json& out, std::string& err) {
  if (s.rfind("const:", 0) == 0) {
    double re = 0, im = 0;
    if (!parse_complex(s.substr(6), re, im)) {
      err = "bad constant in --mu '" + s + "'";
      return false;
    }
    out = json{{"kind", "const"}, {"value", {re, im}}};
    return true;
  }
  if (s.rfind("mode:", 0) == 0) {
    std::vector<std::string> parts;
    std::stringstream ss(s.substr(5));
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(item);
    if (parts.empty() || parts.size() % 3 != 0) {
      err = "--mu mode spec needs amp,p,q triples";
      return false;
    }
    json modes = json::array();
    try {
      for (size_t k = 0; k < parts.size(); k += 3)
        modes.push_back(json{{"amp", std::stod(parts[k])},
                             {"p", std::stoi(parts[k + 1])},
                             {"q", std::stoi(parts[k + 2])}});
    } catch (const std::exception&) {
      err = "bad number in --mu '" + s + "'";
      return false;
    }
    out = json{{"kind", "modes"}, {"modes", modes}};
    return true;
  }
  err = "--mu must be const:<v> or mode:<amp,p,q[,...]>";
  return false;
}

bool parse_rho_spec(const std::string& s, json& out, std::string& err) {
  if (s == "flat") {
    out = json{{"kind", "flat"}};
    return true;
  }
  if (s.rfind("bump:", 0) == 0) {
    std::stringstream ss(s.substr(5));
    std::string a, w;
    if (!std::getline(ss, a, ',') || !std::getline(ss, w, ',')) {
      err = "--rho bump spec needs amp,width";
      return false;
    }
    try {
      out = json{{"kind", "bump"}, {"amp", std::stod(a)}, {"width", std::stod(w)}};
    } catch (const std::exception&) {
      err = "bad number in --rho '" + s + "'";
      return false;
    }
    return true;
  }
  err = "--rho must be flat or bump:<amp,width>";
  return false;
}

struct CommonFlags {
  std::string tau = "0,1";
  int n = 24;
  int j = 0;
  std::string mu = "const:0";
  std::string rho = "flat";
  std::string method = "numerical";
  std::string t = "0.1";
  double step = 1e-2;
  double tol = 1e-10;
  int threads = 0;
  std::string format = "json";
  std::string out;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--tau", f.tau, "lattice modulus, 're,im' or 'a+bi' (default i)");
  cmd->add_option("--n", f.n, "grid resolution per axis (even, >= 4)");
  cmd->add_option("--j", f.j, "differential weight j");
  cmd->add_option("--mu", f.mu, "const:<v> or mode:<amp,p,q[,...]>");
  cmd->add_option("--rho", f.rho, "flat or bump:<amp,width>");
  cmd->add_option("--method", f.method, "determinant backend: numerical | oracle");
  cmd->add_option("--t", f.t, "family base parameter (complex)");
  cmd->add_option("--step", f.step, "finite-difference step");
  cmd->add_option("--tol", f.tol, "Beltrami solver tolerance");
  cmd->add_option("--threads", f.threads, "dense-algebra thread cap (0 = library default)");
  cmd->add_option("--format", f.format, "json | csv");
  cmd->add_option("--out", f.out, "report path (default stdout)");
}

int run(const std::string& subcommand, const CommonFlags& f) {
  double tau_re = 0, tau_im = 1, t_re = 0.1, t_im = 0;
  std::string err;
  if (!parse_complex(f.tau, tau_re, tau_im)) {
    std::cerr << "error: bad --tau '" << f.tau << "'\n";
    return 2;
  }
  if (!parse_complex(f.t, t_re, t_im)) {
    std::cerr << "error: bad --t '" << f.t << "'\n";
    return 2;
  }
  json mu_spec, rho_spec;
  if (!parse_mu_spec(f.mu, mu_spec, err) || !parse_rho_spec(f.rho, rho_spec, err)) {
    std::cerr << "error: " << err << "\n";
    return 2;
  }

  json config;
  config["subcommand"] = subcommand;
  config["tau"] = {tau_re, tau_im};
  config["n"] = f.n;
  config["j"] = f.j;
  config["mu"] = mu_spec;
  config["rho"] = rho_spec;
  config["method"] = f.method;
  config["t"] = {t_re, t_im};
  config["step"] = f.step;
  config["tol"] = f.tol;
  config["threads"] = f.threads;
  config["format"] = f.format;

  char* report = nullptr;
  const bel_status st = bel_run_scenario(config.dump().c_str(), &report);
  if (st != BEL_OK) {
    std::cerr << "error: " << bel_last_error() << "\n";
    return st == BEL_ERR_CONFIG ? 2 : 3;
  }

  if (f.out.empty()) {
    std::cout << report;
  } else {
    std::ofstream file(f.out);
    if (!file) {
      std::cerr << "error: cannot write '" << f.out << "'\n";
      bel_string_free(report);
      return 2;
    }
    file << report;
  }
  bel_string_free(report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("beltrami-lab scenario runner (v") + bel_version() + ")"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> subs = {
      {"solve", "solve the Beltrami equation and report the residuals"},
      {"spectrum", "eigenvalues of the deformed Laplacian Delta_j"},
      {"zeta-det", "zeta-regularized determinant and Quillen norm data"},
      {"riemann-roch", "kernel dimensions N_j, N_{1-j} and their difference"},
      {"check-chi-identity", "curvature identity: pushforward of c1^2 vs mixed derivative of chi"},
      {"check-factorization", "harmonicity of Gamma plus the chi counterterm; Weyl comparison"},
      {"cj", "the constant C_j = 6j(j-1)+1"},
  };

  std::vector<CommonFlags> flags(subs.size());
  std::vector<CLI::App*> cmds;
  for (size_t k = 0; k < subs.size(); ++k) {
    CLI::App* cmd = app.add_subcommand(subs[k].first, subs[k].second);
    add_common(cmd, flags[k]);
    cmds.push_back(cmd);
  }

  CLI11_PARSE(app, argc, argv);

  for (size_t k = 0; k < subs.size(); ++k)
    if (cmds[k]->parsed()) return run(subs[k].first, flags[k]);
  return 2;
}

#include "spinreg/spin_system.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace spinreg {

void SpinSystemParams::validate() const {
  std::string errs;
  auto bad = [&errs](const std::string& msg) {
    if (!errs.empty()) errs += "; ";
    errs += msg;
  };
  for (double v : {omega_S, omega_I[0], omega_I[1], A_par[0], A_par[1], A_perp[0],
                   A_perp[1], kappa, g0, Gamma1_e, Gammaphi_e, Gammaphi_n[0],
                   Gammaphi_n[1], n_th, C_zz}) {
    if (!std::isfinite(v)) {
      bad("non-finite parameter");
      break;
    }
  }
  if (kappa <= 0.0) bad("kappa must be > 0");
  if (g0 < 0.0) bad("g0 must be >= 0");
  if (Gamma1_e < 0.0) bad("Gamma1_e must be >= 0");
  if (Gammaphi_e < 0.0) bad("Gammaphi_e must be >= 0");
  if (Gammaphi_n[0] < 0.0 || Gammaphi_n[1] < 0.0) bad("Gammaphi_n must be >= 0");
  if (n_th < 0.0 || n_th >= 1.0) bad("n_th must be in [0, 1)");
  if (omega_I[0] == 0.0 || omega_I[1] == 0.0) bad("omega_I entries must be nonzero");
  if (!errs.empty()) throw std::invalid_argument("invalid SpinSystemParams: " + errs);
}

SpinSystemParams table1_params() {
  SpinSystemParams p;
  p.omega_S = 7.7492e9;
  p.omega_I = {-791.0e3, -801.0e3};
  p.A_par = {36.0e3, 19.0e3};
  p.A_perp = {71.0e3, 12.8e3};
  p.kappa = 640.0e3;
  p.g0 = 5.6e3;
  p.Gamma1_e = 1.0 / 0.8e-3;
  p.Gammaphi_e = 0.0;
  p.Gammaphi_n = {1.0 / 0.8, 1.0 / 1.2};
  p.n_th = 0.0;
  p.C_zz = 0.8;
  return p;
}

namespace {

const std::map<std::string, int> kIndexedKeys = {
    {"omega_I", 0}, {"A_par", 1}, {"A_perp", 2}, {"Gammaphi_n", 3}};

} // namespace

SpinSystemParams parse_params(std::istream& in) {
  SpinSystemParams p;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      // blank or comment-only line
      std::istringstream ws(line);
      std::string tok;
      if (ws >> tok)
        throw std::runtime_error("parameter file line " + std::to_string(lineno) +
                                 ": expected 'key = value'");
      continue;
    }
    std::string key = line.substr(0, eq);
    std::string val = line.substr(eq + 1);
    auto trim = [](std::string& s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      s = (a == std::string::npos) ? "" : s.substr(a, b - a + 1);
    };
    trim(key);
    trim(val);
    double x = 0.0;
    try {
      size_t pos = 0;
      x = std::stod(val, &pos);
      if (pos != val.size()) throw std::invalid_argument(val);
    } catch (const std::exception&) {
      throw std::runtime_error("parameter file line " + std::to_string(lineno) +
                               ": bad numeric value '" + val + "'");
    }

    if (key == "omega_S") p.omega_S = x;
    else if (key == "kappa") p.kappa = x;
    else if (key == "g0") p.g0 = x;
    else if (key == "Gamma1_e") p.Gamma1_e = x;
    else if (key == "Gammaphi_e") p.Gammaphi_e = x;
    else if (key == "n_th") p.n_th = x;
    else if (key == "C_zz") p.C_zz = x;
    else if (key == "omega_I_1") p.omega_I[0] = x;
    else if (key == "omega_I_2") p.omega_I[1] = x;
    else if (key == "A_par_1") p.A_par[0] = x;
    else if (key == "A_par_2") p.A_par[1] = x;
    else if (key == "A_perp_1") p.A_perp[0] = x;
    else if (key == "A_perp_2") p.A_perp[1] = x;
    else if (key == "Gammaphi_n_1") p.Gammaphi_n[0] = x;
    else if (key == "Gammaphi_n_2") p.Gammaphi_n[1] = x;
    else
      throw std::runtime_error("parameter file line " + std::to_string(lineno) +
                               ": unknown key '" + key + "'");
  }
  p.validate();
  return p;
}

SpinSystemParams load_params(const std::string& path) {
  if (path == "table1") return table1_params();
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open parameter file: " + path);
  return parse_params(f);
}

void serialize_params(const SpinSystemParams& p, std::ostream& out) {
  out.precision(17);
  out << "# spin register parameters (Hz, 1/s)\n";
  out << "omega_S = " << p.omega_S << "\n";
  out << "omega_I_1 = " << p.omega_I[0] << "\n";
  out << "omega_I_2 = " << p.omega_I[1] << "\n";
  out << "A_par_1 = " << p.A_par[0] << "\n";
  out << "A_par_2 = " << p.A_par[1] << "\n";
  out << "A_perp_1 = " << p.A_perp[0] << "\n";
  out << "A_perp_2 = " << p.A_perp[1] << "\n";
  out << "kappa = " << p.kappa << "\n";
  out << "g0 = " << p.g0 << "\n";
  out << "Gamma1_e = " << p.Gamma1_e << "\n";
  out << "Gammaphi_e = " << p.Gammaphi_e << "\n";
  out << "Gammaphi_n_1 = " << p.Gammaphi_n[0] << "\n";
  out << "Gammaphi_n_2 = " << p.Gammaphi_n[1] << "\n";
  out << "n_th = " << p.n_th << "\n";
  out << "C_zz = " << p.C_zz << "\n";
}

void save_params(const SpinSystemParams& p, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write parameter file: " + path);
  serialize_params(p, f);
}

} // namespace spinreg

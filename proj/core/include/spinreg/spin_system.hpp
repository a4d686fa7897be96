#ifndef SPINREG_SPIN_SYSTEM_HPP
#define SPINREG_SPIN_SYSTEM_HPP

#include <array>
#include <iosfwd>
#include <string>

namespace spinreg {

// Spectroscopic constants of one electron spin coupled to two nuclear spins.
//
// Unit conventions (project-wide):
//   - all frequencies are ordinary (non-angular) frequencies in Hz; the 2*pi
//     conversion happens inside operations that build generators,
//   - rates are 1/s, times are seconds,
//   - frequencies are signed (omega_I is negative for these nuclei).
struct SpinSystemParams {
  double omega_S = 0.0;                     // electron transition frequency, Hz
  std::array<double, 2> omega_I{0.0, 0.0};  // nuclear frequencies, Hz (signed)
  std::array<double, 2> A_par{0.0, 0.0};    // zz hyperfine couplings, Hz
  std::array<double, 2> A_perp{0.0, 0.0};   // zx hyperfine couplings, Hz
  double kappa = 1.0;                       // resonator linewidth, Hz
  double g0 = 0.0;                          // spin-resonator coupling, Hz
  double Gamma1_e = 0.0;                    // electron relaxation rate, 1/s
  double Gammaphi_e = 0.0;                  // electron pure dephasing, 1/s (optional knob)
  std::array<double, 2> Gammaphi_n{0.0, 0.0};  // nuclear dephasing rates, 1/s
  double n_th = 0.0;                        // thermal occupation, dimensionless
  double C_zz = 0.0;                        // nuclear-nuclear dipolar coupling, Hz

  // throws std::invalid_argument naming every violated constraint
  void validate() const;

  // nucleus argument is 1-based throughout the public API
  double omega_I_n(int nucleus) const { return omega_I.at(nucleus - 1); }
  double A_par_n(int nucleus) const { return A_par.at(nucleus - 1); }
  double A_perp_n(int nucleus) const { return A_perp.at(nucleus - 1); }
  double Gammaphi_n_n(int nucleus) const { return Gammaphi_n.at(nucleus - 1); }
};

// Bundled preset mirroring the measured register (Table-I style constants):
// A_par/2pi = 36, 19 kHz; A_perp/2pi = 71, 12.8 kHz; omega_I/2pi = -791, -801 kHz;
// kappa/2pi = 640 kHz; g0/2pi = 5.6 kHz; electron T1 = 0.8 ms; nuclear T2* = 0.8, 1.2 s;
// C_zz/2pi = 0.8 Hz.
SpinSystemParams table1_params();

// Flat key-value parameter files ("key = value", '#' comments). Keys are the
// field names above, per-nucleus fields suffixed _1/_2 (e.g. omega_I_1).
SpinSystemParams parse_params(std::istream& in);
SpinSystemParams load_params(const std::string& path);
void serialize_params(const SpinSystemParams& p, std::ostream& out);
void save_params(const SpinSystemParams& p, const std::string& path);

} // namespace spinreg

#endif

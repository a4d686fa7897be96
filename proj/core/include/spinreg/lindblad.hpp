#ifndef SPINREG_LINDBLAD_HPP
#define SPINREG_LINDBLAD_HPP

#include <utility>
#include <vector>

#include "spinreg/raman.hpp"
#include "spinreg/spin_system.hpp"
#include "spinreg/types.hpp"

namespace spinreg {

// One microwave tone on the electron drive line, in the rotating frame of the
// engine. freq_offset_hz is the tone frequency minus the frame reference.
// The drive term is (amp/2)(S- e^{+i phi(t)} + S+ e^{-i phi(t)}) in angular
// units, phi(t) = 2 pi * freq_offset * (t - start) + phase_rad (rotating-wave
// form; counter-rotating terms at ~2 omega_S are dropped).
struct DriveTone {
  enum class Envelope { Rectangular, Gaussian, Chirped };

  double freq_offset_hz = 0.0;
  double amplitude_hz = 0.0;   // peak Rabi amplitude on the electron
  double phase_rad = 0.0;
  Envelope envelope = Envelope::Rectangular;
  double chirp_span_hz = 0.0;  // Chirped: instantaneous frequency sweeps
                               // freq_offset -/+ span/2 across the duration
  double start_s = 0.0;
  double duration_s = 0.0;

  void validate() const;
};

// (operator, rate) pairs; the engine applies D[sqrt(rate) * op].
struct CollapseSet {
  std::vector<std::pair<Mat8, double>> ops;

  void add(const Mat8& op, double rate);
  void validate() const;
};

// Standard dissipator set:
//   (S-, Gamma1 (n_th + 1)), (S+, Gamma1 n_th),
//   (Iz_i, 2 Gammaphi_n_i), and (Sz, 2 Gammaphi_e) when Gammaphi_e > 0.
// Dephasing operators carry twice the phenomenological rate so that the
// corresponding coherence decays at exactly Gammaphi (= 1/T2*).
CollapseSet collapse_ops(const SpinSystemParams& params);

// correlated (global) nuclear dephasing: D[sqrt(2 rate) (Iz1 + Iz2)]
void add_correlated_dephasing(CollapseSet& set, double rate);

struct Trajectory {
  std::vector<double> times;
  std::vector<Mat8> states;

  const Mat8& final_state() const { return states.back(); }
  // population of basis level idx at sample k
  double population(int k, int level) const { return states[k](level, level).real(); }
  void write_csv(std::ostream& out) const;
};

struct EvolveOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double max_step_s = 0.0;   // 0: derived as 1/(20 f_max)
  double sample_dt_s = 0.0;  // 0: store endpoints only
};

struct IntegrationError : std::runtime_error {
  double t;
  double local_error;
  IntegrationError(const std::string& msg, double t_, double err_)
      : std::runtime_error(msg), t(t_), local_error(err_) {}
};

// Integrate d rho/dt = -i[H(t), rho] + sum_k D[L_k] rho from t0 to t1.
// h0 is the drive-free rotating-frame Hamiltonian in angular units
// (build_rotating_hamiltonian); tones add the time-dependent part.
// Embedded Dormand-Prince 5(4) with PI-free step control; the max step is
// bounded by 1/(20 f_max) with f_max the largest rotating-frame frequency.
Trajectory evolve(const Mat8& rho0, const Mat8& h0,
                  const std::vector<DriveTone>& tones, const CollapseSet& collapse,
                  double t0, double t1, const EvolveOptions& opts = {});

// Nuclear-subspace generator for fast gate simulation at a Raman drive
// condition: the target nucleus is driven at rate Omega_Ram about the
// (cos phi, sin phi) axis while Z terms carry the residual detuning, the
// conditional shift and the branch-dependent rate asymmetry.
// drive_delta_hz is the two-photon frequency of the drive; clock_s_hz the
// spectator's frame frequency (defaults to its free splitting).
struct EffectiveRamanModel {
  Mat4 hamiltonian;   // angular units
  bool regime_ok;     // filtered amplitudes at least 10x below their detunings
};
EffectiveRamanModel effective_raman_hamiltonian(const SpinSystemParams& params,
                                                const RamanDriveCondition& cond,
                                                double drive_delta_hz,
                                                double phase_rad = 0.0,
                                                double clock_s_hz = -1.0);

// density matrices for common initial states
Mat8 pure_level(int level);
Mat8 nuclear_state_with_electron_down(const Mat4& rho_nuclear);
Mat4 nuclear_block_electron_down(const Mat8& rho);   // renormalized projection

} // namespace spinreg

#endif

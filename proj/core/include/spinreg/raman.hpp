#ifndef SPINREG_RAMAN_HPP
#define SPINREG_RAMAN_HPP

#include <stdexcept>
#include <string>

#include "spinreg/spin_system.hpp"

namespace spinreg {

// Thrown when a perturbative expression is evaluated within the guard band of
// a vanishing denominator; the formulas are meaningless near those resonances.
struct SingularityError : std::runtime_error {
  double denominator_hz;
  SingularityError(const std::string& which, double value_hz)
      : std::runtime_error("raman analytics singularity: denominator '" + which +
                           "' within guard band (" + std::to_string(value_hz) + " Hz)"),
        denominator_hz(value_hz) {}
};

// Two-tone stimulated-Raman drive condition on one nuclear qubit.
//
// Delta convention (used consistently by every operation below and by the
// pulse compiler): Delta is the detuning of tone A *below* the electron
// transition whose nuclear labels are (target = up, spectator = down), i.e.
// tone A sits at line(target up, spectator dn) - Delta and tone B at a further
// -delta, delta ~ the target's nuclear splitting. The spectator-down branch
// therefore sees tone-A detuning Delta, and the spectator-up branch
// Delta + A_par(spectator).
//
// Amplitudes are electron-equivalent (what an electron Rabi experiment at the
// same power would show, before resonator filtering). Filtered amplitudes are
// derived via the single-pole resonator response.
struct RamanDriveCondition {
  int target = 1;           // driven nucleus, 1 or 2
  double Delta_hz = 0.0;    // tone-A detuning, signed (see above)
  double Omega_eA_hz = 0.0; // electron-equivalent amplitude, tone A
  double Omega_eB_hz = 0.0;

  int spectator() const { return target == 1 ? 2 : 1; }
};

struct FilteredAmplitudes {
  double Omega_A_hz;
  double Omega_B_hz;
};

// Single-pole resonator filtering of the two tones:
//   Omega_A = Omega_eA / sqrt(1 + 4 Delta^2 / kappa^2)
//   Omega_B = Omega_eB / sqrt(1 + 4 (Delta - omega_I)^2 / kappa^2)
// (tone offsets from the resonator center are Delta and Delta - omega_I up to
// hyperfine-scale corrections).
FilteredAmplitudes filtered_amplitudes(double Omega_eA_hz, double Omega_eB_hz,
                                       double Delta_hz, double omega_I_hz,
                                       double kappa_hz);
FilteredAmplitudes filtered_amplitudes(const SpinSystemParams& params,
                                       const RamanDriveCondition& cond);

// Effective two-photon Rabi rate (Hz, signed) of the driven nucleus,
//   Omega_Ram = (A_perp / 2 omega_I) (Omega_A Omega_B / 2) [1/D - 1/(D + zeta0)],
// zeta0 = -omega_I - A_par/2 (the nuclear splitting in the electron-excited
// manifold, which is the detuning offset of the sideband virtual path).
// D is the tone-A detuning of the addressed branch: Delta for spectator down
// (the prepared-state reference, and the default), Delta + A_par(spectator)
// for spectator up. pi time = 1/(2 |Omega_Ram|).
double raman_rabi(const SpinSystemParams& params, int nucleus,
                  const RamanDriveCondition& cond, bool spectator_up = false);

// Exact algebraic inversion of raman_rabi for the hyperfine coupling:
// round-trips with raman_rabi to machine precision.
double invert_for_aperp(double Omega_Ram_measured_hz, const SpinSystemParams& params,
                        const RamanDriveCondition& cond, bool spectator_up = false);

// Drive-induced (ac-Zeeman) displacement of the target's Raman resonance,
// conditioned on the spectator state, plus the derived mean and difference.
struct AcZeemanResult {
  double delta_ac_up_hz;    // spectator up
  double delta_ac_down_hz;  // spectator down
  double delta_ac_hz;       // (up + down) / 2
  double delta_2qb_hz;      // up - down
};
AcZeemanResult ac_zeeman_shifts(const SpinSystemParams& params,
                                const RamanDriveCondition& cond);

// Detuning where delta_2qb vanishes for equal filtered amplitudes, from the
// first-order cubic
//   Du (Du - At)(Du - At + 2 As) = -(Du - wI)^2 (Du + 2 As - wI)
// (At/As the driven/spectator A_par, wI the driven nucleus's frequency),
// solved by bisection on [omega_I + 1 Hz, -1 Hz] plus one Newton polish.
// Zero-order limit: omega_I / 2.
double unconditional_detuning(const SpinSystemParams& params, int target = 1);

// guard band around denominator zeros (Hz)
constexpr double kSingularityGuardHz = 1.0e3;

} // namespace spinreg

#endif

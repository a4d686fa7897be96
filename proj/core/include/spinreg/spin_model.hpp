#ifndef SPINREG_SPIN_MODEL_HPP
#define SPINREG_SPIN_MODEL_HPP

#include <array>

#include "spinreg/spin_system.hpp"
#include "spinreg/types.hpp"

namespace spinreg {

// Static register Hamiltonian in angular units (rad/s):
//   H = 2pi [ omega_S Sz + sum_i omega_I,i Iz,i
//             + sum_i (A_par_i Sz Iz,i + A_perp_i Sz Ix,i) + C_zz Iz,1 Iz,2 ]
// Secular hyperfine form: only terms proportional to Sz are kept.
Mat8 build_static_hamiltonian(const SpinSystemParams& params);

// Same Hamiltonian in the frame rotating at frame_ref_hz on the electron
// (omega_S replaced by omega_S - frame_ref_hz; nuclear terms commute with Sz
// and are unchanged).
Mat8 build_rotating_hamiltonian(const SpinSystemParams& params, double frame_ref_hz);

// Eigenlevels labeled by their dominant product-basis component.
// energies_hz[i] is the energy (in Hz) of the level whose dominant overlap is
// basis state i; mixing is small for these parameters so the labeling is
// unambiguous.
struct LabeledLevels {
  std::array<double, 8> energy_hz{};
  Mat8 eigenvectors;                 // column i = eigenvector labeled i
};
LabeledLevels labeled_levels(const SpinSystemParams& params);

// The four electron-flip transition frequencies, Hz, labeled by the preserved
// nuclear state. f(n1,n2) = E(Up,n1,n2) - E(Dn,n1,n2) from exact
// diagonalization.
struct ElectronLines {
  double f_uu, f_ud, f_du, f_dd;
  double operator()(bool n1_up, bool n2_up) const {
    return n1_up ? (n2_up ? f_uu : f_ud) : (n2_up ? f_du : f_dd);
  }
};
ElectronLines electron_transition_frequencies(const SpinSystemParams& params);

// Exact nuclear transition frequency (Hz, positive): energy of |..dn..> minus
// |..up..> for the target nucleus, with the electron and the spectator nucleus
// fixed. This is the free-evolution (Ramsey) frequency of the nuclear qubit.
double nuclear_splitting(const SpinSystemParams& params, int nucleus,
                         bool electron_up, bool spectator_up);

// Purcell rate 4 g0^2 / kappa at spin-resonator resonance, returned in 1/s
// (inputs are ordinary frequencies in Hz).
double purcell_rate(double g0_hz, double kappa_hz);

// Sideband transition amplitude ratio A_perp/(2 omega_I) and its square, the
// per-excitation cross-relaxation probability scale.
struct SidebandBranching {
  double amplitude_ratio;   // signed
  double probability_scale; // ratio squared
};
SidebandBranching sideband_branching(const SpinSystemParams& params, int nucleus);

} // namespace spinreg

#endif

#ifndef SPINREG_TOMOGRAPHY_HPP
#define SPINREG_TOMOGRAPHY_HPP

#include <array>
#include <optional>
#include <random>
#include <vector>

#include "spinreg/types.hpp"

namespace spinreg {

// Pre-measurement rotation per qubit; the z-basis measurement follows.
enum class PreRotation { Id, X90, Y90 };

struct TomographySetting {
  PreRotation q1 = PreRotation::Id;
  PreRotation q2 = PreRotation::Id;
  // outcome counts in basis order dd, du, ud, uu; fractional values are
  // allowed (exact-probability mode uses probabilities directly)
  std::array<double, 4> counts{0.0, 0.0, 0.0, 0.0};
};

// the overcomplete default: {Id, X90, Y90} x {Id, X90, Y90}
std::vector<TomographySetting> default_settings();

// unitary applied to the state before z measurement for one setting
Mat4 setting_unitary(PreRotation q1, PreRotation q2);

// forward model: outcome probabilities for a state under one setting
std::array<double, 4> setting_probabilities(const Mat4& rho, PreRotation q1,
                                            PreRotation q2);

// fill counts by sampling (shots > 0) or with exact probabilities (shots == 0)
std::vector<TomographySetting> simulate_tomography(const Mat4& rho,
                                                   double shots_per_setting,
                                                   std::mt19937_64* rng = nullptr);

enum class SpamMode {
  PreCorrect,  // apply T^-1 to each setting's outcome distribution, then fit
  InModel,     // fold T into the measurement operators of the likelihood
};

struct TomographyOptions {
  double dilution = 0.5;
  int max_iterations = 10000;
  double loglik_tol = 1e-10;
  SpamMode spam_mode = SpamMode::PreCorrect;
};

struct TomographyResult {
  Mat4 rho;
  double log_likelihood = 0.0;
  int iterations = 0;
  bool converged = false;
  double min_iteration_gain = 0.0;        // most negative per-iteration change
  double fidelity_raw = -1.0;             // filled by pipelines that know the target
  double fidelity_spam_corrected = -1.0;
};

// Maximum-likelihood state reconstruction by the diluted fixed-point
// iteration rho <- N[(1-e+e R) rho (1-e+e R)], monotone in the likelihood
// (the dilution is halved within an iteration whenever a step would decrease
// it). Starts from the maximally mixed state. Throws on non-invertible T or
// an informationally incomplete setting set.
TomographyResult mle_reconstruct(const std::vector<TomographySetting>& settings,
                                 const std::optional<Eigen::Matrix4d>& T = std::nullopt,
                                 const TomographyOptions& opts = {});

// Uhlmann fidelity (Tr sqrt(sqrt(rho_t) rho sqrt(rho_t)))^2; for a pure
// target this reduces to <psi|rho|psi>. Rejects non-PSD input.
double fidelity(const Mat4& rho, const Mat4& rho_target);

// SPAM correction of an outcome distribution: T^-1 p, clipped to [0,1] and
// renormalized. Rejects non-column-stochastic T and condition numbers > 1e6.
std::array<double, 4> spam_correct(const std::array<double, 4>& p,
                                   const Eigen::Matrix4d& T);

// Bell states in the nuclear basis: odd = (|du> + e^{i phase}|ud>)/sqrt(2),
// even = (|dd> + e^{i phase}|uu>)/sqrt(2)
Vec4 bell_state(bool even_parity, double phase = 0.0);

// Coherence readout of a Bell state from populations measured after x-pi/2
// analysis pulses on both qubits: the parity combination
// (P_dd + P_uu) - (P_du + P_ud) oscillates with the Bell coherence phase and
// decays with its coherence time. Fits A exp(-t/T) cos(2 pi f t + c) + offset.
struct BellCoherenceFit {
  double amplitude = 0.0;
  double decay_rate_per_s = 0.0;
  double freq_hz = 0.0;
  double phase = 0.0;
  double rms_residual = 0.0;
  bool converged = false;
};
BellCoherenceFit bell_coherence_observable(const std::vector<double>& delays_s,
                                           const std::vector<std::array<double, 4>>& populations,
                                           double freq_guess_hz);

} // namespace spinreg

#endif

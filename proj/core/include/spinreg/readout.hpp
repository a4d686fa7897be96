#ifndef SPINREG_READOUT_HPP
#define SPINREG_READOUT_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "spinreg/spin_system.hpp"
#include "spinreg/types.hpp"

namespace spinreg {

// Joint nuclear state labels. Internal index = 2*n1 + n2 (dd=0, du=1, ud=2,
// uu=3); the CSV count order is uu, du, ud, dd.
enum class NuclearState : int { dd = 0, du = 1, ud = 2, uu = 3 };
inline const char* to_string(NuclearState s) {
  switch (s) {
    case NuclearState::dd: return "dd";
    case NuclearState::du: return "du";
    case NuclearState::ud: return "ud";
    case NuclearState::uu: return "uu";
  }
  return "?";
}

struct DetectionParams {
  double eta = 0.2;            // detected photons per matched excitation (incl.
                               // emission-in-window and detector efficiency)
  double dark_rate = 100.0;    // counts/s
  double t_int = 1e-3;         // integration window per pulse, s
  int n_reps = 200;            // pulses per frequency
  double pi_error = 0.1;       // electron pi-pulse infidelity
  double cross_relax_scale = 1.0;  // multiplies the physical branching below

  void validate() const;
};

struct ShotRecord {
  // counts ordered C_uu, C_du, C_ud, C_dd (matching the CSV header)
  std::array<int, 4> counts{0, 0, 0, 0};
  int dx = 0;  // (C_uu + C_ud) - (C_du + C_dd)
  int dy = 0;  // (C_uu + C_du) - (C_ud + C_dd)
  NuclearState true_state = NuclearState::dd;     // state before readout
  NuclearState post_state = NuclearState::dd;     // state after readout
  NuclearState assigned_state = NuclearState::dd; // filled by assign()
};

// Per-pulse Monte Carlo of photon-counting readout. The readout cell
// interleaves one pi pulse at each of the four electron lines and is repeated
// n_reps times. A matched pulse excites with probability 1 - pi_error; each
// excitation yields a detected photon with probability eta and, on decay, a
// sideband branch flips nucleus i with probability
// cross_relax_scale * branching_i * purcell_filter_i, after which subsequent
// pulses address the new state. Every window adds Poisson(dark_rate * t_int)
// dark counts.
ShotRecord simulate_readout_shot(NuclearState initial, const SpinSystemParams& params,
                                 const DetectionParams& det, std::mt19937_64& rng);

// per-excitation flip probability used by the shot simulator (branching ratio
// squared times the resonator filter at the sideband offset)
double cross_relaxation_probability(const SpinSystemParams& params, int nucleus,
                                    const DetectionParams& det);

// 4-cluster k-means classifier in the (dx, dy) plane, clusters labeled by the
// majority true_state of their members. Fixed k=4, 10 restarts, seeded; ties
// broken by lowest centroid index.
struct Classifier {
  std::array<std::array<double, 2>, 4> centroids{};  // indexed by NuclearState
};
Classifier classify(const std::vector<ShotRecord>& training, uint64_t seed);
NuclearState assign(const Classifier& clf, const ShotRecord& record);

// Column-stochastic confusion matrix: column p = outcome distribution of
// shots prepared in state p (columns renormalized to sum 1). Order dd,du,ud,uu.
// Records must carry assigned_state (run assign() first).
Eigen::Matrix4d estimate_T_matrix(const std::array<std::vector<ShotRecord>, 4>& prepared,
                                  size_t min_shots = 100);

// CSV shot log: state_true,C_uu,C_du,C_ud,C_dd,dx,dy,state_assigned
void write_shot_csv(std::ostream& out, const std::vector<ShotRecord>& records);

// ---------------------------------------------------------------------------
// Slow electron-frequency drift and its tracking
// ---------------------------------------------------------------------------

struct DriftModel {
  double sigma_hz = 5e3;        // stationary RMS of the drift
  double tau_corr_s = 60.0;     // correlation time
  double block_s = 20e-3;       // interval between tracking corrections
  double meas_noise_hz = 200.0; // detuning-estimate noise per block
};

struct TrackerGains {
  double kp = 0.6;
  double ki = 0.1;
  bool enabled = true;
};

struct TrackResult {
  std::vector<double> time_s;
  std::vector<double> drift_hz;      // true frequency offset
  std::vector<double> residual_hz;   // drift minus applied correction
  double residual_rms_hz = 0.0;
  double drift_rms_hz = 0.0;
};

// Ornstein-Uhlenbeck drift of the electron frequency, corrected between
// blocks by a PI loop fed with a noisy detuning measurement.
TrackResult track_frequency(const DriftModel& drift, const TrackerGains& gains,
                            int n_blocks, std::mt19937_64& rng);

} // namespace spinreg

#endif

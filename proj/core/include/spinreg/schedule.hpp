#ifndef SPINREG_SCHEDULE_HPP
#define SPINREG_SCHEDULE_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "spinreg/lindblad.hpp"
#include "spinreg/raman.hpp"
#include "spinreg/spin_system.hpp"

namespace spinreg {

struct GateSpec {
  enum class Kind { RamanRotation, ElectronPi, ChirpPump, Wait, ReadoutBlock };
  enum class PumpBand { High, Low };

  Kind kind = Kind::Wait;
  // RamanRotation
  int target = 1;
  double theta = 0.0;        // in [0, 2 pi)
  double phi = 0.0;          // rotation axis in the qubit's clock frame
  bool conditional = false;  // use the conditional drive condition
  // ElectronPi: which electron line to address
  bool line_n1_up = false;
  bool line_n2_up = false;
  // ChirpPump
  PumpBand band = PumpBand::High;
  int repeats = 50;
  // Wait
  double duration_s = 0.0;

  static GateSpec raman(int target, double theta, double phi, bool conditional = false);
  static GateSpec electron_pi(bool n1_up, bool n2_up);
  static GateSpec chirp_pump(PumpBand band, int repeats);
  static GateSpec wait(double duration_s);
  static GateSpec readout_block();
};

struct Schedule {
  std::vector<GateSpec> gates;
  void append(const GateSpec& g) { gates.push_back(g); }
};

// lossless text round-trip, one gate per line
void serialize_schedule(const Schedule& s, std::ostream& out);
Schedule parse_schedule(std::istream& in);

// ---------------------------------------------------------------------------
// Calibration
// ---------------------------------------------------------------------------

// Everything the compiler needs to turn one Raman rotation into tones:
// the drive condition, the resonant two-photon frequency, the pi duration
// and the spectator's phase-advance rate while this gate runs (virtual-Z
// correction applied to the other qubit's clock).
struct RamanGateCalibration {
  RamanDriveCondition cond;
  double drive_delta_hz = 0.0;
  double pi_time_s = 0.0;
  double spectator_phase_rate_rad_per_s = 0.0;
  // phase the driven qubit itself accrues against its software clock while
  // the gate runs (a gate clocked off its qubit's reference drifts)
  double target_phase_rate_rad_per_s = 0.0;
};

struct CalibrationTable {
  RamanGateCalibration uncond[2];  // indexed by target-1
  RamanGateCalibration cond[2];
  double electron_pi_s = 80e-6;
  double pump_amplitude_hz = 400e3;
  double pump_pulse_s = 3.5e-3;
  double pump_wait_s = 2e-3;
  double pump_chirp_span_hz = 50e3;
  double pump_center_offset_hz = 785e3;  // high band, relative to omega_S
  double readout_reps = 200;
  double readout_window_s = 1e-3;

  void save(const std::string& path) const;
  static CalibrationTable load(const std::string& path);
};

// Analytic calibration from the closed-form Raman expressions: unconditional
// conditions at each target's own unconditional detuning with equal filtered
// amplitudes anchored to the reference Rabi rates, the conditional condition
// at Delta_c with Omega_eB = 5 Omega_eA anchored to the conditional pi time.
struct CalibrationAnchors {
  double uncond_rabi_hz[2] = {121.0, 87.0};  // reference rates per target
  double cond_pi_time_s = 6.72e-3;
  double cond_Delta_hz = 110e3;
  double cond_amp_ratio = 5.0;               // electron-equivalent B/A
  int cond_target = 2;
};
CalibrationTable analytic_calibration(const SpinSystemParams& params,
                                      const CalibrationAnchors& anchors = {});

// ---------------------------------------------------------------------------
// Compilation
// ---------------------------------------------------------------------------

struct ReadoutMarker {
  double time_s;
};

struct CompiledSchedule {
  std::vector<DriveTone> tones;
  std::vector<ReadoutMarker> readout_markers;
  double total_duration_s = 0.0;
  // non-overlapping drive segments (diagnostics / invariants)
  std::vector<std::pair<double, double>> segments;
};

// Deterministic schedule -> tone compilation. Gates are laid out back to back;
// rotation angles map to durations theta/pi * pi_time; rotation phases are
// realized as the relative phase of the two Raman tones against each qubit's
// software clock (running at its calibrated drive_delta from t = 0), with
// calibrated virtual-Z spectator corrections applied between gates.
// Throws std::runtime_error naming the missing calibration entry.
CompiledSchedule compile(const Schedule& schedule, const SpinSystemParams& params,
                         const CalibrationTable& calib);

// ---------------------------------------------------------------------------
// Experiment schedule builders
// ---------------------------------------------------------------------------

Schedule make_sideband_pump(const SpinSystemParams& params, bool target_up_up,
                            int repeats = 50);
// artificial detuning is realized as a phase advance of the closing pi/2
std::vector<Schedule> make_ramsey(int target, const std::vector<double>& delays_s,
                                  double detuning_hz);
std::vector<Schedule> make_hahn(int target, const std::vector<double>& delays_s);
// SEDOR: probe Hahn pair without (first) and with (second) a partner pi pulse
// at the echo midpoint
std::pair<std::vector<Schedule>, std::vector<Schedule>> make_sedor(
    int probe, int partner, const std::vector<double>& delays_s);
// odd parity: (|du> + |ud>)/sqrt(2) circuit; even parity adds a pi_x on Qb2
Schedule make_bell_prep(bool even_parity);

// Ideal (instantaneous-gate) unitary action of a schedule on the nuclear
// subspace, using the same phase conventions as compile(); Wait/ElectronPi/
// pump/readout gates contribute identity. Used for circuit-algebra tests and
// tomography targets.
Mat4 ideal_nuclear_unitary(const Schedule& schedule);

// Rotate a lab-frame nuclear state into the software-clock frame at time t
// (each qubit's clock runs at its unconditional drive frequency from t = 0).
// States produced by the compiled gates match ideal_nuclear_unitary outputs
// in this frame.
Mat4 clock_frame_nuclear(const Mat4& rho_lab, double t, const CalibrationTable& calib);

// Integrate a compiled schedule in the frame rotating at omega_S.
Trajectory run_compiled(const CompiledSchedule& compiled, const SpinSystemParams& params,
                        const Mat8& rho0, const CollapseSet& collapse,
                        const EvolveOptions& opts = {});

} // namespace spinreg

#endif

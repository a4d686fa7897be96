#include "spinreg/schedule.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "spinreg/operators.hpp"
#include "spinreg/spin_model.hpp"

namespace spinreg {

GateSpec GateSpec::raman(int target, double theta, double phi, bool conditional) {
  if (theta < 0.0 || theta >= TWO_PI)
    throw std::invalid_argument("raman rotation: theta must be in [0, 2pi)");
  GateSpec g;
  g.kind = Kind::RamanRotation;
  g.target = target;
  g.theta = theta;
  g.phi = phi;
  g.conditional = conditional;
  return g;
}

GateSpec GateSpec::electron_pi(bool n1_up, bool n2_up) {
  GateSpec g;
  g.kind = Kind::ElectronPi;
  g.line_n1_up = n1_up;
  g.line_n2_up = n2_up;
  return g;
}

GateSpec GateSpec::chirp_pump(PumpBand band, int repeats) {
  if (repeats < 0) throw std::invalid_argument("chirp_pump: repeats must be >= 0");
  GateSpec g;
  g.kind = Kind::ChirpPump;
  g.band = band;
  g.repeats = repeats;
  return g;
}

GateSpec GateSpec::wait(double duration_s) {
  if (duration_s < 0.0) throw std::invalid_argument("wait: duration must be >= 0");
  GateSpec g;
  g.kind = Kind::Wait;
  g.duration_s = duration_s;
  return g;
}

GateSpec GateSpec::readout_block() {
  GateSpec g;
  g.kind = Kind::ReadoutBlock;
  return g;
}

void serialize_schedule(const Schedule& s, std::ostream& out) {
  out.precision(17);
  for (const auto& g : s.gates) {
    switch (g.kind) {
      case GateSpec::Kind::RamanRotation:
        out << "raman_rotation target=" << g.target << " theta=" << g.theta
            << " phi=" << g.phi << " conditional=" << (g.conditional ? 1 : 0) << "\n";
        break;
      case GateSpec::Kind::ElectronPi:
        out << "electron_pi n1=" << (g.line_n1_up ? 'u' : 'd')
            << " n2=" << (g.line_n2_up ? 'u' : 'd') << "\n";
        break;
      case GateSpec::Kind::ChirpPump:
        out << "chirp_pump band=" << (g.band == GateSpec::PumpBand::High ? "high" : "low")
            << " repeats=" << g.repeats << "\n";
        break;
      case GateSpec::Kind::Wait:
        out << "wait duration=" << g.duration_s << "\n";
        break;
      case GateSpec::Kind::ReadoutBlock:
        out << "readout_block\n";
        break;
    }
  }
}

Schedule parse_schedule(std::istream& in) {
  Schedule s;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;
    std::map<std::string, std::string> kv;
    std::string tok;
    while (ls >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos)
        throw std::runtime_error("schedule line " + std::to_string(lineno) +
                                 ": expected key=value, got '" + tok + "'");
      kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    auto need = [&](const std::string& k) {
      auto it = kv.find(k);
      if (it == kv.end())
        throw std::runtime_error("schedule line " + std::to_string(lineno) +
                                 ": missing field '" + k + "'");
      return it->second;
    };
    if (kind == "raman_rotation") {
      s.append(GateSpec::raman(std::stoi(need("target")), std::stod(need("theta")),
                               std::stod(need("phi")), need("conditional") == "1"));
    } else if (kind == "electron_pi") {
      s.append(GateSpec::electron_pi(need("n1") == "u", need("n2") == "u"));
    } else if (kind == "chirp_pump") {
      s.append(GateSpec::chirp_pump(need("band") == "high" ? GateSpec::PumpBand::High
                                                           : GateSpec::PumpBand::Low,
                                    std::stoi(need("repeats"))));
    } else if (kind == "wait") {
      s.append(GateSpec::wait(std::stod(need("duration"))));
    } else if (kind == "readout_block") {
      s.append(GateSpec::readout_block());
    } else {
      throw std::runtime_error("schedule line " + std::to_string(lineno) +
                               ": unknown gate '" + kind + "'");
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Calibration
// ---------------------------------------------------------------------------

namespace {

void write_gate_cal(std::ostream& out, const std::string& prefix,
                    const RamanGateCalibration& g) {
  out << prefix << ".target = " << g.cond.target << "\n";
  out << prefix << ".Delta_hz = " << g.cond.Delta_hz << "\n";
  out << prefix << ".Omega_eA_hz = " << g.cond.Omega_eA_hz << "\n";
  out << prefix << ".Omega_eB_hz = " << g.cond.Omega_eB_hz << "\n";
  out << prefix << ".drive_delta_hz = " << g.drive_delta_hz << "\n";
  out << prefix << ".pi_time_s = " << g.pi_time_s << "\n";
  out << prefix << ".spectator_phase_rate = " << g.spectator_phase_rate_rad_per_s << "\n";
  out << prefix << ".target_phase_rate = " << g.target_phase_rate_rad_per_s << "\n";
}

} // namespace

void CalibrationTable::save(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write calibration file: " + path);
  f.precision(17);
  for (int t = 0; t < 2; ++t) write_gate_cal(f, "uncond" + std::to_string(t + 1), uncond[t]);
  for (int t = 0; t < 2; ++t) write_gate_cal(f, "cond" + std::to_string(t + 1), cond[t]);
  f << "electron_pi_s = " << electron_pi_s << "\n";
  f << "pump_amplitude_hz = " << pump_amplitude_hz << "\n";
  f << "pump_pulse_s = " << pump_pulse_s << "\n";
  f << "pump_wait_s = " << pump_wait_s << "\n";
  f << "pump_chirp_span_hz = " << pump_chirp_span_hz << "\n";
  f << "pump_center_offset_hz = " << pump_center_offset_hz << "\n";
  f << "readout_reps = " << readout_reps << "\n";
  f << "readout_window_s = " << readout_window_s << "\n";
}

CalibrationTable CalibrationTable::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open calibration file: " + path);
  CalibrationTable c;
  std::map<std::string, double> kv;
  std::string line;
  while (std::getline(f, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq);
    key.erase(key.find_last_not_of(" \t") + 1);
    kv[key] = std::stod(line.substr(eq + 1));
  }
  auto read_gate = [&kv](const std::string& prefix, RamanGateCalibration& g) {
    auto get = [&](const std::string& k) {
      auto it = kv.find(prefix + "." + k);
      if (it == kv.end()) throw std::runtime_error("calibration missing " + prefix + "." + k);
      return it->second;
    };
    g.cond.target = static_cast<int>(get("target"));
    g.cond.Delta_hz = get("Delta_hz");
    g.cond.Omega_eA_hz = get("Omega_eA_hz");
    g.cond.Omega_eB_hz = get("Omega_eB_hz");
    g.drive_delta_hz = get("drive_delta_hz");
    g.pi_time_s = get("pi_time_s");
    g.spectator_phase_rate_rad_per_s = get("spectator_phase_rate");
    g.target_phase_rate_rad_per_s = get("target_phase_rate");
  };
  for (int t = 0; t < 2; ++t) read_gate("uncond" + std::to_string(t + 1), c.uncond[t]);
  for (int t = 0; t < 2; ++t) read_gate("cond" + std::to_string(t + 1), c.cond[t]);
  auto opt = [&kv](const char* k, double& v) {
    if (auto it = kv.find(k); it != kv.end()) v = it->second;
  };
  opt("electron_pi_s", c.electron_pi_s);
  opt("pump_amplitude_hz", c.pump_amplitude_hz);
  opt("pump_pulse_s", c.pump_pulse_s);
  opt("pump_wait_s", c.pump_wait_s);
  opt("pump_chirp_span_hz", c.pump_chirp_span_hz);
  opt("pump_center_offset_hz", c.pump_center_offset_hz);
  opt("readout_reps", c.readout_reps);
  opt("readout_window_s", c.readout_window_s);
  return c;
}

CalibrationTable analytic_calibration(const SpinSystemParams& params,
                                      const CalibrationAnchors& anchors) {
  params.validate();
  CalibrationTable table;

  for (int target = 1; target <= 2; ++target) {
    RamanGateCalibration g;
    g.cond.target = target;
    g.cond.Delta_hz = unconditional_detuning(params, target);
    // equal filtered amplitudes anchored to the reference Rabi rate
    RamanDriveCondition unit = g.cond;
    unit.Omega_eA_hz = 1.0;
    unit.Omega_eB_hz = 1.0;
    const FilteredAmplitudes f1 = filtered_amplitudes(params, unit);
    RamanDriveCondition equal = g.cond;
    equal.Omega_eA_hz = 1.0;
    equal.Omega_eB_hz = f1.Omega_A_hz / f1.Omega_B_hz;  // makes filtered amps equal
    const double per_unit = raman_rabi(params, target, equal, false);
    const double scale = std::sqrt(anchors.uncond_rabi_hz[target - 1] / std::abs(per_unit));
    g.cond.Omega_eA_hz = equal.Omega_eA_hz * scale;
    g.cond.Omega_eB_hz = equal.Omega_eB_hz * scale;
    const AcZeemanResult ac = ac_zeeman_shifts(params, g.cond);
    const double split = 0.5 * (nuclear_splitting(params, target, false, false) +
                                nuclear_splitting(params, target, false, true));
    g.drive_delta_hz = split + ac.delta_ac_hz;
    g.pi_time_s = 1.0 / (2.0 * std::abs(raman_rabi(params, target, g.cond, false)));
    table.uncond[target - 1] = g;
  }

  for (int target = 1; target <= 2; ++target) {
    RamanGateCalibration g;
    g.cond.target = target;
    g.cond.Delta_hz = anchors.cond_Delta_hz;
    RamanDriveCondition unit = g.cond;
    unit.Omega_eA_hz = 1.0;
    unit.Omega_eB_hz = anchors.cond_amp_ratio;
    const double rate_anchor = 1.0 / (2.0 * anchors.cond_pi_time_s);
    const double per_unit = raman_rabi(params, target, unit, false);
    const double scale = std::sqrt(rate_anchor / std::abs(per_unit));
    g.cond.Omega_eA_hz = scale;
    g.cond.Omega_eB_hz = anchors.cond_amp_ratio * scale;
    const AcZeemanResult ac = ac_zeeman_shifts(params, g.cond);
    // the conditional gate acts on the spectator-down branch
    const double split = nuclear_splitting(params, target, false, false);
    g.drive_delta_hz = split + ac.delta_ac_down_hz;
    g.pi_time_s = anchors.cond_pi_time_s;
    g.target_phase_rate_rad_per_s =
        TWO_PI * (g.drive_delta_hz - table.uncond[target - 1].drive_delta_hz);
    table.cond[target - 1] = g;
  }
  return table;
}

// ---------------------------------------------------------------------------
// Compilation
// ---------------------------------------------------------------------------

namespace {

double reference_line_offset(const SpinSystemParams& params, int target) {
  const ElectronLines lines = electron_transition_frequencies(params);
  // tone A is referenced to the line with (target = up, spectator = down)
  const double line = (target == 1) ? lines.f_ud : lines.f_du;
  return line - params.omega_S;
}

} // namespace

CompiledSchedule compile(const Schedule& schedule, const SpinSystemParams& params,
                         const CalibrationTable& calib) {
  params.validate();
  CompiledSchedule out;
  double t = 0.0;
  double vz[2] = {0.0, 0.0};  // virtual-Z ledger per qubit, radians

  auto clock_phase = [&calib](int qubit, double at) {
    return TWO_PI * calib.uncond[qubit - 1].drive_delta_hz * at;
  };

  for (const auto& g : schedule.gates) {
    switch (g.kind) {
      case GateSpec::Kind::RamanRotation: {
        const RamanGateCalibration& cal =
            g.conditional ? calib.cond[g.target - 1] : calib.uncond[g.target - 1];
        if (cal.pi_time_s <= 0.0)
          throw std::runtime_error(std::string("compile: missing calibration entry '") +
                                   (g.conditional ? "cond" : "uncond") +
                                   std::to_string(g.target) + "'");
        if (g.theta == 0.0) break;
        const double tau = (g.theta / M_PI) * cal.pi_time_s;
        const double nuA = reference_line_offset(params, g.target) - cal.cond.Delta_hz;
        const double nuB = nuA - cal.drive_delta_hz;
        const FilteredAmplitudes f = filtered_amplitudes(params, cal.cond);
        const double rate_sign = raman_rabi(params, g.target, cal.cond, false);
        const double axis = g.phi + vz[g.target - 1] + (rate_sign < 0.0 ? M_PI : 0.0);

        DriveTone a;
        a.freq_offset_hz = nuA;
        a.amplitude_hz = f.Omega_A_hz;
        a.phase_rad = clock_phase(g.target, t) + axis;
        a.start_s = t;
        a.duration_s = tau;
        DriveTone b = a;
        b.freq_offset_hz = nuB;
        b.amplitude_hz = f.Omega_B_hz;
        b.phase_rad = 0.0;
        out.tones.push_back(a);
        out.tones.push_back(b);
        out.segments.emplace_back(t, t + tau);

        const int spect = (g.target == 1) ? 2 : 1;
        vz[spect - 1] += cal.spectator_phase_rate_rad_per_s * tau;
        vz[g.target - 1] += cal.target_phase_rate_rad_per_s * tau;
        t += tau;
        break;
      }
      case GateSpec::Kind::ElectronPi: {
        const ElectronLines lines = electron_transition_frequencies(params);
        DriveTone p;
        p.freq_offset_hz = lines(g.line_n1_up, g.line_n2_up) - params.omega_S;
        p.amplitude_hz = 1.0 / (2.0 * calib.electron_pi_s);
        p.start_s = t;
        p.duration_s = calib.electron_pi_s;
        out.tones.push_back(p);
        out.segments.emplace_back(t, t + p.duration_s);
        t += p.duration_s;
        break;
      }
      case GateSpec::Kind::ChirpPump: {
        const double sign = (g.band == GateSpec::PumpBand::High) ? 1.0 : -1.0;
        for (int r = 0; r < g.repeats; ++r) {
          DriveTone p;
          p.freq_offset_hz = sign * calib.pump_center_offset_hz;
          p.amplitude_hz = calib.pump_amplitude_hz;
          p.envelope = DriveTone::Envelope::Chirped;
          p.chirp_span_hz = calib.pump_chirp_span_hz;
          p.start_s = t;
          p.duration_s = calib.pump_pulse_s;
          out.tones.push_back(p);
          out.segments.emplace_back(t, t + p.duration_s);
          t += calib.pump_pulse_s + calib.pump_wait_s;
        }
        break;
      }
      case GateSpec::Kind::Wait:
        t += g.duration_s;
        break;
      case GateSpec::Kind::ReadoutBlock: {
        const int reps = static_cast<int>(calib.readout_reps);
        out.readout_markers.push_back({t});
        const ElectronLines lines = electron_transition_frequencies(params);
        const double lines4[4] = {lines.f_uu, lines.f_du, lines.f_ud, lines.f_dd};
        for (int r = 0; r < reps; ++r) {
          for (int k = 0; k < 4; ++k) {
            DriveTone p;
            p.freq_offset_hz = lines4[k] - params.omega_S;
            p.amplitude_hz = 1.0 / (2.0 * calib.electron_pi_s);
            p.start_s = t;
            p.duration_s = calib.electron_pi_s;
            out.tones.push_back(p);
            out.segments.emplace_back(t, t + p.duration_s);
            t += calib.electron_pi_s + calib.readout_window_s;
          }
        }
        break;
      }
    }
  }

  out.total_duration_s = t;
  for (size_t i = 1; i < out.segments.size(); ++i) {
    if (out.segments[i].first < out.segments[i - 1].second - 1e-15)
      throw std::runtime_error("compile: overlapping drive segments");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

Schedule make_sideband_pump(const SpinSystemParams& params, bool target_up_up,
                            int repeats) {
  (void)params;
  Schedule s;
  // pumping the high-frequency sidebands polarizes into |dn dn>; the low band
  // into |up up>
  s.append(GateSpec::chirp_pump(
      target_up_up ? GateSpec::PumpBand::Low : GateSpec::PumpBand::High, repeats));
  return s;
}

std::vector<Schedule> make_ramsey(int target, const std::vector<double>& delays_s,
                                  double detuning_hz) {
  std::vector<Schedule> out;
  double prev = -1.0;
  for (double d : delays_s) {
    if (d < 0.0 || d <= prev)
      throw std::invalid_argument("make_ramsey: delays must be positive ascending");
    prev = d;
    Schedule s;
    s.append(GateSpec::raman(target, M_PI / 2, 0.0));
    if (d > 0.0) s.append(GateSpec::wait(d));
    s.append(GateSpec::raman(target, M_PI / 2,
                             std::fmod(TWO_PI * detuning_hz * d, TWO_PI)));
    out.push_back(s);
  }
  return out;
}

std::vector<Schedule> make_hahn(int target, const std::vector<double>& delays_s) {
  std::vector<Schedule> out;
  double prev = -1.0;
  for (double d : delays_s) {
    if (d < 0.0 || d <= prev)
      throw std::invalid_argument("make_hahn: delays must be positive ascending");
    prev = d;
    Schedule s;
    s.append(GateSpec::raman(target, M_PI / 2, 0.0));
    s.append(GateSpec::wait(0.5 * d));
    s.append(GateSpec::raman(target, M_PI, 0.0));
    s.append(GateSpec::wait(0.5 * d));
    s.append(GateSpec::raman(target, M_PI / 2, 0.0));
    out.push_back(s);
  }
  return out;
}

std::pair<std::vector<Schedule>, std::vector<Schedule>> make_sedor(
    int probe, int partner, const std::vector<double>& delays_s) {
  if (probe == partner) throw std::invalid_argument("make_sedor: probe must differ from partner");
  std::vector<Schedule> seq1, seq2;
  for (double d : delays_s) {
    Schedule a;
    a.append(GateSpec::raman(probe, M_PI / 2, 0.0));
    a.append(GateSpec::wait(0.5 * d));
    a.append(GateSpec::raman(probe, M_PI, 0.0));
    a.append(GateSpec::wait(0.5 * d));
    a.append(GateSpec::raman(probe, M_PI / 2, 0.0));
    seq1.push_back(a);

    Schedule b;
    b.append(GateSpec::raman(probe, M_PI / 2, 0.0));
    b.append(GateSpec::wait(0.5 * d));
    b.append(GateSpec::raman(probe, M_PI, 0.0));
    b.append(GateSpec::raman(partner, M_PI, 0.0));
    b.append(GateSpec::wait(0.5 * d));
    b.append(GateSpec::raman(probe, M_PI / 2, 0.0));
    seq2.push_back(b);
  }
  return {seq1, seq2};
}

Schedule make_bell_prep(bool even_parity) {
  // pi/2 on Qb1 about -y maps dn to (dn+up)/sqrt(2); the conditional pi about
  // -y flips Qb2 (up with +1 amplitude) only on the Qb1-down branch
  Schedule s;
  s.append(GateSpec::raman(1, M_PI / 2, -M_PI / 2));
  s.append(GateSpec::raman(2, M_PI, -M_PI / 2, true));
  if (even_parity) s.append(GateSpec::raman(2, M_PI, 0.0));
  return s;
}

Trajectory run_compiled(const CompiledSchedule& compiled, const SpinSystemParams& params,
                        const Mat8& rho0, const CollapseSet& collapse,
                        const EvolveOptions& opts) {
  const Mat8 h0 = build_rotating_hamiltonian(params, params.omega_S);
  const double t1 = std::max(compiled.total_duration_s, 1e-9);
  return evolve(rho0, h0, compiled.tones, collapse, 0.0, t1, opts);
}

Mat4 clock_frame_nuclear(const Mat4& rho_lab, double t, const CalibrationTable& calib) {
  Vec4 phases;
  for (int i = 0; i < 4; ++i) {
    const double m1 = (i & 2) ? 0.5 : -0.5;
    const double m2 = (i & 1) ? 0.5 : -0.5;
    const double theta = TWO_PI * t *
                         (calib.uncond[0].drive_delta_hz * m1 +
                          calib.uncond[1].drive_delta_hz * m2);
    phases(i) = std::exp(Complex(0.0, -theta));
  }
  Mat4 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out(i, j) = phases(i) * std::conj(phases(j)) * rho_lab(i, j);
  return out;
}

Mat4 ideal_nuclear_unitary(const Schedule& schedule) {
  Mat4 u = Mat4::Identity();
  for (const auto& g : schedule.gates) {
    if (g.kind != GateSpec::Kind::RamanRotation || g.theta == 0.0) continue;
    const Mat4 r = ops::rotation4(g.target, g.theta, g.phi);
    if (!g.conditional) {
      u = r * u;
    } else {
      // rotate only when the spectator is down
      const int spect = (g.target == 1) ? 2 : 1;
      const Mat4 pd = 0.5 * Mat4::Identity() - ops::Iz4(spect);
      const Mat4 pu = 0.5 * Mat4::Identity() + ops::Iz4(spect);
      u = (pd * r + pu) * u;
    }
  }
  return u;
}

} // namespace spinreg

#include "spinreg/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include "spinreg/operators.hpp"
#include "spinreg/spin_model.hpp"

namespace spinreg {

void DriveTone::validate() const {
  if (!(duration_s > 0.0)) throw std::invalid_argument("DriveTone: duration must be > 0");
  if (!std::isfinite(freq_offset_hz) || !std::isfinite(amplitude_hz) ||
      !std::isfinite(phase_rad) || !std::isfinite(chirp_span_hz) ||
      !std::isfinite(start_s))
    throw std::invalid_argument("DriveTone: non-finite field");
  if (amplitude_hz < 0.0) throw std::invalid_argument("DriveTone: amplitude must be >= 0");
}

void CollapseSet::add(const Mat8& op, double rate) {
  if (rate < 0.0) throw std::invalid_argument("CollapseSet: rate must be >= 0");
  if (rate > 0.0) ops.emplace_back(op, rate);
}

void CollapseSet::validate() const {
  for (const auto& [op, rate] : ops) {
    (void)op;
    if (!(rate >= 0.0) || !std::isfinite(rate))
      throw std::invalid_argument("CollapseSet: rates must be finite and >= 0");
  }
}

CollapseSet collapse_ops(const SpinSystemParams& params) {
  params.validate();
  CollapseSet set;
  set.add(ops::Sm(), params.Gamma1_e * (params.n_th + 1.0));
  set.add(ops::Sp(), params.Gamma1_e * params.n_th);
  for (int n = 1; n <= 2; ++n) set.add(ops::Iz(n), 2.0 * params.Gammaphi_n_n(n));
  if (params.Gammaphi_e > 0.0) set.add(ops::Sz(), 2.0 * params.Gammaphi_e);
  return set;
}

void add_correlated_dephasing(CollapseSet& set, double rate) {
  set.add(ops::Iz(1) + ops::Iz(2), 2.0 * rate);
}

void Trajectory::write_csv(std::ostream& out) const {
  out << "time_s";
  for (int i = 0; i < 8; ++i) out << ",p_" << LevelLabel::from_index(i).to_string();
  out << ",purity\n";
  out.precision(12);
  for (size_t k = 0; k < times.size(); ++k) {
    out << times[k];
    for (int i = 0; i < 8; ++i) out << "," << states[k](i, i).real();
    out << "," << purity(states[k]) << "\n";
  }
}

namespace {

struct ToneData {
  double amp_rad;
  double omega0_rad;    // initial instantaneous angular offset
  double chirp_rad;     // d omega / dt
  double phase0;
  double start, end, duration;
  DriveTone::Envelope env;
};

struct Rhs {
  Mat8 h0;
  std::vector<ToneData> tones;
  // dissipator channels, pre-scaled by sqrt(rate)
  std::vector<Eigen::Matrix<Complex, 8, 1>> diag_ls;
  std::vector<Mat8> gen_ls, gen_ldags;
  Eigen::Matrix<Complex, 8, 1> k_diag;  // sum L^dag L (verified diagonal)
  bool k_is_diag = true;
  Mat8 k_full;

  mutable Mat8 h, tmp;

  void build(const Mat8& h0_in, const std::vector<DriveTone>& tone_list,
             const CollapseSet& collapse) {
    h0 = h0_in;
    for (const auto& t : tone_list) {
      ToneData d;
      d.amp_rad = TWO_PI * t.amplitude_hz;
      d.phase0 = t.phase_rad;
      d.start = t.start_s;
      d.duration = t.duration_s;
      d.end = t.start_s + t.duration_s;
      d.env = t.envelope;
      if (t.envelope == DriveTone::Envelope::Chirped) {
        d.omega0_rad = TWO_PI * (t.freq_offset_hz - 0.5 * t.chirp_span_hz);
        d.chirp_rad = TWO_PI * t.chirp_span_hz / t.duration_s;
      } else {
        d.omega0_rad = TWO_PI * t.freq_offset_hz;
        d.chirp_rad = 0.0;
      }
      tones.push_back(d);
    }
    Mat8 k = Mat8::Zero();
    for (const auto& [op, rate] : collapse.ops) {
      const Mat8 l = std::sqrt(rate) * op;
      k += l.adjoint() * l;
      const double offdiag = (l - Mat8(l.diagonal().asDiagonal())).cwiseAbs().maxCoeff();
      if (offdiag < 1e-14 * std::max(1.0, l.cwiseAbs().maxCoeff())) {
        diag_ls.push_back(l.diagonal());
      } else {
        gen_ls.push_back(l);
        gen_ldags.push_back(l.adjoint());
      }
    }
    k_full = k;
    k_diag = k.diagonal();
    k_is_diag = (k - Mat8(k.diagonal().asDiagonal())).cwiseAbs().maxCoeff() <
                1e-14 * std::max(1.0, k.cwiseAbs().maxCoeff());
  }

  double max_frequency_hz() const {
    double span = 0.0;
    double lo = h0(0, 0).real(), hi = h0(0, 0).real();
    for (int i = 0; i < 8; ++i) {
      lo = std::min(lo, h0(i, i).real());
      hi = std::max(hi, h0(i, i).real());
    }
    span = (hi - lo) / TWO_PI;
    double f = span;
    for (const auto& t : tones) {
      const double off = std::max(std::abs(t.omega0_rad),
                                  std::abs(t.omega0_rad + t.chirp_rad * t.duration)) / TWO_PI;
      f = std::max(f, span + off + t.amp_rad / TWO_PI);
    }
    return std::max(f, 1.0);
  }

  void eval(double t, const Mat8& rho, Mat8& out) const {
    h = h0;
    for (const auto& td : tones) {
      if (t < td.start || t > td.end) continue;
      const double tau = t - td.start;
      double amp = td.amp_rad;
      if (td.env == DriveTone::Envelope::Gaussian) {
        const double sigma = td.duration / 6.0;
        const double x = (tau - 0.5 * td.duration) / sigma;
        amp *= std::exp(-0.5 * x * x);
      }
      const double phi = td.omega0_rad * tau + 0.5 * td.chirp_rad * tau * tau + td.phase0;
      const Complex c = 0.5 * amp * Complex(std::cos(phi), std::sin(phi));
      // S- has its nonzeros at (i, i+4)
      for (int i = 0; i < 4; ++i) {
        h(i, i + 4) += c;
        h(i + 4, i) += std::conj(c);
      }
    }
    tmp.noalias() = h * rho;
    out.noalias() = rho * h;
    out = Complex(0.0, -1.0) * (tmp - out);

    for (const auto& d : diag_ls) {
      for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) out(i, j) += d(i) * std::conj(d(j)) * rho(i, j);
    }
    for (size_t k = 0; k < gen_ls.size(); ++k) {
      tmp.noalias() = gen_ls[k] * rho;
      out.noalias() += tmp * gen_ldags[k];
    }
    if (k_is_diag) {
      for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
          out(i, j) -= 0.5 * (k_diag(i) + std::conj(k_diag(j))) * rho(i, j);
    } else {
      tmp.noalias() = k_full * rho;
      tmp.noalias() += rho * k_full;
      out -= 0.5 * tmp;
    }
  }
};

// Dormand-Prince 5(4) tableau
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                 E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;
constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;

} // namespace

Trajectory evolve(const Mat8& rho0, const Mat8& h0, const std::vector<DriveTone>& tones,
                  const CollapseSet& collapse, double t0, double t1,
                  const EvolveOptions& opts) {
  if (!(t1 > t0)) throw std::invalid_argument("evolve: need t1 > t0");
  if (!is_hermitian(rho0, 1e-9)) throw std::invalid_argument("evolve: rho0 not Hermitian");
  if (std::abs(rho0.trace().real() - 1.0) > 1e-8)
    throw std::invalid_argument("evolve: rho0 trace must be 1");
  if (!is_hermitian(h0, 1e-12)) throw std::invalid_argument("evolve: h0 not Hermitian");
  collapse.validate();
  for (const auto& t : tones) {
    t.validate();
    if (t.start_s < t0 - 1e-15 || t.start_s + t.duration_s > t1 + 1e-12)
      throw std::invalid_argument("evolve: integration window must cover all tones");
  }

  Rhs rhs;
  rhs.build(h0, tones, collapse);

  double max_step = 1.0 / (20.0 * rhs.max_frequency_hz());
  if (opts.max_step_s > 0.0) max_step = std::min(max_step, opts.max_step_s);

  // integration breakpoints: envelope edges are not smooth
  std::set<double> breaks{t1};
  for (const auto& t : tones) {
    if (t.start_s > t0) breaks.insert(t.start_s);
    if (t.start_s + t.duration_s < t1) breaks.insert(t.start_s + t.duration_s);
  }

  Trajectory traj;
  traj.times.push_back(t0);
  traj.states.push_back(rho0);
  double next_sample = (opts.sample_dt_s > 0.0) ? t0 + opts.sample_dt_s : t1;

  Mat8 y = rho0;
  Mat8 k1, k2, k3, k4, k5, k6, k7, ytmp, ynew, yerr;
  rhs.eval(t0, y, k1);
  double t = t0;
  double hstep = std::min(max_step, (t1 - t0) / 10.0);
  bool k1_fresh = true;

  while (t < t1 - 1e-15 * std::max(1.0, std::abs(t1))) {
    const double next_break = *breaks.upper_bound(t);
    const double target = std::min(next_break, next_sample);
    double h = std::min(hstep, target - t);
    const bool capped = h < hstep;
    if (h <= 0.0) h = std::min(hstep, t1 - t);

    if (!k1_fresh) rhs.eval(t, y, k1);
    bool accepted = false;
    double err = 0.0;
    while (!accepted) {
      ytmp = y + h * (A21 * k1);
      rhs.eval(t + C2 * h, ytmp, k2);
      ytmp = y + h * (A31 * k1 + A32 * k2);
      rhs.eval(t + C3 * h, ytmp, k3);
      ytmp = y + h * (A41 * k1 + A42 * k2 + A43 * k3);
      rhs.eval(t + C4 * h, ytmp, k4);
      ytmp = y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4);
      rhs.eval(t + C5 * h, ytmp, k5);
      ytmp = y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5);
      rhs.eval(t + h, ytmp, k6);
      ynew = y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
      rhs.eval(t + h, ynew, k7);
      yerr = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);

      err = 0.0;
      for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
          const double sc =
              opts.atol + opts.rtol * std::max(std::abs(y(i, j)), std::abs(ynew(i, j)));
          const double e = std::abs(yerr(i, j)) / sc;
          err += e * e;
        }
      }
      err = std::sqrt(err / 64.0);

      double factor = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
      factor = std::clamp(factor, 0.2, 5.0);
      if (err <= 1.0) {
        accepted = true;
        t += h;
        y = 0.5 * (ynew + ynew.adjoint().eval());
        k1 = k7;
        k1_fresh = true;
        // boundary-capped steps must not shrink the stored step size
        const double natural = std::min(max_step, h * factor);
        hstep = capped ? std::max(hstep, natural) : natural;
      } else {
        h *= factor;
        if (h < 1e-16 * std::max(1.0, std::abs(t)))
          throw IntegrationError("evolve: step size underflow", t, err);
      }
    }

    const bool at_sample = opts.sample_dt_s > 0.0 && t >= next_sample - 1e-15;
    if (at_sample) {
      traj.times.push_back(t);
      traj.states.push_back(y);
      while (next_sample <= t + 1e-15) next_sample += opts.sample_dt_s;
    }
  }

  if (traj.times.back() < t1 - 1e-15) {
    traj.times.push_back(t1);
    traj.states.push_back(y);
  } else {
    traj.times.back() = t1;
    traj.states.back() = y;
  }
  return traj;
}

EffectiveRamanModel effective_raman_hamiltonian(const SpinSystemParams& params,
                                                const RamanDriveCondition& cond,
                                                double drive_delta_hz, double phase_rad,
                                                double clock_s_hz) {
  const int t = cond.target;
  const int s = cond.spectator();

  const double split_t = 0.5 * (nuclear_splitting(params, t, false, false) +
                                nuclear_splitting(params, t, false, true));
  const double split_s = 0.5 * (nuclear_splitting(params, s, false, false) +
                                nuclear_splitting(params, s, false, true));
  const AcZeemanResult ac = ac_zeeman_shifts(params, cond);
  const double om_dn = raman_rabi(params, t, cond, false);
  const double om_up = raman_rabi(params, t, cond, true);
  const double om_mean = 0.5 * (om_up + om_dn);
  const double om_diff = 0.5 * (om_up - om_dn);

  if (clock_s_hz < 0.0) clock_s_hz = split_s;

  const Mat4 axis = std::cos(phase_rad) * ops::Ix4(t) + std::sin(phase_rad) * ops::Iy4(t);
  Mat4 h = om_mean * axis + 2.0 * om_diff * (axis * ops::Iz4(s));
  h -= (split_t + ac.delta_ac_hz - drive_delta_hz) * ops::Iz4(t);
  h -= ac.delta_2qb_hz * (ops::Iz4(t) * ops::Iz4(s));
  h -= (split_s - clock_s_hz) * ops::Iz4(s);
  h += params.C_zz * (ops::Iz4(1) * ops::Iz4(2));

  const FilteredAmplitudes f = filtered_amplitudes(params, cond);
  const double d0 = -params.omega_I_n(t) + 0.5 * params.A_par_n(t);
  const bool ok = (10.0 * f.Omega_A_hz <= std::abs(cond.Delta_hz)) &&
                  (10.0 * f.Omega_B_hz <= std::abs(cond.Delta_hz + d0));

  return {TWO_PI * 0.5 * (h + h.adjoint()).eval(), ok};
}

Mat8 pure_level(int level) {
  Mat8 rho = Mat8::Zero();
  rho(level, level) = Complex(1.0);
  return rho;
}

Mat8 nuclear_state_with_electron_down(const Mat4& rho_nuclear) {
  Mat8 rho = Mat8::Zero();
  rho.block<4, 4>(0, 0) = rho_nuclear;
  return rho;
}

Mat4 nuclear_block_electron_down(const Mat8& rho) {
  Mat4 blk = rho.block<4, 4>(0, 0);
  const double tr = blk.trace().real();
  if (tr <= 0.0) throw std::runtime_error("nuclear_block_electron_down: zero population");
  return blk / tr;
}

} // namespace spinreg

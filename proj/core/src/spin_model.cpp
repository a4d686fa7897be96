#include "spinreg/spin_model.hpp"

#include <cmath>
#include <stdexcept>

#include "spinreg/operators.hpp"

namespace spinreg {

Mat8 build_static_hamiltonian(const SpinSystemParams& params) {
  params.validate();
  Mat8 h = params.omega_S * ops::Sz();
  for (int n = 1; n <= 2; ++n) {
    h += params.omega_I_n(n) * ops::Iz(n);
    h += params.A_par_n(n) * (ops::Sz() * ops::Iz(n));
    h += params.A_perp_n(n) * (ops::Sz() * ops::Ix(n));
  }
  h += params.C_zz * (ops::Iz(1) * ops::Iz(2));
  return TWO_PI * h;
}

Mat8 build_rotating_hamiltonian(const SpinSystemParams& params, double frame_ref_hz) {
  SpinSystemParams p = params;
  p.omega_S = params.omega_S - frame_ref_hz;
  return build_static_hamiltonian(p);
}

LabeledLevels labeled_levels(const SpinSystemParams& params) {
  // diagonalize with omega_S gauged out; the electron frequency enters the
  // labeled energies as +/- omega_S/2 afterwards, which keeps the eigensolver
  // away from ~GHz vs ~kHz scale mixing artifacts
  SpinSystemParams p = params;
  p.omega_S = 0.0;
  Mat8 h = build_static_hamiltonian(p) / TWO_PI;
  Eigen::SelfAdjointEigenSolver<Mat8> es(h);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");

  LabeledLevels out;
  out.eigenvectors = Mat8::Zero();
  std::array<bool, 8> used{};
  for (int k = 0; k < 8; ++k) {
    int best = -1;
    double best_ov = -1.0;
    for (int i = 0; i < 8; ++i) {
      const double ov = std::norm(es.eigenvectors()(i, k));
      if (!used[i] && ov > best_ov) {
        best_ov = ov;
        best = i;
      }
    }
    used[best] = true;
    const double sgn = (best & 4) ? 0.5 : -0.5;
    out.energy_hz[best] = es.eigenvalues()(k) + sgn * params.omega_S;
    out.eigenvectors.col(best) = es.eigenvectors().col(k);
  }
  return out;
}

ElectronLines electron_transition_frequencies(const SpinSystemParams& params) {
  const LabeledLevels lv = labeled_levels(params);
  auto f = [&lv](int n1, int n2) {
    return lv.energy_hz[4 + 2 * n1 + n2] - lv.energy_hz[2 * n1 + n2];
  };
  return ElectronLines{f(1, 1), f(1, 0), f(0, 1), f(0, 0)};
}

double nuclear_splitting(const SpinSystemParams& params, int nucleus,
                         bool electron_up, bool spectator_up) {
  if (nucleus != 1 && nucleus != 2) throw std::invalid_argument("nucleus must be 1 or 2");
  const LabeledLevels lv = labeled_levels(params);
  const int e = electron_up ? 1 : 0;
  int i_dn, i_up;
  if (nucleus == 1) {
    i_dn = 4 * e + 0 + spectator_up;
    i_up = 4 * e + 2 + spectator_up;
  } else {
    i_dn = 4 * e + 2 * spectator_up + 0;
    i_up = 4 * e + 2 * spectator_up + 1;
  }
  return lv.energy_hz[i_dn] - lv.energy_hz[i_up];
}

double purcell_rate(double g0_hz, double kappa_hz) {
  if (!(kappa_hz > 0.0)) throw std::invalid_argument("purcell_rate: kappa must be > 0");
  if (!std::isfinite(g0_hz) || !std::isfinite(kappa_hz))
    throw std::invalid_argument("purcell_rate: non-finite input");
  const double g0 = TWO_PI * g0_hz;
  const double kappa = TWO_PI * kappa_hz;
  return 4.0 * g0 * g0 / kappa;
}

SidebandBranching sideband_branching(const SpinSystemParams& params, int nucleus) {
  params.validate();
  const double w = params.omega_I_n(nucleus);
  if (w == 0.0) throw std::invalid_argument("sideband_branching: omega_I is zero");
  const double r = params.A_perp_n(nucleus) / (2.0 * w);
  return {r, r * r};
}

} // namespace spinreg

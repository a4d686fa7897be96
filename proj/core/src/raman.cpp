#include "spinreg/raman.hpp"

#include <cmath>
#include <stdexcept>

namespace spinreg {

namespace {

double guarded_inverse(double x_hz, const char* name) {
  if (std::abs(x_hz) < kSingularityGuardHz) throw SingularityError(name, x_hz);
  return 1.0 / x_hz;
}

// two-path Raman bracket 1/D - 1/(D + zeta0) for branch detuning D
double raman_bracket(double D_hz, double omega_I_hz, double A_par_hz) {
  const double zeta0 = -omega_I_hz - 0.5 * A_par_hz;
  return guarded_inverse(D_hz, "Delta") - guarded_inverse(D_hz + zeta0, "Delta + zeta0");
}

// resonance displacement of the target transition for branch detuning D:
// light shifts of the two ground levels from both tones acting on the two
// strong electron transitions
double branch_shift(double D_hz, double Omega_A, double Omega_B, double omega_I_hz,
                    double A_par_hz) {
  const double d0 = -omega_I_hz + 0.5 * A_par_hz;
  const double z0 = -omega_I_hz - 0.5 * A_par_hz;
  const double tA = guarded_inverse(D_hz, "Delta") -
                    guarded_inverse(D_hz + z0 - d0, "Delta + zeta0 - delta0");
  const double tB = guarded_inverse(D_hz + d0, "Delta + delta0") -
                    guarded_inverse(D_hz + z0, "Delta + zeta0");
  return 0.25 * Omega_A * Omega_A * tA + 0.25 * Omega_B * Omega_B * tB;
}

void check_condition(const SpinSystemParams& params, const RamanDriveCondition& cond) {
  params.validate();
  if (cond.target != 1 && cond.target != 2)
    throw std::invalid_argument("RamanDriveCondition.target must be 1 or 2");
  if (!std::isfinite(cond.Delta_hz) || !std::isfinite(cond.Omega_eA_hz) ||
      !std::isfinite(cond.Omega_eB_hz))
    throw std::invalid_argument("RamanDriveCondition has non-finite fields");
  if (cond.Omega_eA_hz < 0.0 || cond.Omega_eB_hz < 0.0)
    throw std::invalid_argument("RamanDriveCondition amplitudes must be >= 0");
}

} // namespace

FilteredAmplitudes filtered_amplitudes(double Omega_eA_hz, double Omega_eB_hz,
                                       double Delta_hz, double omega_I_hz,
                                       double kappa_hz) {
  if (!(kappa_hz > 0.0)) throw std::invalid_argument("filtered_amplitudes: kappa must be > 0");
  auto factor = [kappa_hz](double off) {
    return 1.0 / std::sqrt(1.0 + 4.0 * off * off / (kappa_hz * kappa_hz));
  };
  return {Omega_eA_hz * factor(Delta_hz), Omega_eB_hz * factor(Delta_hz - omega_I_hz)};
}

FilteredAmplitudes filtered_amplitudes(const SpinSystemParams& params,
                                       const RamanDriveCondition& cond) {
  return filtered_amplitudes(cond.Omega_eA_hz, cond.Omega_eB_hz, cond.Delta_hz,
                             params.omega_I_n(cond.target), params.kappa);
}

double raman_rabi(const SpinSystemParams& params, int nucleus,
                  const RamanDriveCondition& cond, bool spectator_up) {
  check_condition(params, cond);
  if (nucleus != cond.target)
    throw std::invalid_argument("raman_rabi: nucleus must match cond.target");
  const double wI = params.omega_I_n(nucleus);
  const double At = params.A_par_n(nucleus);
  const double As = params.A_par_n(cond.spectator());
  const double D = cond.Delta_hz + (spectator_up ? As : 0.0);
  const FilteredAmplitudes f = filtered_amplitudes(params, cond);
  const double prefactor = params.A_perp_n(nucleus) / (2.0 * wI);
  return prefactor * 0.5 * f.Omega_A_hz * f.Omega_B_hz * raman_bracket(D, wI, At);
}

double invert_for_aperp(double Omega_Ram_measured_hz, const SpinSystemParams& params,
                        const RamanDriveCondition& cond, bool spectator_up) {
  SpinSystemParams unit = params;
  unit.A_perp[cond.target - 1] = 1.0;
  const double per_aperp = raman_rabi(unit, cond.target, cond, spectator_up);
  if (per_aperp == 0.0)
    throw std::invalid_argument("invert_for_aperp: drive condition gives zero rate");
  return Omega_Ram_measured_hz / per_aperp;
}

AcZeemanResult ac_zeeman_shifts(const SpinSystemParams& params,
                                const RamanDriveCondition& cond) {
  check_condition(params, cond);
  const double wI = params.omega_I_n(cond.target);
  const double At = params.A_par_n(cond.target);
  const double As = params.A_par_n(cond.spectator());
  const FilteredAmplitudes f = filtered_amplitudes(params, cond);
  const double dn = branch_shift(cond.Delta_hz, f.Omega_A_hz, f.Omega_B_hz, wI, At);
  const double up = branch_shift(cond.Delta_hz + As, f.Omega_A_hz, f.Omega_B_hz, wI, At);
  return {up, dn, 0.5 * (up + dn), up - dn};
}

double unconditional_detuning(const SpinSystemParams& params, int target) {
  params.validate();
  if (target != 1 && target != 2)
    throw std::invalid_argument("unconditional_detuning: target must be 1 or 2");
  const double wI = params.omega_I_n(target);
  const double At = params.A_par_n(target);
  const double As = params.A_par_n(target == 1 ? 2 : 1);
  if (wI >= 0.0)
    throw std::invalid_argument("unconditional_detuning: expects omega_I < 0");

  auto cubic = [&](double d) {
    return d * (d - At) * (d - At + 2.0 * As) + (d - wI) * (d - wI) * (d + 2.0 * As - wI);
  };
  double lo = wI + 1.0;
  double hi = -1.0;
  double flo = cubic(lo);
  double fhi = cubic(hi);
  if (flo * fhi > 0.0)
    throw std::runtime_error("unconditional_detuning: no sign change on [omega_I, 0]");
  for (int it = 0; it < 200 && hi - lo > 1e-9; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = cubic(mid);
    if (fm == 0.0) { lo = hi = mid; break; }
    if (flo * fm < 0.0) { hi = mid; fhi = fm; }
    else { lo = mid; flo = fm; }
  }
  double root = 0.5 * (lo + hi);
  // one Newton polish
  const double h = 1e-3;
  const double deriv = (cubic(root + h) - cubic(root - h)) / (2.0 * h);
  if (deriv != 0.0) root -= cubic(root) / deriv;
  return root;
}

} // namespace spinreg

#ifndef SPINREG_FIT_HPP
#define SPINREG_FIT_HPP

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace spinreg {

struct FitResult {
  Eigen::VectorXd params;
  double rms_residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Damped Gauss-Newton least squares with numerical Jacobian. Deterministic;
// needs a sensible initial guess (all call sites have one).
FitResult fit_least_squares(
    const std::function<double(const Eigen::VectorXd&, double)>& model,
    const std::vector<double>& x, const std::vector<double>& y,
    const Eigen::VectorXd& p0, int max_iter = 200);

// y = p0 * exp(-p1 * x) + p2
FitResult fit_exponential_decay(const std::vector<double>& x, const std::vector<double>& y,
                                double amp0, double rate0, double offset0);

// y = p0 * exp(-p3 * x) * cos(2 pi p1 x + p2) + p4
FitResult fit_decaying_cosine(const std::vector<double>& x, const std::vector<double>& y,
                              double amp0, double freq0, double phase0, double rate0,
                              double offset0);

// y = p0 * cos(2 pi p1 x + p2) + p3
FitResult fit_cosine(const std::vector<double>& x, const std::vector<double>& y,
                     double amp0, double freq0, double phase0, double offset0);

// Two-level line shape of a fixed-duration drive pulse swept across resonance:
//   y = p0 * (W^2 / (W^2 + d^2)) * sin^2(pi sqrt(W^2 + d^2) * T),  d = x - p1
// with W = p2 the on-resonance Rabi rate and T the pulse duration (fixed).
// Used to locate resonance centers in simulated spectroscopy.
FitResult fit_rabi_line(const std::vector<double>& x, const std::vector<double>& y,
                        double pulse_duration_s, double amp0, double center0,
                        double rabi0);

// index of maximum plus parabolic refinement of the peak position
double parabolic_peak(const std::vector<double>& x, const std::vector<double>& y);

} // namespace spinreg

#endif

#include "spinreg/fit.hpp"

#include <cmath>
#include <stdexcept>

#include "spinreg/types.hpp"

namespace spinreg {

FitResult fit_least_squares(
    const std::function<double(const Eigen::VectorXd&, double)>& model,
    const std::vector<double>& x, const std::vector<double>& y,
    const Eigen::VectorXd& p0, int max_iter) {
  if (x.size() != y.size() || x.empty())
    throw std::invalid_argument("fit_least_squares: bad data");
  const int n = static_cast<int>(x.size());
  const int m = static_cast<int>(p0.size());
  if (n < m) throw std::invalid_argument("fit_least_squares: fewer points than parameters");

  Eigen::VectorXd p = p0;
  auto residuals = [&](const Eigen::VectorXd& q) {
    Eigen::VectorXd r(n);
    for (int i = 0; i < n; ++i) r(i) = y[i] - model(q, x[i]);
    return r;
  };

  Eigen::VectorXd r = residuals(p);
  double cost = r.squaredNorm();
  double lambda = 1e-6;
  FitResult out;

  for (int it = 0; it < max_iter; ++it) {
    out.iterations = it + 1;
    Eigen::MatrixXd jac(n, m);
    for (int j = 0; j < m; ++j) {
      const double h = 1e-7 * std::max(1.0, std::abs(p(j)));
      Eigen::VectorXd pp = p;
      pp(j) += h;
      Eigen::VectorXd rp = residuals(pp);
      jac.col(j) = (r - rp) / h;   // d model / d p_j
    }
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtr = jac.transpose() * r;
    bool improved = false;
    for (int tries = 0; tries < 12; ++tries) {
      Eigen::MatrixXd a = jtj;
      a.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-12);
      const Eigen::VectorXd step = a.ldlt().solve(jtr);
      const Eigen::VectorXd pnew = p + step;
      const Eigen::VectorXd rnew = residuals(pnew);
      const double cnew = rnew.squaredNorm();
      if (cnew < cost) {
        const double rel = (cost - cnew) / std::max(cost, 1e-300);
        p = pnew;
        r = rnew;
        cost = cnew;
        lambda = std::max(lambda * 0.3, 1e-12);
        improved = true;
        if (rel < 1e-14) out.converged = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!improved || out.converged) {
      out.converged = true;
      break;
    }
  }
  out.params = p;
  out.rms_residual = std::sqrt(cost / n);
  return out;
}

FitResult fit_exponential_decay(const std::vector<double>& x, const std::vector<double>& y,
                                double amp0, double rate0, double offset0) {
  Eigen::VectorXd p0(3);
  p0 << amp0, rate0, offset0;
  return fit_least_squares(
      [](const Eigen::VectorXd& p, double t) { return p(0) * std::exp(-p(1) * t) + p(2); },
      x, y, p0);
}

FitResult fit_decaying_cosine(const std::vector<double>& x, const std::vector<double>& y,
                              double amp0, double freq0, double phase0, double rate0,
                              double offset0) {
  Eigen::VectorXd p0(5);
  p0 << amp0, freq0, phase0, rate0, offset0;
  return fit_least_squares(
      [](const Eigen::VectorXd& p, double t) {
        return p(0) * std::exp(-p(3) * t) * std::cos(TWO_PI * p(1) * t + p(2)) + p(4);
      },
      x, y, p0);
}

FitResult fit_cosine(const std::vector<double>& x, const std::vector<double>& y,
                     double amp0, double freq0, double phase0, double offset0) {
  Eigen::VectorXd p0(4);
  p0 << amp0, freq0, phase0, offset0;
  return fit_least_squares(
      [](const Eigen::VectorXd& p, double t) {
        return p(0) * std::cos(TWO_PI * p(1) * t + p(2)) + p(3);
      },
      x, y, p0);
}

FitResult fit_rabi_line(const std::vector<double>& x, const std::vector<double>& y,
                        double pulse_duration_s, double amp0, double center0,
                        double rabi0) {
  Eigen::VectorXd p0(3);
  p0 << amp0, center0, rabi0;
  return fit_least_squares(
      [pulse_duration_s](const Eigen::VectorXd& p, double f) {
        const double d = f - p(1);
        const double w2 = p(2) * p(2);
        const double g2 = w2 + d * d;
        const double s = std::sin(M_PI * std::sqrt(g2) * pulse_duration_s);
        return p(0) * (w2 / g2) * s * s;
      },
      x, y, p0);
}

double parabolic_peak(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3)
    throw std::invalid_argument("parabolic_peak: need >= 3 points");
  size_t imax = 0;
  for (size_t i = 1; i < y.size(); ++i)
    if (y[i] > y[imax]) imax = i;
  if (imax == 0) imax = 1;
  if (imax == y.size() - 1) imax = y.size() - 2;
  const double x1 = x[imax - 1], x2 = x[imax], x3 = x[imax + 1];
  const double y1 = y[imax - 1], y2 = y[imax], y3 = y[imax + 1];
  const double den = x1 * (y2 - y3) + x2 * (y3 - y1) + x3 * (y1 - y2);
  if (den == 0.0) return x2;
  const double num = x1 * x1 * (y2 - y3) + x2 * x2 * (y3 - y1) + x3 * x3 * (y1 - y2);
  return 0.5 * num / den;
}

} // namespace spinreg

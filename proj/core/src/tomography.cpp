#include "spinreg/tomography.hpp"

#include <cmath>
#include <stdexcept>

#include "spinreg/fit.hpp"
#include "spinreg/operators.hpp"

namespace spinreg {

std::vector<TomographySetting> default_settings() {
  std::vector<TomographySetting> out;
  const PreRotation rs[3] = {PreRotation::Id, PreRotation::X90, PreRotation::Y90};
  for (auto r1 : rs)
    for (auto r2 : rs) out.push_back({r1, r2, {}});
  return out;
}

namespace {

Mat4 single_rotation(int nucleus, PreRotation r) {
  switch (r) {
    case PreRotation::Id: return Mat4::Identity();
    case PreRotation::X90: return ops::rotation4(nucleus, M_PI / 2, 0.0);
    case PreRotation::Y90: return ops::rotation4(nucleus, M_PI / 2, M_PI / 2);
  }
  throw std::logic_error("unreachable");
}

// integrator output can carry eigenvalue drift of order the step tolerance;
// anything beyond that is a genuinely unphysical input
void check_state(const Mat4& rho, const char* who) {
  if (!is_hermitian(rho, 1e-9)) throw std::invalid_argument(std::string(who) + ": not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat4> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-6)
    throw std::invalid_argument(std::string(who) + ": not positive semidefinite");
  if (std::abs(rho.trace().real() - 1.0) > 1e-6)
    throw std::invalid_argument(std::string(who) + ": trace must be 1");
}

} // namespace

Mat4 setting_unitary(PreRotation q1, PreRotation q2) {
  return single_rotation(1, q1) * single_rotation(2, q2);
}

std::array<double, 4> setting_probabilities(const Mat4& rho, PreRotation q1,
                                            PreRotation q2) {
  const Mat4 u = setting_unitary(q1, q2);
  const Mat4 rotated = u * rho * u.adjoint();
  std::array<double, 4> p{};
  for (int o = 0; o < 4; ++o) p[o] = std::max(0.0, rotated(o, o).real());
  return p;
}

std::vector<TomographySetting> simulate_tomography(const Mat4& rho,
                                                   double shots_per_setting,
                                                   std::mt19937_64* rng) {
  check_state(rho, "simulate_tomography");
  auto settings = default_settings();
  for (auto& s : settings) {
    const auto p = setting_probabilities(rho, s.q1, s.q2);
    if (shots_per_setting <= 0.0) {
      for (int o = 0; o < 4; ++o) s.counts[o] = p[o];
    } else {
      if (!rng) throw std::invalid_argument("simulate_tomography: sampling needs an rng");
      const int n = static_cast<int>(shots_per_setting);
      std::discrete_distribution<int> d(p.begin(), p.end());
      for (int k = 0; k < n; ++k) s.counts[static_cast<int>(d(*rng))] += 1.0;
    }
  }
  return settings;
}

namespace {

Mat4 basis_projector4(int p) {
  Mat4 m = Mat4::Zero();
  m(p, p) = Complex(1.0);
  return m;
}

// measurement operators of one setting, possibly folded with the confusion
// matrix: E_m = sum_p T(m,p) U^dag |p><p| U
std::array<Mat4, 4> setting_povm(const TomographySetting& s,
                                 const Eigen::Matrix4d* T) {
  const Mat4 u = setting_unitary(s.q1, s.q2);
  std::array<Mat4, 4> e;
  for (int m = 0; m < 4; ++m) {
    Mat4 acc = Mat4::Zero();
    for (int p = 0; p < 4; ++p) {
      const double w = T ? (*T)(m, p) : (m == p ? 1.0 : 0.0);
      if (w == 0.0) continue;
      acc += w * (u.adjoint() * basis_projector4(p) * u);
    }
    e[m] = acc;
  }
  return e;
}

// Accepts tables whose columns sum close to (but not exactly) 1, as rounded
// published confusion matrices do, and renormalizes them.
Eigen::Matrix4d normalized_T(const Eigen::Matrix4d& T) {
  Eigen::Matrix4d t = T;
  for (int c = 0; c < 4; ++c) {
    const double s = t.col(c).sum();
    if (std::abs(s - 1.0) > 0.05)
      throw std::invalid_argument("T matrix columns must sum to ~1");
    if (t.col(c).minCoeff() < -1e-12)
      throw std::invalid_argument("T matrix entries must be >= 0");
    t.col(c) /= s;
  }
  Eigen::JacobiSVD<Eigen::Matrix4d> svd(t);
  const double smin = svd.singularValues().minCoeff();
  if (smin <= 0.0 || svd.singularValues().maxCoeff() / smin > 1e6)
    throw std::invalid_argument("T matrix is singular or ill-conditioned (cond > 1e6)");
  return t;
}

} // namespace

TomographyResult mle_reconstruct(const std::vector<TomographySetting>& settings,
                                 const std::optional<Eigen::Matrix4d>& T,
                                 const TomographyOptions& opts) {
  if (settings.size() < 9)
    throw std::invalid_argument("mle_reconstruct: need at least 9 settings");

  // working copy; PreCorrect mode rewrites each setting's distribution
  std::vector<TomographySetting> work = settings;
  Eigen::Matrix4d t_norm;
  const Eigen::Matrix4d* t_model = nullptr;
  if (T && opts.spam_mode == SpamMode::PreCorrect) {
    for (auto& s : work) {
      const double n = s.counts[0] + s.counts[1] + s.counts[2] + s.counts[3];
      if (n <= 0.0) throw std::invalid_argument("mle_reconstruct: empty setting");
      std::array<double, 4> p;
      for (int o = 0; o < 4; ++o) p[o] = s.counts[o] / n;
      p = spam_correct(p, *T);
      for (int o = 0; o < 4; ++o) s.counts[o] = n * p[o];
    }
  } else if (T && opts.spam_mode == SpamMode::InModel) {
    t_norm = normalized_T(*T);
    t_model = &t_norm;
  }

  // POVM per setting, plus informational-completeness rank check
  std::vector<std::array<Mat4, 4>> povms;
  Eigen::MatrixXd span(work.size() * 4, 16);
  for (size_t si = 0; si < work.size(); ++si) {
    povms.push_back(setting_povm(work[si], t_model));
    for (int m = 0; m < 4; ++m) {
      const Mat4& e = povms.back()[m];
      // real parameterization of the Hermitian operator
      int col = 0;
      Eigen::Matrix<double, 16, 1> v;
      for (int i = 0; i < 4; ++i) v(col++) = e(i, i).real();
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
          v(col++) = e(i, j).real();
          v(col++) = e(i, j).imag();
        }
      span.row(si * 4 + m) = v.transpose();
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(span);
  const double rank_tol = 1e-10 * svd.singularValues().maxCoeff();
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > rank_tol) ++rank;
  if (rank < 16)
    throw std::invalid_argument(
        "mle_reconstruct: setting set is not informationally complete");

  double n_total = 0.0;
  for (const auto& s : work)
    n_total += s.counts[0] + s.counts[1] + s.counts[2] + s.counts[3];
  if (n_total <= 0.0) throw std::invalid_argument("mle_reconstruct: no counts");

  auto loglik = [&](const Mat4& rho) {
    double ll = 0.0;
    for (size_t si = 0; si < work.size(); ++si) {
      for (int m = 0; m < 4; ++m) {
        const double n = work[si].counts[m];
        if (n <= 0.0) continue;
        const double p = std::max((povms[si][m] * rho).trace().real(), 1e-300);
        ll += n * std::log(p);
      }
    }
    return ll;
  };
  auto r_op = [&](const Mat4& rho) {
    Mat4 r = Mat4::Zero();
    for (size_t si = 0; si < work.size(); ++si) {
      for (int m = 0; m < 4; ++m) {
        const double n = work[si].counts[m];
        if (n <= 0.0) continue;
        const double p = std::max((povms[si][m] * rho).trace().real(), 1e-300);
        r += (n / p) * povms[si][m];
      }
    }
    return Mat4((r / n_total).eval());
  };

  TomographyResult out;
  Mat4 rho = Mat4::Identity() / 4.0;
  double ll = loglik(rho);
  out.min_iteration_gain = 0.0;

  for (int it = 0; it < opts.max_iterations; ++it) {
    out.iterations = it + 1;
    const Mat4 r = r_op(rho);
    double eps = opts.dilution;
    Mat4 cand;
    double ll_new = ll;
    for (int tries = 0; tries < 40; ++tries) {
      const Mat4 g = (1.0 - eps) * Mat4::Identity() + eps * r;
      cand = g * rho * g.adjoint();
      cand /= cand.trace().real();
      cand = 0.5 * (cand + cand.adjoint().eval());
      ll_new = loglik(cand);
      if (ll_new >= ll - 1e-12 * std::abs(ll)) break;  // monotone step found
      eps *= 0.5;
    }
    const double gain = ll_new - ll;
    out.min_iteration_gain = std::min(out.min_iteration_gain, gain);
    rho = cand;
    ll = ll_new;
    if (gain >= 0.0 && gain < opts.loglik_tol) {
      out.converged = true;
      break;
    }
  }

  out.rho = rho;
  out.log_likelihood = ll;
  return out;
}

double fidelity(const Mat4& rho, const Mat4& rho_target) {
  check_state(rho, "fidelity");
  check_state(rho_target, "fidelity target");
  Eigen::SelfAdjointEigenSolver<Mat4> es(rho_target);
  Mat4 sq = Mat4::Zero();
  for (int k = 0; k < 4; ++k) {
    const double lam = std::max(0.0, es.eigenvalues()(k));
    sq += std::sqrt(lam) * es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
  }
  const Mat4 m = sq * rho * sq;
  Eigen::SelfAdjointEigenSolver<Mat4> em(m);
  double tr = 0.0;
  for (int k = 0; k < 4; ++k) tr += std::sqrt(std::max(0.0, em.eigenvalues()(k)));
  return tr * tr;
}

std::array<double, 4> spam_correct(const std::array<double, 4>& p,
                                   const Eigen::Matrix4d& T) {
  const Eigen::Matrix4d t = normalized_T(T);
  Eigen::Vector4d v(p[0], p[1], p[2], p[3]);
  Eigen::Vector4d q = t.fullPivLu().solve(v);
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    q(i) = std::min(1.0, std::max(0.0, q(i)));
    sum += q(i);
  }
  if (sum <= 0.0) throw std::runtime_error("spam_correct: clipped distribution is empty");
  return {q(0) / sum, q(1) / sum, q(2) / sum, q(3) / sum};
}

Vec4 bell_state(bool even_parity, double phase) {
  Vec4 v = Vec4::Zero();
  const Complex ph = std::exp(Complex(0.0, phase)) / std::sqrt(2.0);
  if (even_parity) {
    v(nuclear_index(false, false)) = 1.0 / std::sqrt(2.0);
    v(nuclear_index(true, true)) = ph;
  } else {
    v(nuclear_index(false, true)) = 1.0 / std::sqrt(2.0);
    v(nuclear_index(true, false)) = ph;
  }
  return v;
}

BellCoherenceFit bell_coherence_observable(const std::vector<double>& delays_s,
                                           const std::vector<std::array<double, 4>>& populations,
                                           double freq_guess_hz) {
  if (delays_s.size() != populations.size() || delays_s.size() < 5)
    throw std::invalid_argument("bell_coherence_observable: need >= 5 delay points");
  std::vector<double> sig(delays_s.size());
  for (size_t i = 0; i < delays_s.size(); ++i) {
    const auto& p = populations[i];
    sig[i] = (p[nuclear_index(false, false)] + p[nuclear_index(true, true)]) -
             (p[nuclear_index(false, true)] + p[nuclear_index(true, false)]);
  }
  double amp0 = 0.0;
  for (double v : sig) amp0 = std::max(amp0, std::abs(v));
  const FitResult fit = fit_decaying_cosine(delays_s, sig, amp0 > 0 ? amp0 : 1.0,
                                            freq_guess_hz, 0.0, 0.0, 0.0);
  BellCoherenceFit out;
  out.amplitude = fit.params(0);
  out.freq_hz = fit.params(1);
  out.phase = fit.params(2);
  out.decay_rate_per_s = fit.params(3);
  out.rms_residual = fit.rms_residual;
  out.converged = fit.converged;
  return out;
}

} // namespace spinreg

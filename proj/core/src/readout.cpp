#include "spinreg/readout.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "spinreg/spin_model.hpp"

namespace spinreg {

void DetectionParams::validate() const {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("DetectionParams: eta in [0,1]");
  if (dark_rate < 0.0) throw std::invalid_argument("DetectionParams: dark_rate >= 0");
  if (!(t_int > 0.0)) throw std::invalid_argument("DetectionParams: t_int > 0");
  if (n_reps < 0) throw std::invalid_argument("DetectionParams: n_reps >= 0");
  if (!(pi_error >= 0.0 && pi_error <= 1.0))
    throw std::invalid_argument("DetectionParams: pi_error in [0,1]");
  if (cross_relax_scale < 0.0)
    throw std::invalid_argument("DetectionParams: cross_relax_scale >= 0");
}

double cross_relaxation_probability(const SpinSystemParams& params, int nucleus,
                                    const DetectionParams& det) {
  const SidebandBranching br = sideband_branching(params, nucleus);
  const double off = params.omega_I_n(nucleus);
  const double filter = 1.0 / (1.0 + 4.0 * off * off / (params.kappa * params.kappa));
  return det.cross_relax_scale * br.probability_scale * filter;
}

namespace {

// count array order: C_uu, C_du, C_ud, C_dd; the interleaved pulse cell
// addresses the lines in this order
constexpr NuclearState kFreqOrder[4] = {NuclearState::uu, NuclearState::du,
                                        NuclearState::ud, NuclearState::dd};

} // namespace

ShotRecord simulate_readout_shot(NuclearState initial, const SpinSystemParams& params,
                                 const DetectionParams& det, std::mt19937_64& rng) {
  params.validate();
  det.validate();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::poisson_distribution<int> dark(det.dark_rate * det.t_int);

  const double p_flip1 = cross_relaxation_probability(params, 1, det);
  const double p_flip2 = cross_relaxation_probability(params, 2, det);

  ShotRecord rec;
  rec.true_state = initial;
  int state = static_cast<int>(initial);  // 2*n1 + n2

  for (int rep = 0; rep < det.n_reps; ++rep) {
    for (int k = 0; k < 4; ++k) {
      const bool matched = (state == static_cast<int>(kFreqOrder[k]));
      if (matched && u(rng) >= det.pi_error) {
        if (u(rng) < det.eta) ++rec.counts[k];
        // the excited electron can decay through a sideband, flipping a nucleus
        if (u(rng) < p_flip1) state ^= 2;
        if (u(rng) < p_flip2) state ^= 1;
      }
      if (det.dark_rate > 0.0) rec.counts[k] += dark(rng);
    }
  }

  rec.dx = (rec.counts[0] + rec.counts[2]) - (rec.counts[1] + rec.counts[3]);
  rec.dy = (rec.counts[0] + rec.counts[1]) - (rec.counts[2] + rec.counts[3]);
  rec.post_state = static_cast<NuclearState>(state);
  return rec;
}

namespace {

double sq_dist(double ax, double ay, double bx, double by) {
  return (ax - bx) * (ax - bx) + (ay - by) * (ay - by);
}

} // namespace

Classifier classify(const std::vector<ShotRecord>& training, uint64_t seed) {
  if (training.size() < 4) throw std::runtime_error("classify: need at least 4 records");

  std::vector<std::array<double, 2>> pts(training.size());
  for (size_t i = 0; i < training.size(); ++i)
    pts[i] = {static_cast<double>(training[i].dx), static_cast<double>(training[i].dy)};

  double best_sse = std::numeric_limits<double>::infinity();
  std::array<std::array<double, 2>, 4> best_centroids{};
  std::vector<int> best_assign(pts.size());

  for (int restart = 0; restart < 10; ++restart) {
    std::mt19937_64 rng(seed + static_cast<uint64_t>(restart));
    std::uniform_int_distribution<size_t> pick(0, pts.size() - 1);
    std::array<std::array<double, 2>, 4> c{};
    // choose 4 distinct starting points
    std::array<size_t, 4> idx{};
    for (int k = 0; k < 4; ++k) {
      size_t cand = pick(rng);
      for (int guard = 0; guard < 1000; ++guard) {
        bool dup = false;
        for (int j = 0; j < k; ++j)
          if (pts[idx[j]] == pts[cand]) dup = true;
        if (!dup) break;
        cand = pick(rng);
      }
      idx[k] = cand;
      c[k] = pts[cand];
    }

    std::vector<int> assign_idx(pts.size(), -1);
    for (int iter = 0; iter < 100; ++iter) {
      bool changed = false;
      for (size_t i = 0; i < pts.size(); ++i) {
        int bk = 0;
        double bd = sq_dist(pts[i][0], pts[i][1], c[0][0], c[0][1]);
        for (int k = 1; k < 4; ++k) {
          const double d = sq_dist(pts[i][0], pts[i][1], c[k][0], c[k][1]);
          if (d < bd) { bd = d; bk = k; }
        }
        if (assign_idx[i] != bk) { assign_idx[i] = bk; changed = true; }
      }
      std::array<double, 4> nx{}, ny{}, n{};
      for (size_t i = 0; i < pts.size(); ++i) {
        nx[assign_idx[i]] += pts[i][0];
        ny[assign_idx[i]] += pts[i][1];
        n[assign_idx[i]] += 1.0;
      }
      for (int k = 0; k < 4; ++k)
        if (n[k] > 0) c[k] = {nx[k] / n[k], ny[k] / n[k]};
      if (!changed) break;
    }

    double sse = 0.0;
    for (size_t i = 0; i < pts.size(); ++i)
      sse += sq_dist(pts[i][0], pts[i][1], c[assign_idx[i]][0], c[assign_idx[i]][1]);
    if (sse < best_sse) {
      best_sse = sse;
      best_centroids = c;
      best_assign = assign_idx;
    }
  }

  // label clusters by majority true_state
  std::array<std::array<int, 4>, 4> votes{};  // votes[cluster][state]
  for (size_t i = 0; i < training.size(); ++i)
    ++votes[best_assign[i]][static_cast<int>(training[i].true_state)];

  Classifier clf;
  std::array<bool, 4> taken{};
  for (int cluster = 0; cluster < 4; ++cluster) {
    int best_state = -1, best_votes = -1;
    for (int s = 0; s < 4; ++s)
      if (votes[cluster][s] > best_votes) { best_votes = votes[cluster][s]; best_state = s; }
    if (best_votes <= 0 || taken[best_state])
      throw std::runtime_error(
          "classify: degenerate training set (fewer than 4 distinct clusters)");
    taken[best_state] = true;
    clf.centroids[best_state] = best_centroids[cluster];
  }
  return clf;
}

NuclearState assign(const Classifier& clf, const ShotRecord& record) {
  int best = 0;
  double bd = sq_dist(record.dx, record.dy, clf.centroids[0][0], clf.centroids[0][1]);
  for (int s = 1; s < 4; ++s) {
    const double d = sq_dist(record.dx, record.dy, clf.centroids[s][0], clf.centroids[s][1]);
    if (d < bd) { bd = d; best = s; }  // ties keep the lower index
  }
  return static_cast<NuclearState>(best);
}

Eigen::Matrix4d estimate_T_matrix(const std::array<std::vector<ShotRecord>, 4>& prepared,
                                  size_t min_shots) {
  Eigen::Matrix4d t = Eigen::Matrix4d::Zero();
  for (int p = 0; p < 4; ++p) {
    if (prepared[p].size() < min_shots)
      throw std::runtime_error("estimate_T_matrix: prepared state " +
                               std::string(to_string(static_cast<NuclearState>(p))) +
                               " has fewer than the required shots");
    for (const auto& r : prepared[p]) t(static_cast<int>(r.assigned_state), p) += 1.0;
    t.col(p) /= t.col(p).sum();
  }
  return t;
}

void write_shot_csv(std::ostream& out, const std::vector<ShotRecord>& records) {
  out << "state_true,C_uu,C_du,C_ud,C_dd,dx,dy,state_assigned\n";
  for (const auto& r : records) {
    out << to_string(r.true_state);
    for (int k = 0; k < 4; ++k) out << "," << r.counts[k];
    out << "," << r.dx << "," << r.dy << "," << to_string(r.assigned_state) << "\n";
  }
}

TrackResult track_frequency(const DriftModel& drift, const TrackerGains& gains,
                            int n_blocks, std::mt19937_64& rng) {
  if (n_blocks <= 0) throw std::invalid_argument("track_frequency: n_blocks > 0");
  std::normal_distribution<double> gauss(0.0, 1.0);

  const double a = std::exp(-drift.block_s / drift.tau_corr_s);
  const double innov = drift.sigma_hz * std::sqrt(std::max(0.0, 1.0 - a * a));

  TrackResult out;
  out.time_s.reserve(n_blocks);
  double x = (drift.sigma_hz > 0.0) ? drift.sigma_hz * gauss(rng) : 0.0;
  double corr = 0.0, integ = 0.0;
  double sum_r2 = 0.0, sum_x2 = 0.0;

  for (int k = 0; k < n_blocks; ++k) {
    const double resid = x - corr;
    out.time_s.push_back(k * drift.block_s);
    out.drift_hz.push_back(x);
    out.residual_hz.push_back(resid);
    sum_r2 += resid * resid;
    sum_x2 += x * x;

    if (gains.enabled) {
      const double meas = resid + ((drift.meas_noise_hz > 0.0)
                                       ? drift.meas_noise_hz * gauss(rng)
                                       : 0.0);
      integ += meas;
      corr += gains.kp * meas + gains.ki * integ;
    }
    x = a * x + ((innov > 0.0) ? innov * gauss(rng) : 0.0);
  }
  out.residual_rms_hz = std::sqrt(sum_r2 / n_blocks);
  out.drift_rms_hz = std::sqrt(sum_x2 / n_blocks);
  return out;
}

} // namespace spinreg

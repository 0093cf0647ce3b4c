#include "symlines/inplane.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "symlines/error.hpp"

namespace symlines {

int default_inplane_k(int n) { return std::max(2, 360 / std::max(1, n)); }

double estimate_theta_ij(const PolarImage& pi, const PolarImage& pj,
                         const Rotation& rt_i, const Rotation& rt_j, int n,
                         int K) {
  if (K < 2) throw Error(Errc::invalid_argument, "estimate_theta_ij: K must be >= 2");
  if (pi.L != pj.L || pi.n_r != pj.n_r)
    throw Error(Errc::invalid_argument, "estimate_theta_ij: polar shape mismatch");
  const int L = pi.L;
  const Mat3 at = rt_i.transpose();
  double best = -std::numeric_limits<double>::infinity();
  int best_k = -1;
  for (int k = 0; k < K; ++k) {
    const double th = kTwoPi * k / (n * K);
    double prod = 1.0;
    bool valid = false;
    for (int s = 0; s < n; ++s) {
      const Mat3 m = at * rot_z(th + kTwoPi * s / n) * rt_j;
      if (planes_parallel(m)) continue;
      const CommonLinePair cl = commonline_angles_from(m);
      prod *= line_correlation(pi, angle_to_bin(cl.alpha_ij, L), pj,
                               angle_to_bin(cl.alpha_ji, L));
      valid = true;
    }
    if (!valid) continue;
    if (best_k < 0 || prod > best) {
      best = prod;
      best_k = k;
    }
  }
  if (best_k < 0)
    throw Error(Errc::estimation_failed, "estimate_theta_ij: all grid points degenerate");
  return kTwoPi * best_k / (n * K);
}

Eigen::MatrixXd estimate_theta_table(const std::vector<PolarImage>& polar,
                                     const std::vector<Rotation>& r_tilde,
                                     int n, int K, Exec exec) {
  const int m = static_cast<int>(polar.size());
  if (static_cast<int>(r_tilde.size()) != m)
    throw Error(Errc::invalid_argument, "estimate_theta_table: size mismatch");
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) pairs.emplace_back(i, j);
  const int P = static_cast<int>(pairs.size());
  if (exec == Exec::serial) {
    for (int p = 0; p < P; ++p) {
      const auto [i, j] = pairs[p];
      t(i, j) = estimate_theta_ij(polar[i], polar[j], r_tilde[i], r_tilde[j], n, K);
    }
  } else {
#pragma omp parallel for schedule(dynamic)
    for (int p = 0; p < P; ++p) {
      const auto [i, j] = pairs[p];
      t(i, j) = estimate_theta_ij(polar[i], polar[j], r_tilde[i], r_tilde[j], n, K);
    }
  }
  return t;
}

Eigen::MatrixXcd inplane_matrix(const Eigen::MatrixXd& theta_ij, int n) {
  const int m = static_cast<int>(theta_ij.rows());
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Identity(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      q(i, j) = std::polar(1.0, n * theta_ij(i, j));
      q(j, i) = std::conj(q(i, j));
    }
  return q;
}

InPlaneSync sync_inplane(const Eigen::MatrixXd& theta_ij, int n) {
  const int m = static_cast<int>(theta_ij.rows());
  if (m < 2 || theta_ij.cols() != m)
    throw Error(Errc::invalid_argument, "sync_inplane: need an m x m table, m >= 2");
  const Eigen::MatrixXcd Q = inplane_matrix(theta_ij, n);

  // Power iteration on Q + m I (all eigenvalues of Q lie in [-m, m]).
  std::mt19937_64 rng(0x1a9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXcd x(m);
  for (int t = 0; t < m; ++t) x(t) = std::complex<double>(1.0 + 0.01 * u(rng), 0.01 * u(rng));
  x.normalize();
  bool done = false;
  for (int it = 0; it < 100000; ++it) {
    Eigen::VectorXcd y = Q * x + static_cast<double>(m) * x;
    y.normalize();
    // Remove the free global phase before comparing iterates.
    const std::complex<double> ph = y.dot(x);
    if (std::abs(ph) > 0) y *= ph / std::abs(ph);
    const double diff = (y - x).norm();
    x = y;
    if (diff < 1e-12) {
      done = true;
      break;
    }
  }
  if (!done) throw Error(Errc::convergence, "sync_inplane: no convergence");

  InPlaneSync out;
  out.q = x;
  out.eigval = x.dot(Q * x).real();
  out.theta.resize(m);
  for (int i = 0; i < m; ++i)
    out.theta[i] = wrap_2pi(-std::arg(x(i))) / n;
  return out;
}

std::vector<Rotation> assemble_rotations(const std::vector<Rotation>& r_tilde,
                                         const std::vector<double>& theta) {
  if (r_tilde.size() != theta.size())
    throw Error(Errc::invalid_argument, "assemble_rotations: size mismatch");
  std::vector<Rotation> out(r_tilde.size());
  for (size_t i = 0; i < r_tilde.size(); ++i) out[i] = rot_z(theta[i]) * r_tilde[i];
  return out;
}

}  // namespace symlines

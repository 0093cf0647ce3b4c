#include "symlines/c3c4.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "symlines/error.hpp"

namespace symlines {

namespace {

void check_order(int n) {
  if (n != 3 && n != 4)
    throw Error(Errc::invalid_order, "fast path supports n = 3 or n = 4 only");
}

Mat3 mat_pow(const Mat3& a, int s) {
  Mat3 r = Mat3::Identity();
  for (int t = 0; t < s; ++t) r = r * a;
  return r;
}

// Slots of expression k.
void slots(const Mat3& r_ii, const Mat3& r_jj, int k, Mat3& a, Mat3& b) {
  a = (k / 4) ? Mat3(r_ii.transpose()) : r_ii;
  if (k & 1) a = j_conj(a);
  b = (k & 2) ? j_conj(r_jj) : r_jj;
}

}  // namespace

SelfLinePair search_self_cl(const Eigen::MatrixXd& sp, int n) {
  check_order(n);
  const int L = static_cast<int>(sp.rows());
  SelfLinePair best;
  bool found = false;
  for (int a = 0; a < L; ++a)
    for (int b = a + 1; b < L; ++b) {
      const int d = std::min(b - a, L - (b - a));
      // separation in [pi/3, pi) for n = 3, [pi/2, pi) for n = 4
      if (2 * d >= L) continue;
      if (n == 3 ? 6 * d < L : 4 * d < L) continue;
      const double v = sp(a, b);
      if (!found || v > best.score) {
        found = true;
        best.score = v;
        best.bin1 = a;
        best.bin2 = b;
      }
    }
  best.alpha1 = bin_to_angle(best.bin1, L);
  best.alpha2 = bin_to_angle(best.bin2, L);
  return best;
}

SelfLinePair search_self_cl(const PolarImage& p, int n) {
  return search_self_cl(self_table(p), n);
}

double gamma_from_separation(double delta, int n) {
  check_order(n);
  const double c = std::cos(delta);
  const double x = n == 3 ? c / (1.0 - c) : (1.0 + c) / (1.0 - c);
  if (!std::isfinite(x) || x < -1.0 - 1e-9 || x > 1.0 + 1e-9)
    throw Error(Errc::inconsistent_separation,
                "gamma_from_separation: cosine outside [-1,1]");
  return std::acos(std::clamp(x, -1.0, 1.0));
}

Rotation self_relative_rotation(double alpha1, double gamma, double alpha2) {
  return rot_z(alpha1) * rot_x(gamma) * rot_z(-alpha2 - kPi);
}

std::pair<double, double> detect_single_cl(const Eigen::MatrixXd& cross) {
  const int L = static_cast<int>(cross.rows());
  int ba = -1, bb = -1;
  double best = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < L; ++a)
    for (int b = 0; b < L; ++b) {
      const int d = std::abs(a - b);
      if (d == 0 || 2 * d == L) continue;
      if (cross(a, b) > best) {
        best = cross(a, b);
        ba = a;
        bb = b;
      }
    }
  return {bin_to_angle(ba, L), bin_to_angle(bb, L)};
}

std::pair<double, double> detect_single_cl(const PolarImage& pi,
                                           const PolarImage& pj) {
  return detect_single_cl(cross_table(pi, pj));
}

double triangle_vote(const CommonLineTable& t, int i, int j, int k) {
  const double ai = t.alpha(i, k) - t.alpha(i, j);
  const double aj = t.alpha(j, k) - t.alpha(j, i);
  const double ak = t.alpha(k, j) - t.alpha(k, i);
  const double si = std::sin(ai), sj = std::sin(aj);
  if (std::abs(si) < 1e-3 || std::abs(sj) < 1e-3 || std::abs(std::sin(ak)) < 1e-3)
    return std::numeric_limits<double>::quiet_NaN();
  const double c = (std::cos(ak) - std::cos(ai) * std::cos(aj)) / (si * sj);
  if (c < -1.0 || c > 1.0) return std::numeric_limits<double>::quiet_NaN();
  return c;
}

double vote_gamma(int i, int j, const CommonLineTable& t, int bins) {
  if (bins < 1) throw Error(Errc::invalid_argument, "vote_gamma: bins must be >= 1");
  if (t.m - 2 < 3)
    throw Error(Errc::invalid_argument, "vote_gamma: need at least 3 third images");
  std::vector<int> count(bins, 0);
  std::vector<double> sum(bins, 0.0);
  const double w = kPi / bins;
  int valid = 0;
  for (int k = 0; k < t.m; ++k) {
    if (k == i || k == j) continue;
    const double c = triangle_vote(t, i, j, k);
    if (std::isnan(c)) continue;
    const double g = std::acos(c);
    const int b = std::min(bins - 1, static_cast<int>(g / w));
    ++count[b];
    sum[b] += g;
    ++valid;
  }
  if (valid == 0) throw Error(Errc::voting_failed, "vote_gamma: no valid votes");
  int peak = 0;
  for (int b = 1; b < bins; ++b)
    if (count[b] > count[peak]) peak = b;
  return sum[peak] / count[peak];
}

Mat3 sync_expression(const Mat3& r_ii, const Mat3& r_ij, const Mat3& r_jj,
                     int n, int k) {
  check_order(n);
  Mat3 a, b;
  slots(r_ii, r_jj, k, a, b);
  if (n == 3)
    return r_ij + a * r_ij * b + a.transpose() * r_ij * b.transpose();
  return r_ij + a * r_ij * b;
}

Mat3 full_sync_sum(const Mat3& r_ii, const Mat3& r_ij, const Mat3& r_jj, int n,
                   int k) {
  Mat3 a, b;
  slots(r_ii, r_jj, k, a, b);
  Mat3 acc = Mat3::Zero();
  for (int s = 0; s < n; ++s) acc += mat_pow(a, s) * r_ij * mat_pow(b, s);
  return acc / n;
}

Mat3 self_power_mean(const Mat3& r, int n) {
  Mat3 acc = Mat3::Zero();
  for (int s = 0; s < n; ++s) acc += mat_pow(r, s);
  return acc / n;
}

LocalSync local_sync(const Rotation& r_ii, const Rotation& r_ij,
                     const Rotation& r_jj, int n) {
  check_order(n);
  // Exact expressions equal n v v^T (n = 3) or 2 v v^T (n = 4).
  const double scale = n == 3 ? 1.0 / 3.0 : 0.5;
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 8; ++k) {
    const double d = rank1_distance(scale * sync_expression(r_ii, r_ij, r_jj, n, k));
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  LocalSync out;
  slots(r_ii, r_jj, best, out.r_ii, out.r_jj);
  out.r_ij = r_ij;
  out.expression = best;
  out.distance = best_d;
  Mat3 acc = Mat3::Zero();
  for (int s = 0; s < n; ++s)
    acc += mat_pow(out.r_ii, s) * r_ij * mat_pow(out.r_jj, s);
  out.v_ij = acc / n;
  return out;
}

RelativeDirections estimate_all_c3c4(const std::vector<PolarImage>& polar,
                                     int n, int vote_bins, Exec exec,
                                     C3C4Diagnostics* diag) {
  check_order(n);
  const int m = static_cast<int>(polar.size());
  if (m < 5) throw Error(Errc::invalid_argument, "fast path needs m >= 5");

  std::vector<Rotation> r_self(m);
  auto self_step = [&](int i) {
    const SelfLinePair sl = search_self_cl(self_table(polar[i], exec), n);
    const double g = gamma_from_separation(sl.alpha2 - sl.alpha1, n);
    r_self[i] = self_relative_rotation(sl.alpha1, g, sl.alpha2);
  };
  if (exec == Exec::serial) {
    for (int i = 0; i < m; ++i) self_step(i);
  } else {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < m; ++i) self_step(i);
  }

  CommonLineTable t;
  t.m = m;
  t.alpha = Eigen::MatrixXd::Zero(m, m);
  const int P = pair_count(m);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) pairs.emplace_back(i, j);
  auto cl_step = [&](int p) {
    const auto [i, j] = pairs[p];
    const auto [a, b] = detect_single_cl(cross_table(polar[i], polar[j], exec));
    t.alpha(i, j) = a;
    t.alpha(j, i) = b;
  };
  if (exec == Exec::serial) {
    for (int p = 0; p < P; ++p) cl_step(p);
  } else {
#pragma omp parallel for schedule(dynamic)
    for (int p = 0; p < P; ++p) cl_step(p);
  }

  RelativeDirections out;
  out.m = m;
  out.v_pairs.assign(P, Mat3::Zero());
  out.pair_scores.assign(P, 0.0);
  std::vector<char> failed(P, 0);
  auto pair_step = [&](int p) {
    const auto [i, j] = pairs[p];
    double g;
    try {
      g = vote_gamma(i, j, t, vote_bins);
    } catch (const Error&) {
      failed[p] = 1;
      return;
    }
    const Rotation r_ij = rotation_from_cl(t.alpha(i, j), g, t.alpha(j, i));
    const LocalSync ls = local_sync(r_self[i], r_ij, r_self[j], n);
    out.v_pairs[p] = ls.v_ij;
    out.pair_scores[p] = -ls.distance;
  };
  if (exec == Exec::serial) {
    for (int p = 0; p < P; ++p) pair_step(p);
  } else {
#pragma omp parallel for schedule(dynamic)
    for (int p = 0; p < P; ++p) pair_step(p);
  }
  if (diag) {
    diag->failed_votes = 0;
    for (char f : failed) diag->failed_votes += f;
  }

  out.v_diag.resize(m);
  for (int i = 0; i < m; ++i) out.v_diag[i] = self_power_mean(r_self[i], n);
  return out;
}

}  // namespace symlines

#include "symlines/pairwise.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "symlines/error.hpp"

namespace symlines {

double direction_self_score(const Eigen::MatrixXd& selfprod,
                            const CandidateGrid& grid, int dir) {
  if (grid.degenerate[dir]) return kNoScore;
  double p = 1.0;
  for (const auto& [a, b] : grid.self_bins[dir]) p *= selfprod(a, b);
  return p;
}

double self_score(const Eigen::MatrixXd& selfprod, const CandidateGrid& grid,
                  int cand) {
  return direction_self_score(selfprod, grid, grid.direction_of(cand));
}

ImageCandidates top_candidates(const Eigen::MatrixXd& selfprod,
                               const CandidateGrid& grid, int T) {
  if (T < 1) throw Error(Errc::invalid_argument, "top_candidates: T must be >= 1");
  const int nd = grid.directions();
  std::vector<double> score(nd);
  for (int d = 0; d < nd; ++d) score[d] = direction_self_score(selfprod, grid, d);
  std::vector<int> order(nd);
  std::iota(order.begin(), order.end(), 0);
  const int keep = std::min(T, nd);
  std::partial_sort(order.begin(), order.begin() + keep, order.end(),
                    [&](int a, int b) {
                      if (score[a] != score[b]) return score[a] > score[b];
                      return a < b;
                    });
  order.resize(keep);
  std::sort(order.begin(), order.end());
  ImageCandidates out;
  out.cands.reserve(static_cast<size_t>(keep) * grid.n_inplane);
  for (int d : order)
    for (int k = 0; k < grid.n_inplane; ++k) {
      out.cands.push_back(grid.index(d, k));
      out.scores.push_back(score[d]);
    }
  return out;
}

ImageCandidates top_candidates(const PolarImage& p, const CandidateGrid& grid,
                               int T, Exec exec) {
  return top_candidates(self_table(p, exec), grid, T);
}

namespace {

struct DirGroup {
  int dir;
  double score;
  std::vector<int> ks;        // ascending in-plane indices present
  std::vector<char> present;  // size n_inplane
};

std::vector<DirGroup> group_by_direction(const ImageCandidates& c,
                                         const CandidateGrid& grid) {
  std::map<int, DirGroup> groups;
  for (size_t t = 0; t < c.cands.size(); ++t) {
    const int d = grid.direction_of(c.cands[t]);
    auto it = groups.find(d);
    if (it == groups.end()) {
      DirGroup g{d, c.scores[t], {}, std::vector<char>(grid.n_inplane, 0)};
      it = groups.emplace(d, std::move(g)).first;
    }
    const int k = grid.inplane_of(c.cands[t]);
    if (!it->second.present[k]) {
      it->second.present[k] = 1;
      it->second.ks.push_back(k);
    }
  }
  std::vector<DirGroup> out;
  for (auto& [d, g] : groups) {
    std::sort(g.ks.begin(), g.ks.end());
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace

PairEstimate estimate_pair(const Eigen::MatrixXd& cross,
                           const ImageCandidates& ci, const ImageCandidates& cj,
                           const CandidateGrid& grid) {
  if (ci.cands.empty() || cj.cands.empty())
    throw Error(Errc::invalid_argument, "estimate_pair: empty candidate list");
  const int n = grid.n, K = grid.n_inplane, nK = n * K, L = grid.L;
  const auto gi = group_by_direction(ci, grid);
  const auto gj = group_by_direction(cj, grid);

  std::vector<Mat3> rz(nK);
  for (int t = 0; t < nK; ++t) rz[t] = rot_z(t * grid.inplane_step);
  // X[b][t] = R_z(t * step) * base_b
  std::vector<std::vector<Mat3>> X(gj.size(), std::vector<Mat3>(nK));
  for (size_t b = 0; b < gj.size(); ++b)
    for (int t = 0; t < nK; ++t) X[b][t] = rz[t] * grid.base[gj[b].dir];

  std::vector<int> bi(nK), bj(nK);
  std::vector<char> deg(nK);
  double best = kNoScore;
  int best_ci = -1, best_cj = -1;

  for (const auto& ga : gi) {
    if (ga.score == kNoScore) continue;
    const Mat3 rat = grid.base[ga.dir].transpose();
    for (size_t b = 0; b < gj.size(); ++b) {
      const auto& gb = gj[b];
      if (gb.score == kNoScore) continue;
      for (int t = 0; t < nK; ++t) {
        const Mat3& x = X[b][t];
        const double m33 = rat.row(2).dot(x.col(2));
        if (std::abs(m33) >= 1.0 - kParallelTol) {
          deg[t] = 1;
          continue;
        }
        deg[t] = 0;
        const double m13 = rat.row(0).dot(x.col(2));
        const double m23 = rat.row(1).dot(x.col(2));
        const double m31 = rat.row(2).dot(x.col(0));
        const double m32 = rat.row(2).dot(x.col(1));
        bi[t] = angle_to_bin(std::atan2(m13, -m23), L);
        bj[t] = angle_to_bin(std::atan2(-m31, m32), L);
      }
      for (int dk = 0; dk < K; ++dk) {
        int real_i = -1, real_j = -1;
        for (int ka : ga.ks) {
          const int kb = (ka + dk) % K;
          if (gb.present[kb]) {
            real_i = grid.index(ga.dir, ka);
            real_j = grid.index(gb.dir, kb);
            break;
          }
        }
        if (real_i < 0) continue;
        double prod = 1.0;
        bool valid = false;
        for (int s = 0; s < n; ++s) {
          const int t = dk + s * K;
          if (deg[t]) continue;
          prod *= cross(bi[t], bj[t]);
          valid = true;
        }
        if (!valid) continue;
        const double total = prod * ga.score * gb.score;
        if (total > best || (total == best && best_ci >= 0 &&
                             std::make_pair(real_i, real_j) <
                                 std::make_pair(best_ci, best_cj)) ||
            best_ci < 0) {
          best = total;
          best_ci = real_i;
          best_cj = real_j;
        }
      }
    }
  }
  if (best_ci < 0)
    throw Error(Errc::estimation_failed, "estimate_pair: all candidate pairs degenerate");

  PairEstimate e;
  const Rotation& ri = grid.candidates[best_ci];
  const Rotation& rj = grid.candidates[best_cj];
  e.v_ij = symmetrized_product(ri, rj, n);
  e.v_ii = symmetrized_product(ri, ri, n);
  e.v_jj = symmetrized_product(rj, rj, n);
  e.score = best;
  e.cand_i = best_ci;
  e.cand_j = best_cj;
  return e;
}

PairEstimate estimate_pair(const PolarImage& pi, const PolarImage& pj,
                           const ImageCandidates& ci, const ImageCandidates& cj,
                           const CandidateGrid& grid) {
  if (&pi == &pj)
    throw Error(Errc::invalid_argument, "estimate_pair: pairs must have i < j");
  return estimate_pair(cross_table(pi, pj), ci, cj, grid);
}

double pair_score(const Eigen::MatrixXd& cross, const Eigen::MatrixXd& self_i,
                  const Eigen::MatrixXd& self_j, const CandidateGrid& grid,
                  int ci, int cj) {
  const double si = self_score(self_i, grid, ci);
  const double sj = self_score(self_j, grid, cj);
  if (si == kNoScore || sj == kNoScore) return kNoScore;
  double prod = 1.0;
  for (const auto& lb :
       pair_line_bins(grid.candidates[ci], grid.candidates[cj], grid.n, grid.L))
    if (!lb.degenerate) prod *= cross(lb.bin_i, lb.bin_j);
  return prod * si * sj;
}

Mat3 select_vii(const std::vector<Mat3>& estimates) {
  if (estimates.empty()) throw Error(Errc::invalid_argument, "select_vii: empty list");
  size_t best = 0;
  double best_d = rank1_distance(estimates[0]);
  for (size_t t = 1; t < estimates.size(); ++t) {
    const double d = rank1_distance(estimates[t]);
    if (d < best_d - 1e-12) {
      best_d = d;
      best = t;
    }
  }
  return estimates[best];
}

RelativeDirections estimate_all_cn(const std::vector<PolarImage>& polar,
                                   const CandidateGrid& grid, int T, Exec exec) {
  const int m = static_cast<int>(polar.size());
  if (m < 2) throw Error(Errc::invalid_argument, "estimate_all_cn: need m >= 2");
  std::vector<ImageCandidates> cands(m);
  if (exec == Exec::serial) {
    for (int i = 0; i < m; ++i)
      cands[i] = top_candidates(self_table(polar[i], Exec::serial), grid, T);
  } else {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < m; ++i) cands[i] = top_candidates(polar[i], grid, T);
  }

  const int P = pair_count(m);
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(P);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) pairs.emplace_back(i, j);
  std::vector<PairEstimate> est(P);
  if (exec == Exec::serial) {
    for (int p = 0; p < P; ++p) {
      const auto [i, j] = pairs[p];
      est[p] = estimate_pair(cross_table(polar[i], polar[j], Exec::serial),
                             cands[i], cands[j], grid);
    }
  } else {
#pragma omp parallel for schedule(dynamic)
    for (int p = 0; p < P; ++p) {
      const auto [i, j] = pairs[p];
      est[p] = estimate_pair(polar[i], polar[j], cands[i], cands[j], grid);
    }
  }

  RelativeDirections out;
  out.m = m;
  out.v_pairs.resize(P);
  out.pair_scores.resize(P);
  for (int p = 0; p < P; ++p) {
    out.v_pairs[p] = est[p].v_ij;
    out.pair_scores[p] = est[p].score;
  }
  out.v_diag.resize(m);
  for (int i = 0; i < m; ++i) {
    std::vector<Mat3> list;
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      list.push_back(i < j ? est[pair_index(i, j, m)].v_ii
                           : est[pair_index(j, i, m)].v_jj);
    }
    out.v_diag[i] = select_vii(list);
  }
  return out;
}

}  // namespace symlines

#pragma once

#include <limits>
#include <vector>

#include "symlines/candidate_grid.hpp"
#include "symlines/polar_fourier.hpp"

namespace symlines {

constexpr double kNoScore = -std::numeric_limits<double>::infinity();

// prod_s selfprod(l_ii^(s), l_ii^(n-s)); kNoScore for degenerate candidates.
double self_score(const Eigen::MatrixXd& selfprod, const CandidateGrid& grid,
                  int cand);
double direction_self_score(const Eigen::MatrixXd& selfprod,
                            const CandidateGrid& grid, int dir);

struct ImageCandidates {
  std::vector<int> cands;      // ascending candidate indices
  std::vector<double> scores;  // self score per entry of cands
};

// Keeps the T best viewing directions by self score (ties -> lower index) and
// returns every in-plane candidate of those directions.
ImageCandidates top_candidates(const PolarImage& p, const CandidateGrid& grid,
                               int T, Exec exec = Exec::parallel);
ImageCandidates top_candidates(const Eigen::MatrixXd& selfprod,
                               const CandidateGrid& grid, int T);

struct PairEstimate {
  Mat3 v_ij = Mat3::Zero();
  Mat3 v_ii = Mat3::Zero();
  Mat3 v_jj = Mat3::Zero();
  double score = kNoScore;
  int cand_i = -1;
  int cand_j = -1;
};

// Maximizes cross(n lines) * self_i * self_j over cands_i x cands_j.
PairEstimate estimate_pair(const PolarImage& pi, const PolarImage& pj,
                           const ImageCandidates& ci, const ImageCandidates& cj,
                           const CandidateGrid& grid);
// Same search on a precomputed cross table of (pi, pj).
PairEstimate estimate_pair(const Eigen::MatrixXd& cross,
                           const ImageCandidates& ci, const ImageCandidates& cj,
                           const CandidateGrid& grid);

// Full score of one candidate pair, by direct evaluation.
double pair_score(const Eigen::MatrixXd& cross, const Eigen::MatrixXd& self_i,
                  const Eigen::MatrixXd& self_j, const CandidateGrid& grid,
                  int ci, int cj);

// Estimate closest to rank one (singular values nearest (1,0,0)).
Mat3 select_vii(const std::vector<Mat3>& estimates);

inline int pair_index(int i, int j, int m) {
  return i * m - i * (i + 1) / 2 + (j - i - 1);
}
inline int pair_count(int m) { return m * (m - 1) / 2; }

struct RelativeDirections {
  int m = 0;
  std::vector<Mat3> v_pairs;  // indexed by pair_index(i, j, m), i < j
  std::vector<Mat3> v_diag;   // m entries
  std::vector<double> pair_scores;
};

RelativeDirections estimate_all_cn(const std::vector<PolarImage>& polar,
                                   const CandidateGrid& grid, int T,
                                   Exec exec = Exec::parallel);

}  // namespace symlines

#pragma once

#include <utility>
#include <vector>

#include "symlines/exec.hpp"
#include "symlines/geometry.hpp"
#include "symlines/pairwise.hpp"
#include "symlines/polar_fourier.hpp"

namespace symlines {

struct SelfLinePair {
  double alpha1 = 0;  // alpha1 < alpha2
  double alpha2 = 0;
  int bin1 = 0;
  int bin2 = 0;
  double score = 0;
};

SelfLinePair search_self_cl(const PolarImage& p, int n);
SelfLinePair search_self_cl(const Eigen::MatrixXd& selfprod, int n);

double gamma_from_separation(double delta, int n);

// R_z(a1) R_x(gamma) R_z(-a2 - pi)
Rotation self_relative_rotation(double alpha1, double gamma, double alpha2);

// Lines (alpha_ij, alpha_ji) maximizing the conjugated correlation; pairs of
// bins with |a - b| in {0, L/2} are excluded.
std::pair<double, double> detect_single_cl(const PolarImage& pi,
                                           const PolarImage& pj);
std::pair<double, double> detect_single_cl(const Eigen::MatrixXd& cross);

// alpha(i, j): angle in image i of the common line with image j.
struct CommonLineTable {
  int m = 0;
  Eigen::MatrixXd alpha;
};

// cos of the plane angle at line (i,j) implied by third image k, or NaN when
// the triangle is degenerate.
double triangle_vote(const CommonLineTable& t, int i, int j, int k);
double vote_gamma(int i, int j, const CommonLineTable& t, int bins = 60);

struct LocalSync {
  Rotation r_ii;  // after transpose / J choices
  Rotation r_ij;
  Rotation r_jj;
  Mat3 v_ij;
  int expression = 0;  // 0-based index into the eight-expression list
  double distance = 0;
};

// Expression k (0-based): k / 4 picks R_ii or R_ii^T, bit 0 J-conjugates the
// R_ii slot, bit 1 the R_jj slot.
Mat3 sync_expression(const Mat3& r_ii, const Mat3& r_ij, const Mat3& r_jj,
                     int n, int k);
// (1/n) sum_s (J^mi Rt J^mi)^s R_ij (J^mj R_jj J^mj)^s
Mat3 full_sync_sum(const Mat3& r_ii, const Mat3& r_ij, const Mat3& r_jj, int n,
                   int k);
LocalSync local_sync(const Rotation& r_ii, const Rotation& r_ij,
                     const Rotation& r_jj, int n);

// (1/n) sum_s r^s
Mat3 self_power_mean(const Mat3& r, int n);

struct C3C4Diagnostics {
  int failed_votes = 0;
};

RelativeDirections estimate_all_c3c4(const std::vector<PolarImage>& polar,
                                     int n, int vote_bins = 60,
                                     Exec exec = Exec::parallel,
                                     C3C4Diagnostics* diag = nullptr);

}  // namespace symlines

#pragma once

#include <complex>
#include <vector>

#include "symlines/exec.hpp"
#include "symlines/geometry.hpp"
#include "symlines/polar_fourier.hpp"

namespace symlines {

int default_inplane_k(int n);

// argmax over theta_k = 2 pi k / (n K), k = 0..K-1, of
// prod_s cross(bins of R~_i^T R_z(theta_k + 2 pi s / n) R~_j).
double estimate_theta_ij(const PolarImage& pi, const PolarImage& pj,
                         const Rotation& rt_i, const Rotation& rt_j, int n,
                         int K);

// theta(i, j) for i < j; entries below the diagonal are ignored.
Eigen::MatrixXd estimate_theta_table(const std::vector<PolarImage>& polar,
                                     const std::vector<Rotation>& r_tilde,
                                     int n, int K, Exec exec = Exec::parallel);

struct InPlaneSync {
  std::vector<double> theta;  // in [0, 2 pi / n)
  Eigen::VectorXcd q;
  double eigval = 0;
};

Eigen::MatrixXcd inplane_matrix(const Eigen::MatrixXd& theta_ij, int n);
InPlaneSync sync_inplane(const Eigen::MatrixXd& theta_ij, int n);

std::vector<Rotation> assemble_rotations(const std::vector<Rotation>& r_tilde,
                                         const std::vector<double>& theta);

}  // namespace symlines

#pragma once

#include <array>
#include <vector>

#include "symlines/exec.hpp"
#include "symlines/geometry.hpp"
#include "symlines/pairwise.hpp"

namespace symlines {

// Signed adjacency over unordered image pairs, stored as CSR.
struct SignGraph {
  int m = 0;
  int dim = 0;
  std::vector<int> row_ptr;
  std::vector<int> col;
  std::vector<signed char> val;

  double entry(int r, int c) const;
  int nonzeros() const { return static_cast<int>(col.size()); }
  void multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y,
                Exec exec = Exec::parallel) const;
};

// (mu_ij, mu_jk, mu_ik) with at most one bit set.
std::array<int, 3> triangle_config(const Mat3& v_ij, const Mat3& v_jk,
                                   const Mat3& v_ik);
double triangle_residual(const Mat3& v_ij, const Mat3& v_jk, const Mat3& v_ik,
                         const std::array<int, 3>& mu);

SignGraph build_sign_graph(const std::vector<Mat3>& v_pairs, int m,
                           Exec exec = Exec::parallel);

struct EigenResult {
  Eigen::VectorXd vec;
  double value = 0;
  int iterations = 0;
};

// Power iteration with a Gershgorin shift so the algebraically largest
// eigenvalue dominates.
EigenResult leading_eigenvector(const SignGraph& g, double tol = 1e-12,
                                int max_iter = 10000,
                                Exec exec = Exec::parallel);
EigenResult leading_eigenvector(const Eigen::MatrixXd& a, double tol = 1e-12,
                                int max_iter = 10000);

struct HandSync {
  std::vector<Mat3> v_pairs;
  std::vector<Mat3> v_diag;
  Eigen::VectorXd eigvec;
  double eigval = 0;
  std::vector<int> pair_flipped;
  std::vector<int> diag_flipped;
};

HandSync sync_hands(const std::vector<Mat3>& v_pairs,
                    const std::vector<Mat3>& v_diag, int m,
                    Exec exec = Exec::parallel);

struct ViewingDirections {
  std::vector<Vec3> v;
  std::vector<Rotation> r_tilde;
  double eigen_gap = 0;  // lambda_2 / lambda_1
};

ViewingDirections factor_directions(const std::vector<Mat3>& v_pairs,
                                    const std::vector<Mat3>& v_diag, int m);

}  // namespace symlines

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "symlines/exec.hpp"

namespace symlines {

// N x N real image, row-major.  Pixel (row, col) sits at centered
// coordinates x = col - N/2, y = row - N/2 (integer division).
struct Image {
  int N = 0;
  std::vector<double> pixels;
  double pixel_size = 1.0;

  Image() = default;
  explicit Image(int n, double px = 1.0)
      : N(n), pixels(static_cast<size_t>(n) * n, 0.0), pixel_size(px) {}
  double& at(int row, int col) { return pixels[static_cast<size_t>(row) * N + col]; }
  double at(int row, int col) const { return pixels[static_cast<size_t>(row) * N + col]; }
};

using RayMatrix = Eigen::Matrix<std::complex<double>, Eigen::Dynamic,
                                Eigen::Dynamic, Eigen::RowMajor>;

// rays(l, k) samples direction 2*pi*l/L at radial frequency
// (k_offset + k + 1) * delta_xi.
struct PolarImage {
  int L = 0;
  int n_r = 0;
  double delta_xi = 0;
  int k_offset = 0;
  RayMatrix rays;
  bool normalized = false;
};

struct CorrelationTable {
  Eigen::MatrixXd cross;     // Re sum_k r_i(l1,k) conj(r_j(l2,k))
  Eigen::MatrixXd selfprod;  // Re sum_k r_i(l1,k) r_j(l2,k)
};

double default_delta_xi(int N);

PolarImage polar_ft(const Image& img, int L, int n_r, double delta_xi,
                    Exec exec = Exec::parallel);
PolarImage normalize(const PolarImage& p);
// Keep radial samples [k_min, k_max) (0-based); the frequency step is kept and
// the first retained sample sits at (k_min+1)*delta_xi.
PolarImage band_limit(const PolarImage& p, int k_min, int k_max);

CorrelationTable correlation_tables(const PolarImage& pi, const PolarImage& pj,
                                    Exec exec = Exec::parallel);
Eigen::MatrixXd cross_table(const PolarImage& pi, const PolarImage& pj,
                            Exec exec = Exec::parallel);
Eigen::MatrixXd self_table(const PolarImage& p, Exec exec = Exec::parallel);

// Re sum_k r_i(l1,k) conj(r_j(l2,k)) for a single pair of lines.
double line_correlation(const PolarImage& pi, int l1, const PolarImage& pj,
                        int l2);

}  // namespace symlines

#include "symlines/polar_fourier.hpp"

#include <cmath>

#include "symlines/error.hpp"
#include "symlines/geometry.hpp"

namespace symlines {

namespace {

using cd = std::complex<double>;

void check_args(int L, int n_r) {
  if (L <= 0 || L % 2 != 0)
    throw Error(Errc::invalid_argument, "polar_ft: L must be even and positive");
  if (n_r < 1) throw Error(Errc::invalid_argument, "polar_ft: n_r must be >= 1");
}

void check_same_shape(const PolarImage& a, const PolarImage& b) {
  if (a.L != b.L || a.n_r != b.n_r || a.rays.rows() != b.rays.rows() ||
      a.rays.cols() != b.rays.cols())
    throw Error(Errc::invalid_argument, "correlation: polar shape mismatch");
}

// L x 2n_r real matrix [Re | sign*Im].
Eigen::MatrixXd split(const PolarImage& p, double im_sign) {
  Eigen::MatrixXd a(p.L, 2 * p.n_r);
  a.leftCols(p.n_r) = p.rays.real();
  a.rightCols(p.n_r) = im_sign * p.rays.imag();
  return a;
}

}  // namespace

double default_delta_xi(int N) { return kPi / (N / 2); }

PolarImage polar_ft(const Image& img, int L, int n_r, double delta_xi,
                    Exec exec) {
  check_args(L, n_r);
  const int N = img.N;
  const int c = N / 2;
  PolarImage out;
  out.L = L;
  out.n_r = n_r;
  out.delta_xi = delta_xi;
  out.rays = RayMatrix::Zero(L, n_r);

  if (exec == Exec::serial) {
    for (int l = 0; l < L; ++l) {
      const double ct = std::cos(kTwoPi * l / L), st = std::sin(kTwoPi * l / L);
      for (int k = 0; k < n_r; ++k) {
        const double xi = (k + 1) * delta_xi;
        cd acc = 0;
        for (int row = 0; row < N; ++row)
          for (int col = 0; col < N; ++col) {
            const double ph = -xi * ((col - c) * ct + (row - c) * st);
            acc += img.at(row, col) * cd(std::cos(ph), std::sin(ph));
          }
        out.rays(l, k) = acc;
      }
    }
    return out;
  }

  // exp(-i xi (x ct + y st)) = exp(-i xi x ct) * exp(-i xi y st)
#pragma omp parallel for schedule(static)
  for (int l = 0; l < L; ++l) {
    const double ct = std::cos(kTwoPi * l / L), st = std::sin(kTwoPi * l / L);
    std::vector<cd> ex(N), ey(N);
    for (int k = 0; k < n_r; ++k) {
      const double xi = (k + 1) * delta_xi;
      for (int t = 0; t < N; ++t) {
        ex[t] = std::polar(1.0, -xi * (t - c) * ct);
        ey[t] = std::polar(1.0, -xi * (t - c) * st);
      }
      cd acc = 0;
      for (int row = 0; row < N; ++row) {
        const double* px = &img.pixels[static_cast<size_t>(row) * N];
        double re = 0, im = 0;
        for (int col = 0; col < N; ++col) {
          re += px[col] * ex[col].real();
          im += px[col] * ex[col].imag();
        }
        acc += ey[row] * cd(re, im);
      }
      out.rays(l, k) = acc;
    }
  }
  return out;
}

PolarImage normalize(const PolarImage& p) {
  PolarImage out = p;
  for (int l = 0; l < p.L; ++l) {
    const double nrm = out.rays.row(l).norm();
    if (nrm > 0) out.rays.row(l) /= nrm;
  }
  out.normalized = true;
  return out;
}

PolarImage band_limit(const PolarImage& p, int k_min, int k_max) {
  if (k_min < 0 || k_max > p.n_r || k_min >= k_max)
    throw Error(Errc::invalid_argument, "band_limit: bad radial range");
  PolarImage out;
  out.L = p.L;
  out.n_r = k_max - k_min;
  out.delta_xi = p.delta_xi;
  out.k_offset = p.k_offset + k_min;
  out.rays = p.rays.middleCols(k_min, out.n_r);
  out.normalized = false;
  return out;
}

Eigen::MatrixXd cross_table(const PolarImage& pi, const PolarImage& pj,
                            Exec exec) {
  check_same_shape(pi, pj);
  const int L = pi.L;
  if (exec == Exec::serial) {
    Eigen::MatrixXd t(L, L);
    for (int a = 0; a < L; ++a)
      for (int b = 0; b < L; ++b) t(a, b) = line_correlation(pi, a, pj, b);
    return t;
  }
  return split(pi, 1.0) * split(pj, 1.0).transpose();
}

Eigen::MatrixXd self_table(const PolarImage& p, Exec exec) {
  const int L = p.L;
  if (exec == Exec::serial) {
    Eigen::MatrixXd t(L, L);
    for (int a = 0; a < L; ++a)
      for (int b = 0; b < L; ++b) {
        double acc = 0;
        for (int k = 0; k < p.n_r; ++k) acc += (p.rays(a, k) * p.rays(b, k)).real();
        t(a, b) = acc;
      }
    return t;
  }
  return split(p, 1.0) * split(p, -1.0).transpose();
}

CorrelationTable correlation_tables(const PolarImage& pi, const PolarImage& pj,
                                    Exec exec) {
  check_same_shape(pi, pj);
  CorrelationTable t;
  t.cross = cross_table(pi, pj, exec);
  if (exec == Exec::serial) {
    const int L = pi.L;
    t.selfprod.resize(L, L);
    for (int a = 0; a < L; ++a)
      for (int b = 0; b < L; ++b) {
        double acc = 0;
        for (int k = 0; k < pi.n_r; ++k)
          acc += (pi.rays(a, k) * pj.rays(b, k)).real();
        t.selfprod(a, b) = acc;
      }
  } else {
    t.selfprod = split(pi, 1.0) * split(pj, -1.0).transpose();
  }
  return t;
}

double line_correlation(const PolarImage& pi, int l1, const PolarImage& pj,
                        int l2) {
  double acc = 0;
  const cd* a = pi.rays.row(l1).data();
  const cd* b = pj.rays.row(l2).data();
  for (int k = 0; k < pi.n_r; ++k)
    acc += a[k].real() * b[k].real() + a[k].imag() * b[k].imag();
  return acc;
}

}  // namespace symlines

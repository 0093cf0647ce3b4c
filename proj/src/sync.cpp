#include "symlines/sync.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "symlines/error.hpp"

namespace symlines {

namespace {

const std::array<std::array<int, 3>, 4> kConfigs = {
    {{0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {1, 0, 0}}};  // lexicographic order

Mat3 maybe_j(const Mat3& m, int mu) { return mu ? j_conj(m) : m; }

long long choose3(long long x) { return x < 3 ? 0 : x * (x - 1) * (x - 2) / 6; }
long long choose2(long long x) { return x < 2 ? 0 : x * (x - 1) / 2; }
long long triple_index(int i, int j, int k) {  // i < j < k
  return choose3(k) + choose2(j) + i;
}

// Deterministic start: ones with a small fixed perturbation.
Eigen::VectorXd start_vector(int dim) {
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd x(dim);
  for (int t = 0; t < dim; ++t) x(t) = 1.0 + 0.01 * u(rng);
  return x.normalized();
}

void fix_sign(Eigen::VectorXd& x) {
  for (int t = 0; t < x.size(); ++t)
    if (std::abs(x(t)) > 1e-6) {
      if (x(t) < 0) x = -x;
      return;
    }
}

}  // namespace

double triangle_residual(const Mat3& v_ij, const Mat3& v_jk, const Mat3& v_ik,
                         const std::array<int, 3>& mu) {
  return (maybe_j(v_ij, mu[0]) * maybe_j(v_jk, mu[1]) - maybe_j(v_ik, mu[2]))
      .norm();
}

std::array<int, 3> triangle_config(const Mat3& v_ij, const Mat3& v_jk,
                                   const Mat3& v_ik) {
  std::array<int, 3> best = kConfigs[0];
  double best_r = triangle_residual(v_ij, v_jk, v_ik, best);
  for (size_t c = 1; c < kConfigs.size(); ++c) {
    const double r = triangle_residual(v_ij, v_jk, v_ik, kConfigs[c]);
    if (r < best_r) {
      best_r = r;
      best = kConfigs[c];
    }
  }
  return best;
}

double SignGraph::entry(int r, int c) const {
  for (int t = row_ptr[r]; t < row_ptr[r + 1]; ++t)
    if (col[t] == c) return val[t];
  return 0.0;
}

void SignGraph::multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y,
                         Exec exec) const {
  y.resize(dim);
  if (exec == Exec::serial) {
    for (int r = 0; r < dim; ++r) {
      double acc = 0;
      for (int t = row_ptr[r]; t < row_ptr[r + 1]; ++t) acc += val[t] * x(col[t]);
      y(r) = acc;
    }
    return;
  }
#pragma omp parallel for schedule(static)
  for (int r = 0; r < dim; ++r) {
    double acc = 0;
    for (int t = row_ptr[r]; t < row_ptr[r + 1]; ++t) acc += val[t] * x(col[t]);
    y(r) = acc;
  }
}

SignGraph build_sign_graph(const std::vector<Mat3>& v_pairs, int m, Exec exec) {
  if (m < 3) throw Error(Errc::invalid_argument, "build_sign_graph: m must be >= 3");
  if (static_cast<int>(v_pairs.size()) != pair_count(m))
    throw Error(Errc::invalid_argument, "build_sign_graph: missing pair estimates");

  // mu per triple, packed as three bits (ij, jk, ik).
  const long long ntri = choose3(m);
  std::vector<unsigned char> mu(ntri);
  auto solve = [&](int k) {
    for (int j = 1; j < k; ++j)
      for (int i = 0; i < j; ++i) {
        const auto c = triangle_config(v_pairs[pair_index(i, j, m)],
                                       v_pairs[pair_index(j, k, m)],
                                       v_pairs[pair_index(i, k, m)]);
        mu[triple_index(i, j, k)] =
            static_cast<unsigned char>(c[0] | (c[1] << 1) | (c[2] << 2));
      }
  };
  if (exec == Exec::serial) {
    for (int k = 2; k < m; ++k) solve(k);
  } else {
#pragma omp parallel for schedule(dynamic)
    for (int k = 2; k < m; ++k) solve(k);
  }

  // Bit of pair (a,b), a < b, inside the sorted triple (i,j,k).
  auto bit_of = [](int a, int b, int i, int j) {
    if (a == i && b == j) return 0;  // (i,j)
    if (a == j) return 1;            // (j,k)
    return 2;                        // (i,k)
  };

  SignGraph g;
  g.m = m;
  g.dim = pair_count(m);
  const int deg = 2 * (m - 2);
  g.row_ptr.resize(g.dim + 1);
  for (int r = 0; r <= g.dim; ++r) g.row_ptr[r] = r * deg;
  g.col.resize(static_cast<size_t>(g.dim) * deg);
  g.val.resize(static_cast<size_t>(g.dim) * deg);

  auto fill_row = [&](int a, int b) {
    const int r = pair_index(a, b, m);
    std::vector<std::pair<int, signed char>> row;
    row.reserve(deg);
    for (int k = 0; k < m; ++k) {
      if (k == a || k == b) continue;
      int t[3] = {a, b, k};
      std::sort(t, t + 3);
      const unsigned char code = mu[triple_index(t[0], t[1], t[2])];
      const int self_bit = bit_of(a, b, t[0], t[1]);
      for (int other : {a, b}) {
        const int x = std::min(other, k), y = std::max(other, k);
        const int nb = bit_of(x, y, t[0], t[1]);
        const int parity = ((code >> self_bit) & 1) + ((code >> nb) & 1);
        row.emplace_back(pair_index(x, y, m),
                         static_cast<signed char>(parity % 2 == 0 ? 1 : -1));
      }
    }
    std::sort(row.begin(), row.end());
    for (int t = 0; t < deg; ++t) {
      g.col[static_cast<size_t>(r) * deg + t] = row[t].first;
      g.val[static_cast<size_t>(r) * deg + t] = row[t].second;
    }
  };
  if (exec == Exec::serial) {
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) fill_row(a, b);
  } else {
#pragma omp parallel for schedule(dynamic)
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) fill_row(a, b);
  }
  return g;
}

EigenResult leading_eigenvector(const SignGraph& g, double tol, int max_iter,
                                Exec exec) {
  if (g.dim == 0 || g.nonzeros() == 0)
    throw Error(Errc::invalid_argument, "leading_eigenvector: zero matrix");
  int max_deg = 0;
  for (int r = 0; r < g.dim; ++r)
    max_deg = std::max(max_deg, g.row_ptr[r + 1] - g.row_ptr[r]);
  const double shift = max_deg;

  Eigen::VectorXd x = start_vector(g.dim), y;
  for (int it = 1; it <= max_iter; ++it) {
    g.multiply(x, y, exec);
    y += shift * x;
    const double nrm = y.norm();
    if (nrm == 0) throw Error(Errc::convergence, "leading_eigenvector: iterate vanished");
    y /= nrm;
    const double diff = (y - x).norm();
    x.swap(y);
    if (diff < tol) {
      fix_sign(x);
      EigenResult r;
      g.multiply(x, y, exec);
      r.value = x.dot(y);
      r.vec = x;
      r.iterations = it;
      return r;
    }
  }
  throw Error(Errc::convergence, "leading_eigenvector: no convergence");
}

EigenResult leading_eigenvector(const Eigen::MatrixXd& a, double tol,
                                int max_iter) {
  if (a.rows() == 0 || a.isZero(0))
    throw Error(Errc::invalid_argument, "leading_eigenvector: zero matrix");
  const double shift = a.cwiseAbs().rowwise().sum().maxCoeff();
  Eigen::VectorXd x = start_vector(static_cast<int>(a.rows()));
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::VectorXd y = a * x + shift * x;
    y.normalize();
    const double diff = (y - x).norm();
    x = y;
    if (diff < tol) {
      fix_sign(x);
      return {x, x.dot(a * x), it};
    }
  }
  throw Error(Errc::convergence, "leading_eigenvector: no convergence");
}

HandSync sync_hands(const std::vector<Mat3>& v_pairs,
                    const std::vector<Mat3>& v_diag, int m, Exec exec) {
  if (static_cast<int>(v_diag.size()) != m)
    throw Error(Errc::invalid_argument, "sync_hands: need m diagonal estimates");
  const SignGraph g = build_sign_graph(v_pairs, m, exec);
  const EigenResult ev = leading_eigenvector(g, 1e-10, 100000, exec);

  HandSync out;
  out.eigvec = ev.vec;
  out.eigval = ev.value;
  out.v_pairs = v_pairs;
  out.pair_flipped.assign(v_pairs.size(), 0);
  for (size_t p = 0; p < v_pairs.size(); ++p)
    if (ev.vec(static_cast<int>(p)) < 0) {
      out.v_pairs[p] = j_conj(v_pairs[p]);
      out.pair_flipped[p] = 1;
    }

  out.v_diag = v_diag;
  out.diag_flipped.assign(m, 0);
  for (int i = 0; i < m; ++i) {
    const Mat3 jv = j_conj(v_diag[i]);
    int votes = 0;
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      const Mat3 vij = i < j ? out.v_pairs[pair_index(i, j, m)]
                             : Mat3(out.v_pairs[pair_index(j, i, m)].transpose());
      const double d = (jv * vij - vij).norm() - (v_diag[i] * vij - vij).norm();
      votes += d >= 0 ? 1 : -1;
    }
    if (votes < 0) {
      out.v_diag[i] = jv;
      out.diag_flipped[i] = 1;
    }
  }
  return out;
}

ViewingDirections factor_directions(const std::vector<Mat3>& v_pairs,
                                    const std::vector<Mat3>& v_diag, int m) {
  if (static_cast<int>(v_pairs.size()) != pair_count(m) ||
      static_cast<int>(v_diag.size()) != m)
    throw Error(Errc::invalid_argument, "factor_directions: bad input sizes");
  Eigen::MatrixXd V = Eigen::MatrixXd::Zero(3 * m, 3 * m);
  for (int i = 0; i < m; ++i) {
    V.block<3, 3>(3 * i, 3 * i) = v_diag[i];
    for (int j = i + 1; j < m; ++j) {
      const Mat3& b = v_pairs[pair_index(i, j, m)];
      V.block<3, 3>(3 * i, 3 * j) = b;
      V.block<3, 3>(3 * j, 3 * i) = b.transpose();
    }
  }
  // Diagonal blocks estimated independently need not be symmetric.
  V = 0.5 * (V + V.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(V);
  if (es.info() != Eigen::Success)
    throw Error(Errc::estimation_failed, "factor_directions: eigen-solver failure");
  const Eigen::VectorXd lam = es.eigenvalues();
  const Eigen::VectorXd top = es.eigenvectors().col(3 * m - 1);

  ViewingDirections out;
  out.eigen_gap = lam(3 * m - 1) != 0 ? lam(3 * m - 2) / lam(3 * m - 1) : 1.0;
  out.v.resize(m);
  out.r_tilde.resize(m);
  for (int i = 0; i < m; ++i) {
    const Vec3 b = top.segment<3>(3 * i);
    if (b.norm() < 1e-14)
      throw Error(Errc::estimation_failed, "factor_directions: vanishing block");
    out.v[i] = b.normalized();
    out.r_tilde[i] = complete_from_third_row(out.v[i]);
  }
  return out;
}

}  // namespace symlines

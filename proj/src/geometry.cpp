#include "symlines/geometry.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <string>

namespace symlines {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::invalid_order: return "invalid-order";
    case Errc::degenerate_exponent: return "degenerate-exponent";
    case Errc::degenerate_geometry: return "degenerate-geometry";
    case Errc::degenerate_pair: return "degenerate-pair";
    case Errc::estimation_failed: return "estimation-failed";
    case Errc::inconsistent_separation: return "inconsistent-separation";
    case Errc::voting_failed: return "voting-failed";
    case Errc::convergence: return "convergence";
    case Errc::io: return "io";
    case Errc::config: return "config";
  }
  return "unknown";
}

bool is_rotation(const Mat3& r, double tol) {
  if (!r.allFinite()) return false;
  if ((r * r.transpose() - Mat3::Identity()).norm() > tol) return false;
  return std::abs(r.determinant() - 1.0) <= tol;
}

Mat3 rot_x(double t) {
  const double c = std::cos(t), s = std::sin(t);
  Mat3 m;
  m << 1, 0, 0, 0, c, -s, 0, s, c;
  return m;
}

Mat3 rot_z(double t) {
  const double c = std::cos(t), s = std::sin(t);
  Mat3 m;
  m << c, -s, 0, s, c, 0, 0, 0, 1;
  return m;
}

Mat3 hand_flip() { return Vec3(-1, -1, 1).asDiagonal(); }

Rotation generator(int n) {
  if (n < 1) throw Error(Errc::invalid_order, "symmetry order must be >= 1");
  return rot_z(kTwoPi / n);
}

Rotation generator_power(int n, int s) {
  if (n < 1) throw Error(Errc::invalid_order, "symmetry order must be >= 1");
  int e = ((s % n) + n) % n;
  return rot_z(kTwoPi * e / n);
}

Mat3 power_sum(int n, int l) {
  if (n < 2) throw Error(Errc::invalid_order, "power_sum needs n > 1");
  if (((l % n) + n) % n == 0)
    throw Error(Errc::degenerate_exponent, "l mod n == 0");
  const Mat3 gl = generator_power(n, l);
  Mat3 acc = Mat3::Zero();
  Mat3 p = Mat3::Identity();
  for (int s = 0; s < n; ++s) {
    acc += p;
    p = gl * p;
  }
  return acc / n;
}

double wrap_2pi(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

double circ_dist(double a, double b) {
  double d = std::abs(wrap_2pi(a) - wrap_2pi(b));
  return std::min(d, kTwoPi - d);
}

int angle_to_bin(double a, int L) {
  long b = std::lround(wrap_2pi(a) * L / kTwoPi);
  return static_cast<int>(((b % L) + L) % L);
}

double bin_to_angle(int bin, int L) { return kTwoPi * bin / L; }

bool planes_parallel(const Mat3& m) {
  return std::abs(m(2, 2)) >= 1.0 - kParallelTol;
}

CommonLinePair commonline_angles_from(const Mat3& m) {
  if (planes_parallel(m))
    throw Error(Errc::degenerate_geometry, "planes are (nearly) parallel");
  CommonLinePair cl;
  // In frame i the common axis is e_z x M e_z = (-M23, M13, 0); in frame j
  // it is M^T e_z x e_z = (M32, -M31, 0).
  cl.alpha_ij = wrap_2pi(std::atan2(m(0, 2), -m(1, 2)));
  cl.alpha_ji = wrap_2pi(std::atan2(-m(2, 0), m(2, 1)));
  cl.gamma = std::acos(std::clamp(m(2, 2), -1.0, 1.0));
  return cl;
}

CommonLinePair commonline_angles(const Rotation& ri, const Rotation& rj, int n,
                                 int s) {
  const Mat3 m = ri.transpose() * generator_power(n, s) * rj;
  CommonLinePair cl = commonline_angles_from(m);
  cl.s = ((s % n) + n) % n;
  return cl;
}

SelfCommonLine self_commonline(const Rotation& r, int n, int s) {
  if (n < 2) throw Error(Errc::invalid_order, "self common lines need n > 1");
  if (s <= 0 || s >= n)
    throw Error(Errc::invalid_argument, "self common line exponent in [1,n)");
  const CommonLinePair cl = commonline_angles(r, r, n, s);
  return {cl.alpha_ij, cl.alpha_ji, cl.gamma, s};
}

Rotation rotation_from_cl(double alpha_ij, double gamma, double alpha_ji) {
  return rot_z(alpha_ij) * rot_x(gamma) * rot_z(-alpha_ji);
}

Mat3 relative_direction_sum(const std::vector<Mat3>& ms) {
  if (ms.empty())
    throw Error(Errc::invalid_argument, "relative_direction_sum: empty list");
  Mat3 acc = Mat3::Zero();
  for (const auto& m : ms) acc += m;
  return acc / static_cast<double>(ms.size());
}

Mat3 symmetrized_product(const Mat3& a, const Mat3& b, int n) {
  std::vector<Mat3> terms;
  terms.reserve(n);
  for (int s = 0; s < n; ++s)
    terms.push_back(a.transpose() * generator_power(n, s) * b);
  return relative_direction_sum(terms);
}

Rotation complete_from_third_row(const Vec3& v) {
  const Vec3 r3 = v.normalized();
  const Vec3 a = std::abs(r3.z()) > 0.999 ? Vec3::UnitX() : Vec3::UnitZ();
  const Vec3 r1 = a.cross(r3).normalized();
  const Vec3 r2 = r3.cross(r1);
  Rotation r;
  r.row(0) = r1.transpose();
  r.row(1) = r2.transpose();
  r.row(2) = r3.transpose();
  return r;
}

double rank1_distance(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m);
  const Vec3 sv = svd.singularValues();
  return (sv - Vec3(1, 0, 0)).norm();
}

double self_axis_dot_closed_form(const Vec3& r3, int n, int s) {
  const double c1 = r3.dot(generator_power(n, s) * r3);
  const double c2 = r3.dot(generator_power(n, 2 * s) * r3);
  return (c2 - c1 * c1) / (1.0 - c1 * c1);
}

}  // namespace symlines

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "symlines/error.hpp"

namespace symlines {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

// A rotation is a plain 3x3 matrix; is_rotation() checks the invariants.
using Rotation = Mat3;

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

// Parallel-plane threshold on |<R_i^(3), g^s R_j^(3)>|.
constexpr double kParallelTol = 1e-7;

bool is_rotation(const Mat3& r, double tol = 1e-12);

Mat3 rot_x(double t);
Mat3 rot_z(double t);
Mat3 hand_flip();  // J = diag(-1,-1,1)
inline Mat3 j_conj(const Mat3& m) { return hand_flip() * m * hand_flip(); }

Rotation generator(int n);
Rotation generator_power(int n, int s);

// (1/n) sum_s g^{l s}; throws degenerate_exponent when l mod n == 0.
Mat3 power_sum(int n, int l);

double wrap_2pi(double a);
// Minimal angular distance on the circle, in [0, pi].
double circ_dist(double a, double b);
int angle_to_bin(double a, int L);
double bin_to_angle(int bin, int L);

struct CommonLinePair {
  double alpha_ij = 0;
  double alpha_ji = 0;
  double gamma = 0;  // arccos of <R_i^(3), g^s R_j^(3)>, in [0, pi]
  int s = 0;
};

struct SelfCommonLine {
  double alpha_ii = 0;
  double alpha_gi = 0;
  double gamma_ii = 0;
  int s = 1;
};

// Angles of the s-th common line between images i and j, read off
// M = R_i^T g^s R_j.  Throws degenerate_geometry for near-parallel planes.
CommonLinePair commonline_angles(const Rotation& ri, const Rotation& rj, int n,
                                 int s);
// Same as above with M given directly.
CommonLinePair commonline_angles_from(const Mat3& m);
bool planes_parallel(const Mat3& m);

SelfCommonLine self_commonline(const Rotation& r, int n, int s);

// R_z(a_ij) R_x(gamma) R_z(-a_ji)
Rotation rotation_from_cl(double alpha_ij, double gamma, double alpha_ji);

// Arithmetic mean of the inputs.
Mat3 relative_direction_sum(const std::vector<Mat3>& ms);
// (1/n) sum_s a^T g^s b
Mat3 symmetrized_product(const Mat3& a, const Mat3& b, int n);

// Rotation whose third row is v/|v|; rows 1,2 completed deterministically.
Rotation complete_from_third_row(const Vec3& v);

// |(s1,s2,s3) - (1,0,0)| over the singular values of m.
double rank1_distance(const Mat3& m);

// Closed form of <q_ii^(n-s), q_ii^(s)> in terms of <r, g^s r>, <r, g^2s r>.
double self_axis_dot_closed_form(const Vec3& r3, int n, int s);

}  // namespace symlines

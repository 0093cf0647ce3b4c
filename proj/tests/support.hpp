#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "symlines/geometry.hpp"

namespace testkit {

using symlines::Mat3;
using symlines::Rotation;
using symlines::Vec3;

// Hand-rolled generators; independent of the library's simulator RNG.
struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  double uniform(double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
  }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng); }

  Vec3 unit() {
    Vec3 v(normal(), normal(), normal());
    return v.normalized();
  }

  // Axis-angle with an independent formula (Rodrigues), not quaternions.
  Rotation rotation() {
    const Vec3 axis = unit();
    // Haar measure: angle density proportional to 1 - cos(t) on [0, pi].
    double t;
    do {
      t = uniform(0.0, M_PI);
    } while (uniform(0.0, 2.0) > 1.0 - std::cos(t));
    return rodrigues(axis, t);
  }

  static Rotation rodrigues(const Vec3& k, double t) {
    Mat3 kx;
    kx << 0, -k.z(), k.y(), k.z(), 0, -k.x(), -k.y(), k.x(), 0;
    return Mat3::Identity() + std::sin(t) * kx + (1 - std::cos(t)) * kx * kx;
  }
};

inline double circ(double a, double b) {
  double d = std::fmod(std::abs(a - b), 2 * M_PI);
  return std::min(d, 2 * M_PI - d);
}

// Rotation by angle t about z, written out independently of the library.
inline Mat3 rz(double t) {
  Mat3 m;
  m << std::cos(t), -std::sin(t), 0, std::sin(t), std::cos(t), 0, 0, 0, 1;
  return m;
}

inline Mat3 jmat() {
  Mat3 j = Mat3::Identity();
  j(0, 0) = j(1, 1) = -1;
  return j;
}

inline Mat3 jc(const Mat3& m) { return jmat() * m * jmat(); }

inline int bin_dist(int a, int b, int L) {
  int d = std::abs(a - b) % L;
  return std::min(d, L - d);
}

}  // namespace testkit

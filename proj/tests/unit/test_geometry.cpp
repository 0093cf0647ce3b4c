#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "support.hpp"
#include "symlines/geometry.hpp"

using namespace symlines;
using testkit::Gen;

namespace {

// Common axis of the planes with normals R_i e3 and g^s R_j e3, expressed as
// an in-plane angle in each frame.
std::pair<double, double> cross_product_oracle(const Mat3& ri, const Mat3& rj) {
  const Vec3 q = ri.col(2).cross(rj.col(2)).normalized();
  const Vec3 a = ri.transpose() * q, b = rj.transpose() * q;
  return {std::atan2(a.y(), a.x()), std::atan2(b.y(), b.x())};
}

}  // namespace

TEST_CASE("generator values") {
  CHECK((generator(1) - Mat3::Identity()).norm() < 1e-15);
  Mat3 g4;
  g4 << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  CHECK((generator(4) - g4).norm() < 1e-15);
  Mat3 g3;
  g3 << -0.5, -std::sqrt(3.0) / 2, 0, std::sqrt(3.0) / 2, -0.5, 0, 0, 0, 1;
  CHECK((generator(3) - g3).norm() < 1e-15);
  for (int n : {1, 2, 3, 5, 11}) {
    Mat3 p = Mat3::Identity();
    for (int s = 0; s < n; ++s) p = p * generator(n);
    CHECK((p - Mat3::Identity()).norm() < 1e-12);
    CHECK(generator(n).row(2).isApprox(Vec3::UnitZ().transpose()));
    CHECK(generator(n).col(2).isApprox(Vec3::UnitZ()));
  }
  CHECK_THROWS_AS(generator(0), Error);
}

TEST_CASE("hand flip squares to identity") {
  CHECK(hand_flip() * hand_flip() == Mat3::Identity());
  CHECK(hand_flip() == testkit::jmat());
}

TEST_CASE("power sum is the axis projector") {
  Mat3 p = Mat3::Zero();
  p(2, 2) = 1;
  for (int n : {3, 4, 5, 7, 11})
    for (int l : {1, 2}) {
      if (l % n == 0) continue;
      CHECK((power_sum(n, l) - p).norm() < 1e-12);
    }
  try {
    power_sum(4, 4);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::degenerate_exponent);
  }
  CHECK_THROWS_AS(power_sum(1, 1), Error);
}

TEST_CASE("common line angles on a fixed pair") {
  // planes z = 0 and y = 0 meet along x, which sits at angle 0 in both
  // frames (the other orientation gives (pi, pi))
  const auto cl = commonline_angles(Mat3::Identity(), rot_x(kPi / 2), 1, 0);
  CHECK(circ_dist(cl.alpha_ij, 0.0) < 1e-12);
  CHECK(circ_dist(cl.alpha_ji, 0.0) < 1e-12);
  CHECK(cl.gamma == doctest::Approx(kPi / 2));
  const auto o = cross_product_oracle(Mat3::Identity(), rot_x(kPi / 2));
  CHECK(circ_dist(o.first, 0.0) < 1e-12);
  CHECK(circ_dist(o.second, 0.0) < 1e-12);
}

TEST_CASE("common line angles match the cross-product oracle") {
  Gen g(101);
  int checked = 0;
  for (int t = 0; t < 3000; ++t) {
    const Mat3 ri = g.rotation(), rj = g.rotation();
    const int n = g.integer(1, 7), s = g.integer(0, n - 1);
    const Mat3 gj = generator_power(n, s) * rj;
    if (std::abs(ri.col(2).dot(gj.col(2))) > 1 - 1e-6) continue;
    const auto cl = commonline_angles(ri, rj, n, s);
    const auto o = cross_product_oracle(ri, gj);
    const double same = std::max(circ_dist(cl.alpha_ij, o.first), circ_dist(cl.alpha_ji, o.second));
    const double flip = std::max(circ_dist(cl.alpha_ij, o.first + kPi),
                                 circ_dist(cl.alpha_ji, o.second + kPi));
    CHECK(std::min(same, flip) < 1e-9);
    CHECK(cl.alpha_ij >= 0.0);
    CHECK(cl.alpha_ij < kTwoPi);
    ++checked;
  }
  CHECK(checked > 2900);
}

TEST_CASE("identical planes are degenerate") {
  try {
    commonline_angles(Mat3::Identity(), Mat3::Identity(), 1, 0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::degenerate_geometry);
  }
}

TEST_CASE("Euler round trip") {
  CHECK((rotation_from_cl(0, 0, 0) - Mat3::Identity()).norm() < 1e-15);
  Mat3 expect;
  expect << 0, 0, 1, 1, 0, 0, 0, 1, 0;
  CHECK((rotation_from_cl(kPi / 2, kPi / 2, 0) - expect).norm() < 1e-12);
  Gen g(102);
  for (int t = 0; t < 3000; ++t) {
    const Mat3 ri = g.rotation(), rj = g.rotation();
    const int n = g.integer(1, 11), s = g.integer(0, n - 1);
    const Mat3 m = ri.transpose() * generator_power(n, s) * rj;
    if (planes_parallel(m)) continue;
    const auto cl = commonline_angles_from(m);
    CHECK((rotation_from_cl(cl.alpha_ij, cl.gamma, cl.alpha_ji) - m).norm() < 1e-9);
  }
}

TEST_CASE("self common line identities") {
  Gen g(103);
  for (int n : {3, 4, 7, 11})
    for (int t = 0; t < 500; ++t) {
      const Mat3 r = g.rotation();
      for (int s = 1; s < n; ++s) {
        const Mat3 m1 = r.transpose() * generator_power(n, s) * r;
        const Mat3 m2 = r.transpose() * generator_power(n, n - s) * r;
        if (planes_parallel(m1) || planes_parallel(m2)) continue;
        const auto a = self_commonline(r, n, s);
        const auto b = self_commonline(r, n, n - s);
        CHECK(circ_dist(a.alpha_gi, b.alpha_ii + kPi) < 1e-9);
        CHECK(std::abs(a.gamma_ii - b.gamma_ii) < 1e-12);
      }
    }
}

TEST_CASE("self common line separation bounds") {
  Gen g(104);
  for (int t = 0; t < 2000; ++t) {
    const Mat3 r = g.rotation();
    if (std::abs(r(2, 2)) > 1 - 1e-6) continue;
    const auto a3 = self_commonline(r, 3, 1), b3 = self_commonline(r, 3, 2);
    const double d3 = circ_dist(a3.alpha_ii, b3.alpha_ii);
    CHECK(d3 >= kPi / 3 - 1e-12);
    CHECK(d3 < kPi);
    const auto a4 = self_commonline(r, 4, 1), b4 = self_commonline(r, 4, 3);
    const double d4 = circ_dist(a4.alpha_ii, b4.alpha_ii);
    CHECK(d4 >= kPi / 2 - 1e-12);
    CHECK(d4 < kPi);
  }
}

TEST_CASE("closed-form self plane angle") {
  Gen g(105);
  for (int t = 0; t < 2000; ++t) {
    const Mat3 r = g.rotation();
    if (std::abs(r(2, 2)) > 1 - 1e-4) continue;
    for (int n : {3, 4}) {
      const auto a = self_commonline(r, n, 1), b = self_commonline(r, n, n - 1);
      const double c = std::cos(b.alpha_ii - a.alpha_ii);
      const double formula = n == 3 ? c / (1 - c) : (1 + c) / (1 - c);
      // direct: angle between the normals of R and g R
      const double direct = r.col(2).dot(generator(n) * r.col(2));
      CHECK(std::abs(formula - direct) < 1e-9);
      CHECK(std::abs(std::cos(a.gamma_ii) - direct) < 1e-12);
    }
  }
}

TEST_CASE("self axis dot closed form") {
  Gen g(106);
  for (int t = 0; t < 2000; ++t) {
    const Vec3 r3 = g.unit();
    for (int n : {3, 4, 5, 7}) {
      const int s = g.integer(1, n - 1);
      // 1 - c1^2 in the denominator
      const double c1 = r3.dot(generator_power(n, s) * r3);
      if (1 - c1 * c1 < 1e-2) continue;
      const Vec3 q1 = r3.cross(generator_power(n, s) * r3).normalized();
      const Vec3 q2 = r3.cross(generator_power(n, n - s) * r3).normalized();
      CHECK(std::abs(q2.dot(q1) - self_axis_dot_closed_form(r3, n, s)) < 1e-10);
    }
  }
}

TEST_CASE("relative direction sum") {
  std::vector<Mat3> ms;
  for (int s = 0; s < 3; ++s) ms.push_back(generator_power(3, s));
  Mat3 p = Mat3::Zero();
  p(2, 2) = 1;
  CHECK((relative_direction_sum(ms) - p).norm() < 1e-12);
  const Mat3 one = rot_x(0.3);
  CHECK((relative_direction_sum({one}) - one).norm() < 1e-15);
  CHECK_THROWS_AS(relative_direction_sum({}), Error);
  Gen g(107);
  for (int t = 0; t < 200; ++t) {
    const Mat3 ri = g.rotation(), rj = g.rotation();
    const Mat3 outer = ri.row(2).transpose() * rj.row(2);
    const Mat3 v = symmetrized_product(ri, rj, 7);
    CHECK((v - outer).norm() < 1e-12);
    CHECK(rank1_distance(v) < 1e-10);
  }
}

TEST_CASE("completion and rotation checks") {
  Gen g(108);
  for (int t = 0; t < 500; ++t) {
    const Vec3 v = g.unit() * g.uniform(0.5, 2.0);
    const Mat3 r = complete_from_third_row(v);
    CHECK(is_rotation(r));
    CHECK((r.row(2).transpose() - v.normalized()).norm() < 1e-12);
  }
  CHECK(is_rotation(complete_from_third_row(Vec3::UnitZ())));
  CHECK_FALSE(is_rotation(hand_flip() * Vec3(1, 1, -1).asDiagonal()));
  CHECK_FALSE(is_rotation(2 * Mat3::Identity()));
}

TEST_CASE("circle helpers") {
  CHECK(wrap_2pi(-0.5) == doctest::Approx(kTwoPi - 0.5));
  CHECK(wrap_2pi(kTwoPi) == doctest::Approx(0.0));
  CHECK(circ_dist(0.1, kTwoPi - 0.1) == doctest::Approx(0.2));
  CHECK(angle_to_bin(kTwoPi - 1e-9, 360) == 0);
  CHECK(angle_to_bin(kPi, 360) == 180);
  CHECK(bin_to_angle(90, 360) == doctest::Approx(kPi / 2));
}

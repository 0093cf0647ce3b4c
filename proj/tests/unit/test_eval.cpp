#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <numeric>

#include "doctest.h"
#include "json.hpp"
#include "support.hpp"
#include "symlines/error.hpp"
#include "symlines/eval.hpp"

using namespace symlines;

namespace {

std::vector<Rotation> random_set(int m, testkit::Gen& g) {
  std::vector<Rotation> r(m);
  for (auto& x : r) x = g.rotation();
  return r;
}

Mat3 rx_pi() {
  Mat3 f = Mat3::Identity();
  f(1, 1) = f(2, 2) = -1;
  return f;
}

}  // namespace

TEST_CASE("image error of a pure in-plane rotation is its angle") {
  testkit::Gen g(1);
  const Rotation r = g.rotation();
  CHECK(image_error_deg(r, r, 360) < 1e-6);
  for (double deg : {0.5, 3.0, 45.0}) {
    const Rotation a = r * testkit::rz(deg * M_PI / 180);
    CHECK(image_error_deg(r, a, 360) == doctest::Approx(deg).epsilon(1e-9));
  }
}

TEST_CASE("identical sets score zero") {
  testkit::Gen g(2);
  const auto t = random_set(20, g);
  const AlignmentReport r = align_and_score(t, t, 5, 360);
  CHECK(r.median_error_deg < 1e-5);
  CHECK(r.mean_error_deg < 1e-5);
  CHECK(r.exponents.size() == 20);
  CHECK(r.image_errors_deg.size() == 20);
}

TEST_CASE("members of the equivalence class are aligned") {
  testkit::Gen g(3);
  for (int n : {1, 3, 4, 7})
    for (int trial = 0; trial < 4; ++trial) {
      const auto t = random_set(15, g);
      const double a = g.uniform(0, 2 * M_PI);
      const int delta = g.integer(0, 1), flip = g.integer(0, 1);
      Mat3 j = Mat3::Identity();
      j(0, 0) = j(1, 1) = -1;
      std::vector<Rotation> e(t.size());
      for (size_t i = 0; i < t.size(); ++i) {
        const int s = g.integer(0, n - 1);
        // generator written out: rotation by 2 pi s / n about z
        Mat3 left = testkit::rz(a) * (flip ? rx_pi() : Mat3::Identity()) *
                    testkit::rz(2 * M_PI * s / n) * t[i];
        e[i] = delta ? Mat3(j * left * j) : left;
      }
      const AlignmentReport r = align_and_score(t, e, n, 360);
      CHECK(r.median_error_deg <= 0.25);
      CHECK(r.hand_flip == delta);
      for (int s : r.exponents) {
        CHECK(s >= 0);
        CHECK(s < n);
      }
    }
}

TEST_CASE("a small perturbation is reported at its size") {
  testkit::Gen g(4);
  const auto t = random_set(40, g);
  std::vector<Rotation> e(t.size());
  std::vector<double> raw;
  for (size_t i = 0; i < t.size(); ++i) {
    e[i] = t[i] * testkit::Gen::rodrigues(g.unit(), 2.0 * M_PI / 180);
    raw.push_back(image_error_deg(t[i], e[i], 360));
  }
  std::sort(raw.begin(), raw.end());
  const AlignmentReport r = align_and_score(t, e, 3, 360);
  const double ref = 0.5 * (raw[19] + raw[20]);
  CHECK(r.mean_error_deg <= std::accumulate(raw.begin(), raw.end(), 0.0) / raw.size() + 1e-6);
  CHECK(r.median_error_deg == doctest::Approx(ref).epsilon(0.3));
  CHECK(r.median_error_deg < 2.0);
}

TEST_CASE("reports") {
  testkit::Gen g(5);
  const auto t = random_set(6, g);
  const AlignmentReport r = align_and_score(t, random_set(6, g), 3, 72);
  const auto j = nlohmann::json::parse(report_json(r));
  for (const char* k : {"median_error_deg", "mean_error_deg", "hand_flip", "z_rotation_rad",
                        "axis_flip", "exponents", "image_errors_deg", "L", "protocol"})
    CHECK(j.contains(k));
  CHECK(std::isfinite(j["median_error_deg"].get<double>()));
  CHECK(j["image_errors_deg"].size() == 6);
  const std::string csv = report_csv(r);
  CHECK(csv.rfind("index,s,error_deg\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
}

TEST_CASE("bad input") {
  testkit::Gen g(6);
  const auto t = random_set(4, g);
  CHECK_THROWS_AS(align_and_score(t, random_set(3, g), 3, 360), Error);
  CHECK_THROWS_AS(align_and_score({}, {}, 3, 360), Error);
  CHECK_THROWS_AS(align_and_score(t, t, 3, 2), Error);
  CHECK_THROWS_AS(align_and_score(t, t, 0, 360), Error);
}

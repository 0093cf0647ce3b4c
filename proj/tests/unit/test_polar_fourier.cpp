#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <complex>

#include "doctest.h"
#include "support.hpp"
#include "symlines/polar_fourier.hpp"
#include "symlines/simulator.hpp"

using namespace symlines;
using cd = std::complex<double>;

namespace {

Image random_image(int N, std::uint64_t seed) {
  testkit::Gen g(seed);
  Image im(N);
  for (double& v : im.pixels) v = g.normal();
  return im;
}

PolarImage random_rays(int L, int n_r, std::uint64_t seed) {
  testkit::Gen g(seed);
  PolarImage p;
  p.L = L;
  p.n_r = n_r;
  p.delta_xi = 1.0;
  p.rays = RayMatrix(L, n_r);
  for (int l = 0; l < L; ++l)
    for (int k = 0; k < n_r; ++k) p.rays(l, k) = cd(g.normal(), g.normal());
  return p;
}

// Direct DFT written independently: sum over pixels in centered coordinates.
cd brute(const Image& im, double xi, double angle) {
  const int c = im.N / 2;
  cd acc = 0;
  for (int y = -c; y < im.N - c; ++y)
    for (int x = -c; x < im.N - c; ++x)
      acc += im.at(y + c, x + c) *
             std::exp(cd(0, -xi * (x * std::cos(angle) + y * std::sin(angle))));
  return acc;
}

}  // namespace

TEST_CASE("zero and delta images") {
  Image zero(17);
  const auto pz = polar_ft(zero, 8, 5, 0.3);
  CHECK(pz.rays.norm() == 0.0);
  Image delta(17);
  delta.at(8, 8) = 1.0;
  for (Exec e : {Exec::serial, Exec::parallel}) {
    const auto pd = polar_ft(delta, 8, 5, 0.3, e);
    for (int l = 0; l < 8; ++l)
      for (int k = 0; k < 5; ++k) CHECK(std::abs(pd.rays(l, k) - cd(1, 0)) < 1e-14);
  }
}

TEST_CASE("odd L is rejected") {
  CHECK_THROWS_AS(polar_ft(Image(17), 7, 5, 0.3), Error);
  CHECK_THROWS_AS(polar_ft(Image(17), 8, 0, 0.3), Error);
}

TEST_CASE("random image against brute-force DFT") {
  const Image im = random_image(17, 7);
  const int L = 12, n_r = 8;
  const double dxi = default_delta_xi(17);
  const auto ps = polar_ft(im, L, n_r, dxi, Exec::serial);
  const auto pp = polar_ft(im, L, n_r, dxi, Exec::parallel);
  double scale = 0;
  for (int l = 0; l < L; ++l)
    for (int k = 0; k < n_r; ++k) {
      const cd b = brute(im, (k + 1) * dxi, kTwoPi * l / L);
      scale = std::max(scale, std::abs(b));
      CHECK(std::abs(ps.rays(l, k) - b) < 1e-10);
      CHECK(std::abs(pp.rays(l, k) - b) < 1e-10);
    }
  CHECK(scale > 1.0);
  // conjugate symmetry of a real image
  for (int l = 0; l < L; ++l)
    for (int k = 0; k < n_r; ++k)
      CHECK(std::abs(ps.rays((l + L / 2) % L, k) - std::conj(ps.rays(l, k))) <
            1e-6 * std::max(1.0, std::abs(ps.rays(l, k))));
}

TEST_CASE("normalize") {
  PolarImage p = random_rays(4, 6, 3);
  p.rays.row(1) = p.rays.row(1).normalized() * 2.0;
  p.rays.row(2).setZero();
  const auto q = normalize(p);
  CHECK(q.normalized);
  CHECK(q.rays.row(1).norm() == doctest::Approx(1.0));
  CHECK(q.rays.row(2).norm() == 0.0);
  CHECK(q.rays.allFinite());
  const auto q2 = normalize(q);
  CHECK((q2.rays - q.rays).norm() < 1e-15);
}

TEST_CASE("band limit keeps the frequency grid") {
  const PolarImage p = random_rays(6, 10, 5);
  const auto b = band_limit(p, 2, 7);
  CHECK(b.n_r == 5);
  CHECK(b.k_offset == 2);
  CHECK(b.rays(3, 0) == p.rays(3, 2));
  CHECK_THROWS_AS(band_limit(p, 5, 5), Error);
  CHECK_THROWS_AS(band_limit(p, 0, 11), Error);
}

TEST_CASE("correlation tables") {
  const Image im = random_image(21, 9);
  const int L = 24;
  const auto p = normalize(polar_ft(im, L, 10, default_delta_xi(21)));
  const auto t = correlation_tables(p, p);
  for (int l = 0; l < L; ++l) CHECK(t.cross(l, l) == doctest::Approx(1.0).epsilon(1e-9));
  for (int a = 0; a < L; ++a)
    for (int b = 0; b < L; ++b) {
      CHECK(std::abs(t.selfprod(a, b) - t.cross(a, (b + L / 2) % L)) < 1e-6);
      CHECK(std::abs(t.cross(a, b)) <= 1 + 1e-9);
      CHECK(std::abs(t.selfprod(a, b)) <= 1 + 1e-9);
    }
  // both kernels and the single-entry helper agree
  const auto q = normalize(polar_ft(random_image(21, 10), L, 10, default_delta_xi(21)));
  const auto ser = correlation_tables(p, q, Exec::serial);
  const auto par = correlation_tables(p, q, Exec::parallel);
  CHECK((ser.cross - par.cross).norm() < 1e-12);
  CHECK((ser.selfprod - par.selfprod).norm() < 1e-12);
  CHECK((cross_table(p, q) - par.cross).norm() < 1e-12);
  CHECK((self_table(p) - t.selfprod).norm() < 1e-12);
  CHECK(line_correlation(p, 3, q, 17) == doctest::Approx(par.cross(3, 17)));
  // independent oracle for one entry
  cd acc = 0;
  for (int k = 0; k < 10; ++k) acc += p.rays(5, k) * std::conj(q.rays(11, k));
  CHECK(par.cross(5, 11) == doctest::Approx(acc.real()));
}

TEST_CASE("shape mismatch") {
  const auto a = random_rays(8, 5, 1), b = random_rays(8, 6, 2);
  CHECK_THROWS_AS(correlation_tables(a, b), Error);
  CHECK_THROWS_AS(cross_table(a, b), Error);
}

TEST_CASE("independent random rays are weakly correlated") {
  const auto a = normalize(random_rays(120, 50, 11));
  const auto b = normalize(random_rays(120, 50, 12));
  const auto t = correlation_tables(a, b);
  std::vector<double> v;
  for (int i = 0; i < 120; ++i)
    for (int j = 0; j < 120; ++j) v.push_back(std::abs(t.cross(i, j)));
  std::sort(v.begin(), v.end());
  CHECK(v[static_cast<size_t>(0.99 * v.size())] < 0.5);
  CHECK(v.back() < 1.0);
}

TEST_CASE("in-plane rotation shifts rays and keeps energy") {
  const Scene sc = random_scene(3, 3, 6, 21);
  const int L = 36;
  const Rotation r = sc.rotations[0];
  Scene turned = sc;
  turned.rotations[0] = r * rot_z(kTwoPi / L);
  const auto a = project_rays(sc, 0, L, 12, 0.5);
  const auto b = project_rays(turned, 0, L, 12, 0.5);
  for (int l = 0; l < L; ++l)
    CHECK((b.rays.row(l) - a.rays.row((l + 1) % L)).norm() <=
          1e-3 * std::max(1.0, a.rays.row(l).norm()));
  CHECK(a.rays.squaredNorm() == doctest::Approx(b.rays.squaredNorm()).epsilon(1e-6));
}

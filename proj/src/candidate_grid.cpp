#include "symlines/candidate_grid.hpp"

#include <cmath>

#include "symlines/error.hpp"

namespace symlines {

double default_grid_step(int /*n*/) {
  // (360/s)(180/s)(360/(n s)) = 360000/n  =>  s^3 = 64.8 for every n.
  return std::cbrt(360.0 * 180.0 * 360.0 / 360000.0);
}

double third_column_azimuth(const Rotation& r) {
  return wrap_2pi(std::atan2(r(1, 2), r(0, 2)));
}

CandidateGrid build_grid(int n, double step_deg, int L, Exec exec) {
  if (n < 1) throw Error(Errc::invalid_order, "build_grid: n must be >= 1");
  if (!(step_deg > 0)) throw Error(Errc::invalid_argument, "build_grid: step must be > 0");
  if (L <= 0 || L % 2 != 0) throw Error(Errc::invalid_argument, "build_grid: L must be even");

  CandidateGrid g;
  g.n = n;
  g.L = L;
  g.step_deg = step_deg;
  g.n_phi = std::max(1, static_cast<int>(std::lround(360.0 / step_deg)));
  g.n_theta = std::max(1, static_cast<int>(std::lround(180.0 / step_deg)));
  g.n_inplane = std::max(1, static_cast<int>(std::lround(360.0 / n / step_deg)));
  g.inplane_step = kTwoPi / (n * g.n_inplane);

  const int nd = g.n_phi * g.n_theta;
  const int ns = g.self_count();
  const double pole = std::cos(5.0 * kPi / 180.0);
  const double sector = kTwoPi / n;
  g.base.resize(nd);
  g.degenerate.assign(nd, false);
  g.self_bins.assign(nd, {});
  g.candidates.resize(static_cast<size_t>(nd) * g.n_inplane);

  auto fill = [&](int d) {
    const int ip = d / g.n_theta, it = d % g.n_theta;
    const double phi = kTwoPi * ip / g.n_phi;
    const double th = kPi * (it + 0.5) / g.n_theta;
    const Vec3 v(std::sin(th) * std::cos(phi), std::sin(th) * std::sin(phi),
                 std::cos(th));
    const Rotation rb = complete_from_third_row(v);
    g.base[d] = rb;
    bool degen = std::abs(v.z()) > pole;
    std::vector<std::pair<int, int>> bins;
    if (!degen && n > 2) {
      for (int s = 1; s <= ns; ++s) {
        const Mat3 m1 = rb.transpose() * generator_power(n, s) * rb;
        const Mat3 m2 = rb.transpose() * generator_power(n, n - s) * rb;
        if (planes_parallel(m1) || planes_parallel(m2)) {
          degen = true;
          break;
        }
        const int b1 = angle_to_bin(commonline_angles_from(m1).alpha_ij, L);
        const int b2 = angle_to_bin(commonline_angles_from(m2).alpha_ij, L);
        // Equatorial views: both lines lie along the projected axis, so the
        // pair is one line or its antipode and scores 1 for any image.
        const int sep = std::abs(b1 - b2);
        if (sep == 0 || 2 * sep == L) {
          degen = true;
          break;
        }
        bins.emplace_back(b1, b2);
      }
    }
    g.degenerate[d] = degen;
    g.self_bins[d] = degen ? std::vector<std::pair<int, int>>{} : bins;
    for (int k = 0; k < g.n_inplane; ++k) {
      Rotation r = rot_z((k + 0.5) * g.inplane_step) * rb;
      // Move into SO_n(3): third-column azimuth in [0, 2pi/n).
      const int s = static_cast<int>(std::floor(third_column_azimuth(r) / sector));
      r = generator_power(n, -s) * r;
      double az = third_column_azimuth(r);
      if (az >= sector) r = generator_power(n, az > kPi ? 1 : -1) * r;
      g.candidates[static_cast<size_t>(d) * g.n_inplane + k] = r;
    }
  };

  if (exec == Exec::serial) {
    for (int d = 0; d < nd; ++d) fill(d);
  } else {
#pragma omp parallel for schedule(static)
    for (int d = 0; d < nd; ++d) fill(d);
  }
  return g;
}

std::vector<LineBins> pair_line_bins(const Rotation& ri, const Rotation& rj,
                                     int n, int L) {
  std::vector<LineBins> out(n);
  bool any = false;
  for (int s = 0; s < n; ++s) {
    const Mat3 m = ri.transpose() * generator_power(n, s) * rj;
    out[s].s = s;
    if (planes_parallel(m)) {
      out[s].degenerate = true;
      continue;
    }
    const CommonLinePair cl = commonline_angles_from(m);
    out[s].bin_i = angle_to_bin(cl.alpha_ij, L);
    out[s].bin_j = angle_to_bin(cl.alpha_ji, L);
    any = true;
  }
  if (!any) throw Error(Errc::degenerate_pair, "pair_line_bins: all planes parallel");
  return out;
}

int nearest_candidate(const CandidateGrid& grid, const Rotation& r) {
  const Vec3 v = r.row(2).transpose();
  int best = 0;
  double best_dot = -2;
  for (int d = 0; d < grid.directions(); ++d) {
    const double dot = grid.base[d].row(2).dot(v.transpose());
    if (dot > best_dot) {
      best_dot = dot;
      best = d;
    }
  }
  // r ~ g^s R_z(theta) base  =>  r base^T ~ R_z(theta + 2 pi s / n)
  const Mat3 z = r * grid.base[best].transpose();
  const double ang = wrap_2pi(std::atan2(z(1, 0), z(0, 0)));
  const double within = std::fmod(ang, kTwoPi / grid.n);
  int k = static_cast<int>(std::lround(within / grid.inplane_step - 0.5));
  k = ((k % grid.n_inplane) + grid.n_inplane) % grid.n_inplane;
  return grid.index(best, k);
}

}  // namespace symlines

#include "symlines/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "symlines/error.hpp"

namespace symlines {

namespace {

constexpr double kDeg = 180.0 / kPi;

struct Candidate {
  double proxy = -std::numeric_limits<double>::infinity();
  double phi = 0;
  int delta = 0;
  int flip = 0;
};

Mat3 flip_of(int f) { return f ? rot_x(kPi) : Mat3::Identity(); }

// Aligned estimate O g^s F R_z(phi) est J^delta (O folded into phi).
Mat3 adjust(const Mat3& est, int n, int s, int flip, double phi, int delta) {
  Mat3 e = delta ? Mat3(est * hand_flip()) : est;
  return generator_power(n, s) * flip_of(flip) * rot_z(phi) * e;
}

// Proxy: sum_i max_s trace(R_z(phi) X_is), where trace(R_z(phi) X_is) is
// the in-plane part of trace(R_i^T A_i).
double proxy_at(const std::vector<std::vector<Mat3>>& x, double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  double total = 0;
  for (const auto& xi : x) {
    double best = -std::numeric_limits<double>::infinity();
    for (const Mat3& a : xi) {
      const double t = c * (a(0, 0) + a(1, 1)) + s * (a(0, 1) - a(1, 0)) + a(2, 2);
      best = std::max(best, t);
    }
    total += best;
  }
  return total;
}

}  // namespace

double image_error_deg(const Rotation& truth, const Rotation& aligned, int L) {
  double acc = 0;
  for (int l = 0; l < L; ++l) {
    const double a = kTwoPi * l / L;
    const Vec3 c(std::cos(a), std::sin(a), 0.0);
    const double d = std::clamp((truth * c).dot(aligned * c), -1.0, 1.0);
    acc += std::acos(d);
  }
  return acc / L * kDeg;
}

AlignmentReport align_and_score(const std::vector<Rotation>& truth,
                                const std::vector<Rotation>& est, int n, int L) {
  if (truth.size() != est.size())
    throw Error(Errc::invalid_argument, "align_and_score: length mismatch");
  if (truth.empty())
    throw Error(Errc::invalid_argument, "align_and_score: no rotations");
  if (L < 4) throw Error(Errc::invalid_argument, "align_and_score: L must be >= 4");
  if (n < 1) throw Error(Errc::invalid_order, "align_and_score: n must be >= 1");
  const int m = static_cast<int>(truth.size());

  std::vector<Mat3> g(n);
  for (int s = 0; s < n; ++s) g[s] = generator_power(n, s);

  const int coarse = 1440;  // 0.25 deg
  const double dphi = kTwoPi / coarse;
  Candidate best;
  for (int delta = 0; delta < 2; ++delta)
    for (int flip = 0; flip < 2; ++flip) {
      // X_is = B C^T g^s F with B = (E J^delta)[:, :2], C = R[:, :2].
      std::vector<std::vector<Mat3>> x(m, std::vector<Mat3>(n));
      for (int i = 0; i < m; ++i) {
        const Mat3 e = delta ? Mat3(est[i] * hand_flip()) : est[i];
        const Mat3 bc = e.leftCols<2>() * truth[i].leftCols<2>().transpose();
        for (int s = 0; s < n; ++s) x[i][s] = bc * g[s] * flip_of(flip);
      }
      std::vector<double> vals(coarse);
#pragma omp parallel for schedule(static)
      for (int t = 0; t < coarse; ++t) vals[t] = proxy_at(x, t * dphi);
      int arg = 0;
      for (int t = 1; t < coarse; ++t)
        if (vals[t] > vals[arg]) arg = t;
      // one refinement pass at 1/25 of the coarse step
      double phi = arg * dphi, pv = vals[arg];
      for (int t = -25; t <= 25; ++t) {
        const double p = arg * dphi + t * dphi / 25.0;
        const double v = proxy_at(x, p);
        if (v > pv) {
          pv = v;
          phi = p;
        }
      }
      if (pv > best.proxy) best = {pv, wrap_2pi(phi), delta, flip};
    }

  AlignmentReport r;
  r.L = L;
  r.hand_flip = best.delta;
  r.x_flip = best.flip != 0;
  r.z_rotation = best.phi;
  r.exponents.assign(m, 0);
  r.image_errors_deg.assign(m, 0.0);
  std::vector<double> all;
  all.reserve(static_cast<size_t>(m) * L);
  for (int i = 0; i < m; ++i) {
    double be = std::numeric_limits<double>::infinity();
    for (int s = 0; s < n; ++s) {
      const Mat3 a = adjust(est[i], n, s, best.flip, best.phi, best.delta);
      const double e = image_error_deg(truth[i], a, L);
      if (e < be) {
        be = e;
        r.exponents[i] = s;
      }
    }
    r.image_errors_deg[i] = be;
    const Mat3 a = adjust(est[i], n, r.exponents[i], best.flip, best.phi, best.delta);
    for (int l = 0; l < L; ++l) {
      const double ang = kTwoPi * l / L;
      const Vec3 c(std::cos(ang), std::sin(ang), 0.0);
      all.push_back(std::acos(std::clamp((truth[i] * c).dot(a * c), -1.0, 1.0)) * kDeg);
    }
  }
  double sum = 0;
  for (double e : all) sum += e;
  r.mean_error_deg = sum / all.size();
  std::sort(all.begin(), all.end());
  const size_t h = all.size() / 2;
  r.median_error_deg = all.size() % 2 ? all[h] : 0.5 * (all[h - 1] + all[h]);
  return r;
}

std::string report_json(const AlignmentReport& r) {
  nlohmann::json j;
  j["median_error_deg"] = r.median_error_deg;
  j["mean_error_deg"] = r.mean_error_deg;
  j["hand_flip"] = r.hand_flip;
  j["z_rotation_rad"] = r.z_rotation;
  j["axis_flip"] = r.x_flip ? "x-pi" : "none";
  j["exponents"] = r.exponents;
  j["image_errors_deg"] = r.image_errors_deg;
  j["L"] = r.L;
  j["protocol"] =
      "registered over global hand, axis flip, z-rotation (0.25 deg grid, "
      "refined once) and per-image symmetry exponent before scoring";
  return j.dump(2);
}

std::string report_csv(const AlignmentReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "index,s,error_deg\n";
  for (size_t i = 0; i < r.image_errors_deg.size(); ++i)
    os << i << ',' << r.exponents[i] << ',' << r.image_errors_deg[i] << '\n';
  return os.str();
}

}  // namespace symlines

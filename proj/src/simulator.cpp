#include "symlines/simulator.hpp"

#include <cmath>

#include "symlines/error.hpp"

namespace symlines {

namespace {

using cd = std::complex<double>;

// All centers of the symmetrized volume: g^s c_b.
std::vector<Blob> expanded(const BlobVolume& vol) {
  std::vector<Blob> out;
  out.reserve(vol.blobs.size() * vol.n);
  for (int s = 0; s < vol.n; ++s) {
    const Mat3 g = generator_power(vol.n, s);
    for (const auto& b : vol.blobs) out.push_back({g * b.center, b.sigma, b.amplitude});
  }
  return out;
}

}  // namespace

double BlobVolume::density(const Vec3& r) const {
  double acc = 0;
  for (int s = 0; s < n; ++s) {
    const Vec3 rr = generator_power(n, -s) * r;
    for (const auto& b : blobs)
      acc += b.amplitude *
             std::exp(-(rr - b.center).squaredNorm() / (2 * b.sigma * b.sigma));
  }
  return acc;
}

cd BlobVolume::fourier(const Vec3& k) const {
  const double k2 = k.squaredNorm();
  cd acc = 0;
  for (int s = 0; s < n; ++s) {
    const Mat3 g = generator_power(n, s);
    for (const auto& b : blobs) {
      const double sig = b.sigma;
      const double mag = b.amplitude * std::pow(kTwoPi * sig * sig, 1.5) *
                         std::exp(-0.5 * sig * sig * k2);
      acc += std::polar(mag, -k.dot(g * b.center));
    }
  }
  return acc;
}

double BlobVolume::total_mass() const {
  double acc = 0;
  for (const auto& b : blobs)
    acc += b.amplitude * std::pow(kTwoPi * b.sigma * b.sigma, 1.5);
  return acc * n;
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t index,
                            std::uint64_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(tag)};
  return std::mt19937_64(seq);
}

Rotation random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::Quaterniond q;
  double w, x, y, z;
  do {
    w = nd(rng);
    x = nd(rng);
    y = nd(rng);
    z = nd(rng);
  } while (w * w + x * x + y * y + z * z < 1e-12);
  q = Eigen::Quaterniond(w, x, y, z).normalized();
  return q.toRotationMatrix();
}

Scene random_scene(int n, int m, int blob_count, std::uint64_t seed,
                   const SceneOptions& opt) {
  if (n < 1) throw Error(Errc::invalid_order, "random_scene: n must be >= 1");
  if (m < 3) throw Error(Errc::invalid_argument, "random_scene: m must be >= 3");
  if (blob_count < 2)
    throw Error(Errc::invalid_argument, "random_scene: blob_count must be >= 2");
  Scene sc;
  sc.seed = seed;
  sc.extent = opt.extent;
  sc.volume.n = n;

  auto vrng = make_stream(seed, 0, 1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> us(opt.sigma_min, opt.sigma_max);
  std::uniform_real_distribution<double> ua(opt.amp_min, opt.amp_max);
  while (static_cast<int>(sc.volume.blobs.size()) < blob_count) {
    Vec3 c(u(vrng), u(vrng), u(vrng));
    if (c.norm() >= 1.0) continue;
    if (std::hypot(c.x(), c.y()) <= opt.axis_clearance) continue;
    const double sig = us(vrng);
    const double amp = ua(vrng);
    sc.volume.blobs.push_back({c, sig, amp});
  }

  sc.rotations.reserve(m);
  for (int i = 0; i < m; ++i) {
    auto rrng = make_stream(seed, static_cast<std::uint64_t>(i), 2);
    sc.rotations.push_back(random_rotation(rrng));
  }
  return sc;
}

std::vector<cd> ray_at(const BlobVolume& vol, const Rotation& r, double angle,
                       int n_r, double delta_xi) {
  const Vec3 dir = r * Vec3(std::cos(angle), std::sin(angle), 0.0);
  std::vector<cd> out(n_r);
  for (int k = 0; k < n_r; ++k) out[k] = vol.fourier((k + 1) * delta_xi * dir);
  return out;
}

PolarImage project_rays(const Scene& scene, int index, int L, int n_r,
                        double delta_xi) {
  if (index < 0 || index >= static_cast<int>(scene.rotations.size()))
    throw Error(Errc::invalid_argument, "project_rays: index out of range");
  if (L <= 0 || L % 2 != 0)
    throw Error(Errc::invalid_argument, "project_rays: L must be even");
  const Rotation& r = scene.rotations[index];
  const std::vector<Blob> all = expanded(scene.volume);
  PolarImage p;
  p.L = L;
  p.n_r = n_r;
  p.delta_xi = delta_xi;
  p.rays = RayMatrix::Zero(L, n_r);
  for (int l = 0; l < L; ++l) {
    const double a = kTwoPi * l / L;
    const Vec3 dir = r * Vec3(std::cos(a), std::sin(a), 0.0);
    for (int k = 0; k < n_r; ++k) {
      const Vec3 kv = (k + 1) * delta_xi * dir;
      const double k2 = kv.squaredNorm();
      cd acc = 0;
      for (const auto& b : all) {
        const double sig = b.sigma;
        const double mag = b.amplitude * std::pow(kTwoPi * sig * sig, 1.5) *
                           std::exp(-0.5 * sig * sig * k2);
        acc += std::polar(mag, -kv.dot(b.center));
      }
      p.rays(l, k) = acc;
    }
  }
  return p;
}

Image project_image(const BlobVolume& vol, const Rotation& r, int N,
                    double pixel_size) {
  if (N < 16) throw Error(Errc::invalid_argument, "project_image: N must be >= 16");
  Image img(N, pixel_size);
  const int c = N / 2;
  for (const auto& b : expanded(vol)) {
    // P(x,y) = int psi(R (x,y,z)) dz, so a blob at c lands at (R^T c)_{x,y}.
    const Vec3 p = r.transpose() * b.center;
    const double w = b.amplitude * b.sigma * std::sqrt(kTwoPi);
    const double inv = 1.0 / (2 * b.sigma * b.sigma);
    for (int row = 0; row < N; ++row) {
      const double dy = (row - c) * pixel_size - p.y();
      const double ey = std::exp(-dy * dy * inv);
      for (int col = 0; col < N; ++col) {
        const double dx = (col - c) * pixel_size - p.x();
        img.at(row, col) += w * ey * std::exp(-dx * dx * inv);
      }
    }
  }
  return img;
}

Image project_image(const Scene& scene, int index, int N) {
  if (index < 0 || index >= static_cast<int>(scene.rotations.size()))
    throw Error(Errc::invalid_argument, "project_image: index out of range");
  return project_image(scene.volume, scene.rotations[index], N,
                       scene.pixel_size(N));
}

double pixel_variance(const Image& img) {
  const size_t cnt = img.pixels.size();
  if (cnt == 0) return 0;
  double mean = 0;
  for (double v : img.pixels) mean += v;
  mean /= cnt;
  double var = 0;
  for (double v : img.pixels) var += (v - mean) * (v - mean);
  return var / cnt;
}

Image add_noise(const Image& img, double snr, std::uint64_t seed) {
  if (!(snr > 0)) throw Error(Errc::invalid_argument, "add_noise: snr must be > 0");
  Image out = img;
  const double sd = std::sqrt(pixel_variance(img) / snr);
  std::mt19937_64 rng = make_stream(seed, 0, 3);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (double& v : out.pixels) v += sd * nd(rng);
  return out;
}

}  // namespace symlines

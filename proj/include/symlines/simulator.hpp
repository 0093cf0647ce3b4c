#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "symlines/geometry.hpp"
#include "symlines/polar_fourier.hpp"

namespace symlines {

struct Blob {
  Vec3 center;
  double sigma = 0.1;
  double amplitude = 1.0;
};

// Cn-symmetrized sum of isotropic Gaussians.
struct BlobVolume {
  int n = 1;
  std::vector<Blob> blobs;

  double density(const Vec3& r) const;
  std::complex<double> fourier(const Vec3& k) const;
  // Sum of a * (2 pi sigma^2)^{3/2} over all symmetry copies.
  double total_mass() const;
};

struct SceneOptions {
  double sigma_min = 0.06;
  double sigma_max = 0.12;
  double amp_min = 0.5;
  double amp_max = 1.5;
  double axis_clearance = 0.15;
  // Half-width of the imaged field in volume units; project_image maps
  // [-extent, extent) onto N pixels.
  double extent = 1.5;
};

struct Scene {
  BlobVolume volume;
  std::vector<Rotation> rotations;
  std::uint64_t seed = 0;
  double extent = 1.5;

  double pixel_size(int N) const { return 2.0 * extent / N; }
};

// Deterministic sub-stream for (seed, index, tag).
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t index,
                            std::uint64_t tag);

Rotation random_rotation(std::mt19937_64& rng);

Scene random_scene(int n, int m, int blob_count, std::uint64_t seed,
                   const SceneOptions& opt = {});

// Analytic rays psi_hat(xi_k R_i c_l); delta_xi in volume frequency units.
PolarImage project_rays(const Scene& scene, int index, int L, int n_r,
                        double delta_xi);
// One analytic ray at an arbitrary in-plane angle.
std::vector<std::complex<double>> ray_at(const BlobVolume& vol,
                                         const Rotation& r, double angle,
                                         int n_r, double delta_xi);

Image project_image(const Scene& scene, int index, int N);
Image project_image(const BlobVolume& vol, const Rotation& r, int N,
                    double pixel_size);

Image add_noise(const Image& img, double snr, std::uint64_t seed);

double pixel_variance(const Image& img);

}  // namespace symlines

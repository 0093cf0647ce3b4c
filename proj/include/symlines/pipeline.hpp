#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "symlines/exec.hpp"
#include "symlines/geometry.hpp"
#include "symlines/polar_fourier.hpp"
#include "symlines/simulator.hpp"

namespace symlines {

enum class Mode { cn, c3c4_fast };

struct PipelineConfig {
  int n = 3;
  int m = 25;
  int L = 360;
  int N = 65;             // image size
  int n_r = 0;            // radial samples; 0 -> N / 2
  double grid_step = 0;   // degrees; 0 -> default_grid_step(n)
  int T = 50;             // viewing directions kept per image
  int K = 0;              // in-plane grid; 0 -> default_inplane_k(n)
  std::optional<double> snr;
  std::uint64_t seed = 1;
  int blob_count = 8;
  bool snap_to_grid = false;
  int k_min = 0;          // radial band [k_min, k_max); k_max 0 -> n_r
  int k_max = 0;
  int vote_bins = 60;
  Mode mode = Mode::cn;
  bool serial = false;
  std::string stack_path = "stack.bin";
  std::string truth_path = "truth.csv";
  std::string estimate_path = "estimates.csv";
  std::string report_path = "report.json";
  std::string errors_path = "errors.csv";

  int image_size() const { return N; }
  int radial() const { return n_r > 0 ? n_r : N / 2; }
  Exec exec() const { return serial ? Exec::serial : Exec::parallel; }
};

std::string mode_name(Mode m);
Mode parse_mode(const std::string& s);

// Throws Error(config) on violated invariants.
void validate(const PipelineConfig& c);
PipelineConfig config_from_json(const std::string& text,
                                PipelineConfig base = {});
std::string config_to_json(const PipelineConfig& c);

struct Simulation {
  Scene scene;
  std::vector<Image> images;
};

// Deterministic per seed; rotations optionally snapped to the candidate grid.
Simulation simulate(const PipelineConfig& c);

struct StageTiming {
  std::string stage;
  double seconds = 0;
};

struct AbinitioResult {
  std::vector<Rotation> rotations;
  std::vector<StageTiming> timings;
  double hand_eigval = 0;     // leading eigenvalue of the sign graph
  double hand_eig_ratio = 0;  // eigval / (2 (m - 2))
  double direction_gap = 0;   // lambda_2 / lambda_1 of the direction matrix
  double inplane_eigval = 0;  // leading eigenvalue of the in-plane matrix / m
  int failed_votes = 0;
};

std::vector<PolarImage> images_to_polar(const std::vector<Image>& images,
                                        const PipelineConfig& c);

// Stage failures surface as StageError.
AbinitioResult run_abinitio(const std::vector<PolarImage>& polar,
                            const PipelineConfig& c);
AbinitioResult run_abinitio(const std::vector<Image>& images,
                            const PipelineConfig& c);

}  // namespace symlines

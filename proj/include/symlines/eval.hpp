#pragma once

#include <string>
#include <vector>

#include "symlines/geometry.hpp"

namespace symlines {

struct AlignmentReport {
  double median_error_deg = 0;
  double mean_error_deg = 0;
  int hand_flip = 0;         // delta
  double z_rotation = 0;     // radians
  bool x_flip = false;       // axis flip R_x(pi)
  std::vector<int> exponents;            // s_i
  std::vector<double> image_errors_deg;  // mean over lines, per image
  int L = 0;
};

// Aligns est to truth over {O g^s R J^delta} and scores the ray-wise angular
// error on L in-plane directions.
AlignmentReport align_and_score(const std::vector<Rotation>& truth,
                                const std::vector<Rotation>& est, int n, int L);

// Mean over l of arccos <R c_l, A c_l>, in degrees.
double image_error_deg(const Rotation& truth, const Rotation& aligned, int L);

std::string report_json(const AlignmentReport& r);
std::string report_csv(const AlignmentReport& r);

}  // namespace symlines

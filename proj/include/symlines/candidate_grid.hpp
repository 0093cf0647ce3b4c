#pragma once

#include <vector>

#include "symlines/exec.hpp"
#include "symlines/geometry.hpp"

namespace symlines {

struct LineBins {
  int s = 0;
  int bin_i = 0;
  int bin_j = 0;
  bool degenerate = false;
};

// Candidates are indexed as c = d * n_inplane + k, with d the viewing
// direction (phi~, theta~) and k the in-plane step.  Self common lines
// depend on d only, so their bins are cached per direction.
struct CandidateGrid {
  int n = 1;
  int L = 360;
  double step_deg = 4.0;
  int n_phi = 0;
  int n_theta = 0;
  int n_inplane = 0;
  double inplane_step = 0;  // 2 pi / (n * n_inplane)

  std::vector<Rotation> candidates;
  std::vector<Rotation> base;             // completion per direction
  std::vector<bool> degenerate;           // per direction
  std::vector<std::vector<std::pair<int, int>>> self_bins;  // per direction

  int size() const { return static_cast<int>(candidates.size()); }
  int directions() const { return static_cast<int>(base.size()); }
  int direction_of(int c) const { return c / n_inplane; }
  int inplane_of(int c) const { return c % n_inplane; }
  int index(int d, int k) const { return d * n_inplane + k; }
  int self_count() const { return (n - 1) / 2; }
};

CandidateGrid build_grid(int n, double step_deg, int L,
                         Exec exec = Exec::parallel);

// Step giving about 360000/n candidates for any n.
double default_grid_step(int n);

double third_column_azimuth(const Rotation& r);

// Bins of (alpha_ij^(s), alpha_ji^(s)) for s = 0..n-1.
std::vector<LineBins> pair_line_bins(const Rotation& ri, const Rotation& rj,
                                     int n, int L);

// Index of the grid candidate nearest to r up to the symmetry g^s on the
// left (nearest viewing direction, then nearest in-plane angle).
int nearest_candidate(const CandidateGrid& grid, const Rotation& r);

}  // namespace symlines

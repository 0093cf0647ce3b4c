#include "symlines/pipeline.hpp"

#include <chrono>
#include <sstream>

#include "json.hpp"
#include "symlines/c3c4.hpp"
#include "symlines/candidate_grid.hpp"
#include "symlines/error.hpp"
#include "symlines/inplane.hpp"
#include "symlines/io.hpp"
#include "symlines/pairwise.hpp"
#include "symlines/sync.hpp"

namespace symlines {

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
auto run_stage(const std::string& name, AbinitioResult& res, F&& f) {
  const auto t0 = Clock::now();
  try {
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      res.timings.push_back({name, std::chrono::duration<double>(Clock::now() - t0).count()});
      log_line(name, "done in " + std::to_string(res.timings.back().seconds) + " s");
    } else {
      auto out = f();
      res.timings.push_back({name, std::chrono::duration<double>(Clock::now() - t0).count()});
      log_line(name, "done in " + std::to_string(res.timings.back().seconds) + " s");
      return out;
    }
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

double grid_step_of(const PipelineConfig& c) {
  return c.grid_step > 0 ? c.grid_step : default_grid_step(c.n);
}

}  // namespace

std::string mode_name(Mode m) { return m == Mode::cn ? "cn" : "c3c4-fast"; }

Mode parse_mode(const std::string& s) {
  if (s == "cn") return Mode::cn;
  if (s == "c3c4-fast") return Mode::c3c4_fast;
  throw Error(Errc::config, "unknown mode '" + s + "' (expected cn or c3c4-fast)");
}

void validate(const PipelineConfig& c) {
  auto fail = [](const std::string& m) { throw Error(Errc::config, m); };
  if (c.mode == Mode::cn && c.n < 3) fail("mode cn requires n >= 3");
  if (c.mode == Mode::c3c4_fast && c.n != 3 && c.n != 4)
    fail("mode c3c4-fast requires n = 3 or n = 4");
  if (c.m < 3) fail("m must be >= 3");
  if (c.mode == Mode::c3c4_fast && c.m < 5) fail("mode c3c4-fast requires m >= 5");
  if (c.L < 4 || c.L % 2) fail("L must be even and >= 4");
  if (c.n_r < 0) fail("n_r must be >= 1");
  if (c.N < 16) fail("N must be >= 16");
  if (c.grid_step < 0) fail("grid step must be positive");
  if (c.T < 1) fail("T must be >= 1");
  if (c.K < 0 || c.K == 1) fail("K must be >= 2");
  if (c.snr && !(*c.snr > 0)) fail("snr must be positive");
  if (c.blob_count < 2) fail("blob_count must be >= 2");
  const int kmax = c.k_max ? c.k_max : c.radial();
  if (c.k_min < 0 || kmax > c.radial() || c.k_min >= kmax) fail("bad radial band");
  if (c.vote_bins < 1) fail("vote_bins must be >= 1");
}

PipelineConfig config_from_json(const std::string& text, PipelineConfig c) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::config, std::string("config: ") + e.what());
  }
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& k = it.key();
      const auto& v = it.value();
      if (k == "n") c.n = v.get<int>();
      else if (k == "m") c.m = v.get<int>();
      else if (k == "L") c.L = v.get<int>();
      else if (k == "n_r") c.n_r = v.get<int>();
      else if (k == "N") c.N = v.get<int>();
      else if (k == "grid_step") c.grid_step = v.get<double>();
      else if (k == "T") c.T = v.get<int>();
      else if (k == "K") c.K = v.get<int>();
      else if (k == "snr") {
        if (v.is_null()) c.snr.reset();
        else c.snr = v.get<double>();
      } else if (k == "seed") c.seed = v.get<std::uint64_t>();
      else if (k == "blob_count") c.blob_count = v.get<int>();
      else if (k == "snap_to_grid") c.snap_to_grid = v.get<bool>();
      else if (k == "k_min") c.k_min = v.get<int>();
      else if (k == "k_max") c.k_max = v.get<int>();
      else if (k == "vote_bins") c.vote_bins = v.get<int>();
      else if (k == "mode") c.mode = parse_mode(v.get<std::string>());
      else if (k == "serial") c.serial = v.get<bool>();
      else if (k == "stack") c.stack_path = v.get<std::string>();
      else if (k == "truth") c.truth_path = v.get<std::string>();
      else if (k == "estimates") c.estimate_path = v.get<std::string>();
      else if (k == "report") c.report_path = v.get<std::string>();
      else if (k == "errors") c.errors_path = v.get<std::string>();
      else throw Error(Errc::config, "config: unknown key '" + k + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::config, std::string("config: ") + e.what());
  }
  return c;
}

std::string config_to_json(const PipelineConfig& c) {
  nlohmann::json j = {{"n", c.n}, {"m", c.m}, {"L", c.L}, {"n_r", c.radial()},
                      {"N", c.image_size()}, {"grid_step", grid_step_of(c)},
                      {"T", c.T}, {"K", c.K ? c.K : default_inplane_k(c.n)},
                      {"seed", c.seed}, {"blob_count", c.blob_count},
                      {"snap_to_grid", c.snap_to_grid}, {"k_min", c.k_min},
                      {"k_max", c.k_max ? c.k_max : c.radial()},
                      {"vote_bins", c.vote_bins}, {"mode", mode_name(c.mode)},
                      {"serial", c.serial}};
  j["snr"] = c.snr ? nlohmann::json(*c.snr) : nlohmann::json(nullptr);
  return j.dump(2);
}

Simulation simulate(const PipelineConfig& c) {
  validate(c);
  Simulation sim;
  sim.scene = random_scene(c.n, c.m, c.blob_count, c.seed);
  if (c.snap_to_grid) {
    const CandidateGrid grid = build_grid(c.n, grid_step_of(c), c.L, c.exec());
    for (auto& r : sim.scene.rotations) r = grid.candidates[nearest_candidate(grid, r)];
  }
  const int N = c.image_size();
  sim.images.resize(c.m);
  for (int i = 0; i < c.m; ++i) {
    sim.images[i] = project_image(sim.scene, i, N);
    if (c.snr) {
      // per-image noise stream derived from (seed, i)
      std::mt19937_64 s = make_stream(c.seed, static_cast<std::uint64_t>(i), 4);
      sim.images[i] = add_noise(sim.images[i], *c.snr, s());
    }
  }
  return sim;
}

std::vector<PolarImage> images_to_polar(const std::vector<Image>& images,
                                        const PipelineConfig& c) {
  std::vector<PolarImage> out(images.size());
  const int nr = c.radial();
  const int kmax = c.k_max ? c.k_max : nr;
  for (size_t i = 0; i < images.size(); ++i) {
    PolarImage p = polar_ft(images[i], c.L, nr, default_delta_xi(images[i].N), c.exec());
    if (c.k_min != 0 || kmax != nr) p = band_limit(p, c.k_min, kmax);
    out[i] = normalize(p);
  }
  return out;
}

AbinitioResult run_abinitio(const std::vector<PolarImage>& polar,
                            const PipelineConfig& c) {
  try {
    validate(c);
  } catch (const std::exception& e) {
    throw StageError("config", e.what());
  }
  const int m = static_cast<int>(polar.size());
  if (m != c.m) throw StageError("config", "stack has " + std::to_string(m) +
                                               " images, config says m = " +
                                               std::to_string(c.m));
  AbinitioResult res;
  const Exec ex = c.exec();

  RelativeDirections rel;
  if (c.mode == Mode::cn) {
    const CandidateGrid grid =
        run_stage("grid", res, [&] { return build_grid(c.n, grid_step_of(c), c.L, ex); });
    log_line("grid", std::to_string(grid.size()) + " candidates, " +
                         std::to_string(grid.directions()) + " directions");
    rel = run_stage("pairwise", res, [&] { return estimate_all_cn(polar, grid, c.T, ex); });
  } else {
    C3C4Diagnostics diag;
    rel = run_stage("c3c4", res, [&] {
      return estimate_all_c3c4(polar, c.n, c.vote_bins, ex, &diag);
    });
    res.failed_votes = diag.failed_votes;
    if (diag.failed_votes)
      log_line("c3c4", std::to_string(diag.failed_votes) + " pairs without valid votes");
  }

  const HandSync hs =
      run_stage("hand_sync", res, [&] { return sync_hands(rel.v_pairs, rel.v_diag, m, ex); });
  res.hand_eigval = hs.eigval;
  res.hand_eig_ratio = hs.eigval / (2.0 * (m - 2));
  log_line("hand_sync", "leading eigenvalue " + std::to_string(hs.eigval) + " (ratio " +
                            std::to_string(res.hand_eig_ratio) + ")");

  const ViewingDirections vd = run_stage(
      "directions", res, [&] { return factor_directions(hs.v_pairs, hs.v_diag, m); });
  res.direction_gap = vd.eigen_gap;
  log_line("directions", "eigen-gap lambda2/lambda1 " + std::to_string(vd.eigen_gap));

  const int K = c.K ? c.K : default_inplane_k(c.n);
  const Eigen::MatrixXd theta = run_stage(
      "inplane_pairs", res, [&] { return estimate_theta_table(polar, vd.r_tilde, c.n, K, ex); });
  const InPlaneSync ip = run_stage("inplane_sync", res, [&] { return sync_inplane(theta, c.n); });
  res.inplane_eigval = ip.eigval / m;
  log_line("inplane_sync", "normalized leading eigenvalue " + std::to_string(res.inplane_eigval));

  res.rotations = assemble_rotations(vd.r_tilde, ip.theta);
  return res;
}

AbinitioResult run_abinitio(const std::vector<Image>& images,
                            const PipelineConfig& c) {
  AbinitioResult pre;
  const auto polar = run_stage("polar_ft", pre, [&] { return images_to_polar(images, c); });
  AbinitioResult res = run_abinitio(polar, c);
  res.timings.insert(res.timings.begin(), pre.timings.begin(), pre.timings.end());
  return res;
}

}  // namespace symlines

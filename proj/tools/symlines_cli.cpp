#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "symlines/error.hpp"
#include "symlines/eval.hpp"
#include "symlines/io.hpp"
#include "symlines/pipeline.hpp"

using namespace symlines;

namespace {

struct Flags {
  std::string config_file;
  int n = -1, m = -1, L = -1, n_r = -1, N = -1, T = -1, K = -1;
  int k_min = -1, k_max = -1, blob_count = -1;
  double grid_step = -1, snr = -1;
  long long seed = -1;
  std::string mode;
  bool snap = false, serial = false, quiet = false;
  std::string stack, truth, estimates, report, errors;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config_file, "JSON config file");
  app->add_option("-n,--order", f.n, "symmetry order n");
  app->add_option("-m,--images", f.m, "number of images");
  app->add_option("--L", f.L, "rays per image");
  app->add_option("--n-r", f.n_r, "radial samples per ray");
  app->add_option("--size", f.N, "image size in pixels");
  app->add_option("--grid-step", f.grid_step, "candidate grid step, degrees");
  app->add_option("--T", f.T, "viewing directions kept per image");
  app->add_option("--K", f.K, "in-plane grid size");
  app->add_option("--snr", f.snr, "signal-to-noise ratio (omit for clean)");
  app->add_option("--seed", f.seed, "random seed");
  app->add_option("--blobs", f.blob_count, "Gaussian blobs in the phantom");
  app->add_option("--k-min", f.k_min, "first radial sample kept");
  app->add_option("--k-max", f.k_max, "one past the last radial sample kept");
  app->add_option("--mode", f.mode, "cn or c3c4-fast");
  app->add_flag("--snap", f.snap, "snap true rotations to the candidate grid");
  app->add_flag("--serial", f.serial, "use the serial reference kernels");
  app->add_flag("-q,--quiet", f.quiet, "suppress stage log");
  app->add_option("--stack", f.stack, "stack file");
  app->add_option("--truth", f.truth, "true rotations CSV");
  app->add_option("--estimates", f.estimates, "estimated rotations CSV");
  app->add_option("--report", f.report, "JSON report");
  app->add_option("--errors", f.errors, "per-image error CSV");
}

PipelineConfig resolve(const Flags& f) {
  PipelineConfig c;
  if (!f.config_file.empty()) c = config_from_json(read_text(f.config_file), c);
  if (f.n >= 0) c.n = f.n;
  if (f.m >= 0) c.m = f.m;
  if (f.L >= 0) c.L = f.L;
  if (f.n_r >= 0) c.n_r = f.n_r;
  if (f.N >= 0) c.N = f.N;
  if (f.T >= 0) c.T = f.T;
  if (f.K >= 0) c.K = f.K;
  if (f.k_min >= 0) c.k_min = f.k_min;
  if (f.k_max >= 0) c.k_max = f.k_max;
  if (f.blob_count >= 0) c.blob_count = f.blob_count;
  if (f.grid_step >= 0) c.grid_step = f.grid_step;
  if (f.snr >= 0) c.snr = f.snr;
  if (f.seed >= 0) c.seed = static_cast<std::uint64_t>(f.seed);
  if (!f.mode.empty()) c.mode = parse_mode(f.mode);
  if (f.snap) c.snap_to_grid = true;
  if (f.serial) c.serial = true;
  if (!f.stack.empty()) c.stack_path = f.stack;
  if (!f.truth.empty()) c.truth_path = f.truth;
  if (!f.estimates.empty()) c.estimate_path = f.estimates;
  if (!f.report.empty()) c.report_path = f.report;
  if (!f.errors.empty()) c.errors_path = f.errors;
  set_log_quiet(f.quiet);
  return c;
}

void do_simulate(const PipelineConfig& c) {
  const Simulation sim = simulate(c);
  write_stack(c.stack_path, sim.images);
  write_rotations(c.truth_path, sim.scene.rotations);
  log_line("simulate", "wrote " + c.stack_path + " and " + c.truth_path);
}

void do_abinitio(PipelineConfig c) {
  std::vector<Image> images;
  try {
    images = read_stack(c.stack_path);
  } catch (const std::exception& e) {
    throw StageError("read_stack", e.what());
  }
  c.m = static_cast<int>(images.size());
  if (!images.empty()) c.N = images[0].N;
  const AbinitioResult res = run_abinitio(images, c);
  write_rotations(c.estimate_path, res.rotations);
  log_line("abinitio", "wrote " + c.estimate_path);
}

void do_evaluate(const PipelineConfig& c) {
  std::vector<Rotation> truth, est;
  try {
    truth = read_rotations(c.truth_path);
    est = read_rotations(c.estimate_path);
  } catch (const std::exception& e) {
    throw StageError("evaluate", e.what());
  }
  AlignmentReport r;
  try {
    r = align_and_score(truth, est, c.n, c.L);
  } catch (const std::exception& e) {
    throw StageError("evaluate", e.what());
  }
  write_text(c.report_path, report_json(r) + "\n");
  write_text(c.errors_path, report_csv(r));
  std::printf("median_error_deg %.6f\nmean_error_deg %.6f\n", r.median_error_deg,
              r.mean_error_deg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orientation estimation for cyclically symmetric projections"};
  app.require_subcommand(1);
  Flags f;
  auto* sim = app.add_subcommand("simulate", "write a synthetic stack and true rotations");
  auto* abi = app.add_subcommand("abinitio", "estimate rotations from a stack");
  auto* ev = app.add_subcommand("evaluate", "score estimates against the truth");
  auto* pipe = app.add_subcommand("pipeline", "simulate, estimate and evaluate");
  for (auto* s : {sim, abi, ev, pipe}) add_common(s, f);
  CLI11_PARSE(app, argc, argv);

  try {
    const PipelineConfig c = resolve(f);
    if (*sim) {
      do_simulate(c);
    } else if (*abi) {
      do_abinitio(c);
    } else if (*ev) {
      do_evaluate(c);
    } else {
      do_simulate(c);
      do_abinitio(c);
      do_evaluate(c);
    }
  } catch (const StageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: [" << errc_name(e.code()) << "] " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

// Serial reference vs OpenMP kernels.  Arg 0 = serial, 1 = parallel.
#include <benchmark/benchmark.h>

#include "symlines/c3c4.hpp"
#include "symlines/candidate_grid.hpp"
#include "symlines/inplane.hpp"
#include "symlines/pairwise.hpp"
#include "symlines/simulator.hpp"
#include "symlines/sync.hpp"

using namespace symlines;

namespace {

Exec mode(const benchmark::State& s) { return s.range(0) ? Exec::parallel : Exec::serial; }

const Scene& scene() {
  static const Scene s = random_scene(7, 12, 8, 99);
  return s;
}

const std::vector<PolarImage>& polar() {
  static const std::vector<PolarImage> p = [] {
    std::vector<PolarImage> out;
    for (int i = 0; i < 12; ++i) out.push_back(normalize(project_rays(scene(), i, 360, 50, 0.5)));
    return out;
  }();
  return p;
}

const CandidateGrid& grid7() {
  static const CandidateGrid g = build_grid(7, default_grid_step(7), 360);
  return g;
}

void BM_polar_ft(benchmark::State& st) {
  const Image im = project_image(scene(), 0, 101);
  for (auto _ : st)
    benchmark::DoNotOptimize(polar_ft(im, 360, 50, default_delta_xi(101), mode(st)));
}
BENCHMARK(BM_polar_ft)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_cross_table(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(cross_table(polar()[0], polar()[1], mode(st)));
}
BENCHMARK(BM_cross_table)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_build_grid(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(build_grid(7, default_grid_step(7), 360, mode(st)));
}
BENCHMARK(BM_build_grid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_sign_graph_multiply(benchmark::State& st) {
  const int m = 100;
  std::mt19937_64 rng(5);
  std::vector<Vec3> v(m);
  for (auto& x : v) x = random_rotation(rng).row(2).transpose();
  std::vector<Mat3> pairs;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) pairs.push_back(v[i] * v[j].transpose());
  const SignGraph g = build_sign_graph(pairs, m);
  Eigen::VectorXd x = Eigen::VectorXd::Ones(g.dim), y;
  for (auto _ : st) {
    g.multiply(x, y, mode(st));
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_sign_graph_multiply)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_estimate_all_cn(benchmark::State& st) {
  const std::vector<PolarImage> p(polar().begin(), polar().begin() + 6);
  for (auto _ : st) benchmark::DoNotOptimize(estimate_all_cn(p, grid7(), 20, mode(st)));
}
BENCHMARK(BM_estimate_all_cn)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_theta_table(benchmark::State& st) {
  std::vector<Rotation> rt;
  for (const auto& r : scene().rotations) rt.push_back(complete_from_third_row(r.row(2).transpose()));
  for (auto _ : st)
    benchmark::DoNotOptimize(estimate_theta_table(polar(), rt, 7, default_inplane_k(7), mode(st)));
}
BENCHMARK(BM_theta_table)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>

#include "doctest.h"
#include "support.hpp"
#include "symlines/error.hpp"
#include "symlines/pairwise.hpp"
#include "symlines/simulator.hpp"

using namespace symlines;

namespace {

constexpr int kN = 7;
constexpr int kL = 360;

const CandidateGrid& grid() {
  static const CandidateGrid g = build_grid(kN, default_grid_step(kN), kL);
  return g;
}

// Scene whose rotations sit exactly on non-degenerate grid candidates.
Scene on_grid_scene(int m, std::uint64_t seed) {
  Scene s = random_scene(kN, m, 8, seed);
  testkit::Gen gen(seed);
  for (auto& r : s.rotations) {
    int c;
    do c = gen.integer(0, grid().size() - 1);
    while (grid().degenerate[grid().direction_of(c)]);
    r = grid().candidates[c];
  }
  return s;
}

std::vector<PolarImage> rays(const Scene& s) {
  std::vector<PolarImage> out;
  for (int i = 0; i < static_cast<int>(s.rotations.size()); ++i)
    out.push_back(normalize(project_rays(s, i, kL, 25, 1.0)));
  return out;
}

Mat3 outer(const Rotation& a, const Rotation& b) {
  return a.row(2).transpose() * b.row(2);
}

double up_to_j(const Mat3& est, const Mat3& truth) {
  return std::min((est - truth).norm(), (est - testkit::jc(truth)).norm());
}

}  // namespace

TEST_CASE("self score is near one at the truth") {
  const Scene s = on_grid_scene(4, 1);
  const auto p = rays(s);
  for (int i = 0; i < 4; ++i) {
    const int c = nearest_candidate(grid(), s.rotations[i]);
    CHECK(self_score(self_table(p[i]), grid(), c) >= 0.99);
  }
}

TEST_CASE("degenerate directions score minus infinity") {
  const Eigen::MatrixXd sp = Eigen::MatrixXd::Ones(kL, kL);
  int seen = 0;
  for (int d = 0; d < grid().directions(); ++d)
    if (grid().degenerate[d]) {
      CHECK(direction_self_score(sp, grid(), d) == kNoScore);
      CHECK(self_score(sp, grid(), grid().index(d, 0)) == kNoScore);
      ++seen;
    }
  CHECK(seen > 0);
}

TEST_CASE("top candidates keep the truth and are deterministic") {
  const Scene s = on_grid_scene(3, 2);
  const auto p = rays(s);
  for (int i = 0; i < 3; ++i) {
    const auto a = top_candidates(p[i], grid(), 50);
    const auto b = top_candidates(self_table(p[i]), grid(), 50);
    CHECK(a.cands == b.cands);
    CHECK(a.scores == b.scores);
    CHECK(static_cast<int>(a.cands.size()) == 50 * grid().n_inplane);
    CHECK(std::is_sorted(a.cands.begin(), a.cands.end()));
    const int c = nearest_candidate(grid(), s.rotations[i]);
    CHECK(std::find(a.cands.begin(), a.cands.end(), c) != a.cands.end());
  }
  CHECK_THROWS_AS(top_candidates(p[0], grid(), 0), Error);
  // T above the number of directions keeps everything
  const auto all = top_candidates(p[0], grid(), 1 << 20);
  CHECK(static_cast<int>(all.cands.size()) == grid().size());
}

TEST_CASE("estimate_pair recovers v_ij on grid") {
  const Scene s = on_grid_scene(5, 3);
  const auto p = rays(s);
  std::vector<ImageCandidates> c;
  for (const auto& q : p) c.push_back(top_candidates(q, grid(), 50));
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) {
      const PairEstimate e = estimate_pair(p[i], p[j], c[i], c[j], grid());
      CHECK(up_to_j(e.v_ij, outer(s.rotations[i], s.rotations[j])) < 1e-6);
      CHECK(up_to_j(e.v_ii, outer(s.rotations[i], s.rotations[i])) < 1e-6);
      // fast search equals the direct score of its own choice
      const double direct = pair_score(cross_table(p[i], p[j]), self_table(p[i]),
                                       self_table(p[j]), grid(), e.cand_i, e.cand_j);
      CHECK(e.score == doctest::Approx(direct).epsilon(1e-12));
    }
  CHECK_THROWS_AS(estimate_pair(p[0], p[0], c[0], c[0], grid()), Error);
  CHECK_THROWS_AS(estimate_pair(p[0], p[1], ImageCandidates{}, c[1], grid()), Error);
}

TEST_CASE("fast pair search matches brute force") {
  const Scene s = on_grid_scene(3, 4);
  const auto p = rays(s);
  const auto ci = top_candidates(p[0], grid(), 3), cj = top_candidates(p[1], grid(), 3);
  const Eigen::MatrixXd cr = cross_table(p[0], p[1]);
  const Eigen::MatrixXd s0 = self_table(p[0]), s1 = self_table(p[1]);
  double best = kNoScore;
  for (int a : ci.cands)
    for (int b : cj.cands) best = std::max(best, pair_score(cr, s0, s1, grid(), a, b));
  const PairEstimate e = estimate_pair(cr, ci, cj, grid());
  CHECK(e.score == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("swapping the images transposes the estimate") {
  const Scene s = on_grid_scene(3, 5);
  const auto p = rays(s);
  const auto ci = top_candidates(p[0], grid(), 50), cj = top_candidates(p[1], grid(), 50);
  const PairEstimate a = estimate_pair(p[0], p[1], ci, cj, grid());
  const PairEstimate b = estimate_pair(p[1], p[0], cj, ci, grid());
  CHECK(a.score == doctest::Approx(b.score).epsilon(1e-12));
  CHECK(up_to_j(b.v_ij, a.v_ij.transpose()) < 1e-9);
}

TEST_CASE("select_vii picks the most rank-one estimate") {
  testkit::Gen g(6);
  const Vec3 v = g.unit();
  const Mat3 good = v * v.transpose();
  Mat3 bad = good;
  bad(0, 0) += 0.3;
  CHECK(select_vii({bad, good, bad}) == good);
  // ties go to the first entry
  const Mat3 other = testkit::jc(good);
  CHECK(select_vii({other, good}) == other);
  CHECK(select_vii({good, other}) == good);
  CHECK_THROWS_AS(select_vii({}), Error);
  // permutation of a list with a unique best does not change the answer
  std::vector<Mat3> list{bad, good, 2 * bad, Mat3::Identity()};
  const Mat3 first = select_vii(list);
  std::sort(list.begin(), list.end(), [](const Mat3& x, const Mat3& y) {
    return x.sum() < y.sum();
  });
  CHECK(select_vii(list) == first);
}

TEST_CASE("pair indexing") {
  const int m = 9;
  int expect = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) CHECK(pair_index(i, j, m) == expect++);
  CHECK(pair_count(m) == expect);
}

TEST_CASE("estimate_all_cn serial and parallel agree") {
  const Scene s = on_grid_scene(4, 7);
  const auto p = rays(s);
  const auto a = estimate_all_cn(p, grid(), 20, Exec::serial);
  const auto b = estimate_all_cn(p, grid(), 20, Exec::parallel);
  REQUIRE(a.v_pairs.size() == 6);
  // table rounding may break hand ties differently
  for (size_t t = 0; t < a.v_pairs.size(); ++t) {
    CHECK(up_to_j(a.v_pairs[t], b.v_pairs[t]) < 1e-9);
    CHECK(a.pair_scores[t] == doctest::Approx(b.pair_scores[t]).epsilon(1e-9));
  }
  for (int i = 0; i < 4; ++i)
    CHECK(up_to_j(a.v_diag[i], outer(s.rotations[i], s.rotations[i])) < 1e-6);
  CHECK_THROWS_AS(estimate_all_cn({p[0]}, grid(), 20), Error);
}

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "stabpack/wiring.hpp"

using namespace stabpack;

namespace {

GridPermutation random_perm(const std::vector<int>& shape, std::mt19937_64& rng) {
  auto p = GridPermutation::identity(shape);
  std::shuffle(p.map.begin(), p.map.end(), rng);
  return p;
}

GridPermutation compose_all(const std::vector<AxisFactor>& fs) {
  GridPermutation r = GridPermutation::identity(fs.front().perm.shape);
  for (const auto& f : fs) r = compose(f.perm, r);
  return r;
}

void check_rowcol(const GridPermutation& pi) {
  auto f = decompose_rowcol(pi);
  EXPECT_EQ(compose(f.b2, compose(f.a, f.b1)), pi);
  EXPECT_TRUE(f.b1.moves_only({1}));
  EXPECT_TRUE(f.b2.moves_only({1}));
  EXPECT_TRUE(f.a.moves_only({0}));
}

std::vector<int> point(int flat, int n, int arity) {
  std::vector<int> p(arity);
  for (int t = arity - 1; t >= 0; --t) {
    p[t] = flat % n;
    flat /= n;
  }
  return p;
}

}  // namespace

TEST(DecomposeRowCol, Identity) {
  auto id = GridPermutation::identity({2, 2});
  auto f = decompose_rowcol(id);
  EXPECT_EQ(f.b1, id);
  EXPECT_EQ(f.a, id);
  EXPECT_EQ(f.b2, id);
}

TEST(DecomposeRowCol, WithinColumnPermutation) {
  // Column permutation 1->1, 2->4, 3->2, 4->3 on [4] x [2], applied to column 0.
  GridPermutation pi = GridPermutation::identity({4, 2});
  const int p1[4] = {0, 3, 1, 2};
  for (int a = 0; a < 4; ++a) pi.map[pi.flatten({a, 0})] = pi.flatten({p1[a], 0});
  EXPECT_TRUE(pi.moves_only({0}));
  check_rowcol(pi);
}

TEST(DecomposeRowCol, AllPermutationsOfThreeByTwo) {
  std::vector<int> m(6);
  std::iota(m.begin(), m.end(), 0);
  int count = 0;
  do {
    check_rowcol(GridPermutation{{3, 2}, m});
    ++count;
  } while (std::next_permutation(m.begin(), m.end()));
  EXPECT_EQ(count, 720);
}

TEST(DecomposeRowCol, RandomEightByEight) {
  std::mt19937_64 rng(8);
  for (int it = 0; it < 100; ++it) check_rowcol(random_perm({8, 8}, rng));
}

TEST(DecomposeRowCol, RejectsNonBijection) {
  GridPermutation bad{{2, 2}, {0, 0, 1, 2}};
  EXPECT_THROW(decompose_rowcol(bad), WiringError);
}

TEST(DecomposeAxes, FactorsAndAxes) {
  std::mt19937_64 rng(4);
  for (int it = 0; it < 100; ++it) {
    auto pi = random_perm({4, 4, 4}, rng);
    auto fs = decompose_axes(pi);
    ASSERT_EQ(fs.size(), 5u);
    const int axes[5] = {0, 1, 2, 1, 0};
    for (int j = 0; j < 5; ++j) {
      EXPECT_EQ(fs[j].axis, axes[j]);
      EXPECT_TRUE(fs[j].perm.moves_only({fs[j].axis}));
    }
    EXPECT_EQ(compose_all(fs), pi);
  }
  auto id = GridPermutation::identity({3, 3});
  for (const auto& f : decompose_axes(id)) EXPECT_EQ(f.perm, id);
  EXPECT_THROW(decompose_axes(GridPermutation::identity({5})), WiringError);
}

TEST(VerifyPaths, Violations) {
  GridHost host{{3, 3}, 0};
  std::vector<std::pair<Vertex, Vertex>> m{{{0, 0}, {0, 2}}, {{2, 0}, {2, 2}}};
  PathSet ok{{{{0, 0}, {0, 1}, {0, 2}}, {{2, 0}, {2, 1}, {2, 2}}}, {}};
  EXPECT_TRUE(verify_disjoint_paths(ok, host, m).ok);
  PathSet shared{{{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 2}}, {{2, 0}, {2, 1}, {1, 1}, {1, 2}, {2, 2}}}, {}};
  auto r = verify_disjoint_paths(shared, host, m);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.where, (Vertex{1, 1}));
  PathSet jump{{{{0, 0}, {0, 2}}, {{2, 0}, {2, 1}, {2, 2}}}, {}};
  EXPECT_EQ(verify_disjoint_paths(jump, host, m).reason, "non-adjacent step");
}

TEST(RouteLine, IdentityIsStraight) {
  auto ps = route_line_permutation({0, 1, 2}, line_min_height(3));
  for (const auto& p : ps.paths) {
    for (const auto& v : p) EXPECT_EQ(v[0], p.front()[0]);
  }
}

TEST(RouteLine, ReversalAndTransposition) {
  for (auto sigma : {std::vector<int>{3, 2, 1, 0}, std::vector<int>{0, 2, 1, 3}}) {
    const int n = 4, h = line_min_height(n);
    auto ps = route_line_permutation(sigma, h);
    std::vector<std::pair<Vertex, Vertex>> m;
    for (int i = 0; i < n; ++i) m.push_back({{2 * i, 0, 0}, {2 * sigma[i], 0, h - 1}});
    auto r = verify_disjoint_paths(ps, line_host(n, h), m);
    EXPECT_TRUE(r.ok) << r.reason;
  }
  // Only the two swapped lines bend.
  auto ps = route_line_permutation({0, 2, 1, 3}, 13);
  for (int i : {0, 3}) {
    for (const auto& v : ps.paths[i]) EXPECT_EQ(v[0], 2 * i);
  }
  EXPECT_THROW(route_line_permutation({1, 0}, 6), WiringError);
}

TEST(CubeWiring, RandomMatchingsDimThree) {
  std::mt19937_64 rng(31);
  const int n = 4, d = 3, h = cube_wiring_min_height(n, d);
  for (int it = 0; it < 50; ++it) {
    std::vector<int> perm(n * n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::pair<Vertex, Vertex>> m, ends;
    for (int i = 0; i < n * n; ++i) {
      if (it % 2 && i % 3 == 0) continue;  // partial matchings on odd seeds
      m.push_back({point(i, n, 2), point(perm[i], n, 2)});
      ends.push_back({cube_terminal(point(i, n, 2), 0), cube_terminal(point(perm[i], n, 2), h - 1)});
    }
    auto ps = cube_wiring(n, d, h, m);
    auto r = verify_disjoint_paths(ps, cube_host(n, d, h), ends);
    ASSERT_TRUE(r.ok) << r.reason;
  }
}

TEST(CubeWiring, DimFourAndHeightPadding) {
  std::mt19937_64 rng(5);
  const int n = 3, d = 4;
  for (int extra : {0, 7}) {
    const int h = cube_wiring_min_height(n, d) + extra;
    std::vector<int> perm(27);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::pair<Vertex, Vertex>> m, ends;
    for (int i = 0; i < 27; ++i) {
      m.push_back({point(i, n, 3), point(perm[i], n, 3)});
      ends.push_back({cube_terminal(point(i, n, 3), 0), cube_terminal(point(perm[i], n, 3), h - 1)});
    }
    auto r = verify_disjoint_paths(cube_wiring(n, d, h, m), cube_host(n, d, h), ends);
    EXPECT_TRUE(r.ok) << r.reason;
  }
}

TEST(CubeWiring, SinglePointAndErrors) {
  auto ps = cube_wiring(1, 3, cube_wiring_min_height(1, 3), {{{0, 0}, {0, 0}}});
  EXPECT_EQ(ps.paths.size(), 1u);
  EXPECT_THROW(cube_wiring(4, 3, 5, {}), WiringError);
  EXPECT_THROW(cube_wiring(4, 2, 100, {}), WiringError);
}

TEST(BlownCubeWiring, RandomPerfectMatchings) {
  std::mt19937_64 rng(77);
  const int n = 4, d = 3;
  for (int t : {2, 4}) {
    BlownCube cube{n, t, d, blown_cube_min_height(n, d)};
    for (int it = 0; it < 50; ++it) {
      std::vector<int> perm(n * n * t);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      std::vector<std::pair<Vertex, Vertex>> m, ends;
      for (int i = 0; i < n * n * t; ++i) {
        auto p = point(i / t, n, 2), q = point(perm[i] / t, n, 2);
        Vertex a = p, b = q;
        a.push_back(i % t);
        b.push_back(perm[i] % t);
        m.push_back({a, b});
        ends.push_back({blown_terminal(p, 0, i % t), blown_terminal(q, cube.h - 1, perm[i] % t)});
      }
      auto r = verify_disjoint_paths(blown_cube_wiring(cube, m), cube.host(), ends);
      ASSERT_TRUE(r.ok) << r.reason;
    }
  }
}

TEST(BlownCubeWiring, IndexSwapStaysInColumn) {
  const int n = 3, d = 3, t = 2;
  BlownCube cube{n, t, d, blown_cube_min_height(n, d)};
  std::vector<std::pair<Vertex, Vertex>> m{{{1, 1, 0}, {1, 1, 1}}, {{1, 1, 1}, {1, 1, 0}}};
  auto ps = blown_cube_wiring(cube, m);
  std::vector<std::pair<Vertex, Vertex>> ends{{blown_terminal({1, 1}, 0, 0), blown_terminal({1, 1}, cube.h - 1, 1)},
                                              {blown_terminal({1, 1}, 0, 1), blown_terminal({1, 1}, cube.h - 1, 0)}};
  EXPECT_TRUE(verify_disjoint_paths(ps, cube.host(), ends).ok);
  for (const auto& p : ps.paths) {
    for (const auto& v : p) {
      EXPECT_EQ(v[0], 2);
      EXPECT_EQ(v[1], 2);
    }
  }
}

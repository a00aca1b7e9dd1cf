#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "stabpack/param.hpp"

using namespace stabpack;

namespace {

std::vector<AxisBox> random_similar(int n, int d, std::mt19937_64& rng) {
  std::uniform_int_distribution<Coord> c(0, 20), s(4, 8);
  std::vector<AxisBox> out;
  for (int i = 0; i < n; ++i) {
    std::vector<Coord> lo(d), hi(d);
    for (int t = 0; t < d; ++t) {
      lo[t] = c(rng);
      hi[t] = lo[t] + s(rng);
    }
    out.push_back(AxisBox::make(lo, hi, 4));
  }
  return out;
}

Ball ball2(double x, double y, Coord r2) {
  return Ball{{Rational(static_cast<Coord>(x)), Rational(static_cast<Coord>(y))}, Rational(r2)};
}

}  // namespace

TEST(CircumscribedBalls, Examples) {
  EXPECT_TRUE(circumscribed_balls({}).empty());
  auto b = circumscribed_balls({AxisBox::make({0, 0, 0}, {1, 1, 1}), AxisBox::make({0, 0, 0}, {1, 1, 16})});
  EXPECT_EQ(b[0].radius_sq, Rational(3, 4));
  // (sqrt(L^2 + 2) / 2)^2 with L = 16.
  EXPECT_EQ(b[1].radius_sq, Rational(16 * 16 + 2, 4));
}

TEST(SphereCandidates, GuessBound) { EXPECT_EQ(sphere_guess_bound(10, 2), 64000); }

TEST(SphereCandidates, CountWithinBound) {
  std::mt19937_64 rng(3);
  auto objs = random_similar(10, 2, rng);
  SphereStats st;
  SphereOptions opt;
  opt.exhaustive_below = 0;
  canonical_sphere_candidates(circumscribed_balls(objs), opt, [](const SphereGuess&) { return true; }, &st);
  EXPECT_GT(st.emitted, 0);
  EXPECT_LE(st.emitted + st.duplicates, sphere_guess_bound(10, 2));
}

TEST(SphereCandidates, SingleBallIsItsOwnBoundary) {
  std::vector<Ball> one{ball2(3, 4, 4)};
  std::vector<SphereGuess> got;
  SphereOptions opt;
  opt.exhaustive_below = 0;
  canonical_sphere_candidates(one, opt, [&](const SphereGuess& g) {
    got.push_back(g);
    return true;
  });
  ASSERT_FALSE(got.empty());
  for (const auto& g : got) {
    EXPECT_NEAR(g.sphere.radius, 2.0, 1e-9);
    EXPECT_NEAR(g.sphere.center[0], 3.0, 1e-9);
    EXPECT_EQ(g.flags[0] & 1, 1);
  }
}

TEST(SphereCandidates, TwoBallsSeparatedThroughGap) {
  // Unit balls at x = 0 and x = 10; tangent to the first from inside and the
  // second from outside gives R = 5 centered at x = 4.
  std::vector<Ball> two{ball2(0, 0, 1), ball2(10, 0, 1)};
  bool found = false;
  SphereOptions opt;
  opt.exhaustive_below = 0;
  canonical_sphere_candidates(two, opt, [&](const SphereGuess& g) {
    if (g.support.size() == 2 && g.flags[0] == 3 && g.flags[1] == 2) {
      EXPECT_NEAR(g.sphere.radius, 5.0, 1e-9);
      EXPECT_NEAR(g.sphere.center[0], 4.0, 1e-9);
      EXPECT_EQ(g.inside, std::vector<int>{0});
      EXPECT_EQ(g.outside, std::vector<int>{1});
      found = true;
    }
    return true;
  });
  EXPECT_TRUE(found);
}

TEST(SphereCandidates, SupportBallsTangent) {
  std::mt19937_64 rng(17);
  auto balls = circumscribed_balls(random_similar(7, 3, rng));
  SphereStats st;
  canonical_sphere_candidates(balls, {}, [&](const SphereGuess& g) {
    for (std::size_t i = 0; i < g.support.size(); ++i) {
      const auto& b = balls[g.support[i]];
      double dc = 0;
      for (int t = 0; t < 3; ++t) dc += std::pow(g.sphere.center[t] - b.center[t].to_double(), 2);
      dc = std::sqrt(dc);
      double r = std::sqrt(b.radius_sq.to_double());
      double want = (g.flags[i] & 1) ? g.sphere.radius - r : g.sphere.radius + r;
      EXPECT_NEAR(dc, want, 1e-6 * std::max(1.0, g.sphere.radius));
    }
    return true;
  }, &st);
  EXPECT_GT(st.emitted, 0);
}

TEST(SphereCandidates, DegenerateSupportCounted) {
  // Collinear centers in 2D make the three-ball system singular.
  std::vector<Ball> line{ball2(0, 0, 1), ball2(4, 0, 1), ball2(8, 0, 1)};
  SphereStats st;
  SphereOptions opt;
  opt.exhaustive_below = 0;
  canonical_sphere_candidates(line, opt, [](const SphereGuess&) { return true; }, &st);
  EXPECT_GT(st.degenerate, 0);
}

TEST(SolveParam, TrivialDecisions) {
  std::vector<AxisBox> objs{AxisBox::make({0, 0}, {1, 1})};
  auto r0 = solve_mis_param(objs, 0);
  EXPECT_TRUE(r0.accept);
  EXPECT_TRUE(r0.witness.empty());
  EXPECT_TRUE(solve_mis_param(objs, 1).accept);
  EXPECT_FALSE(solve_mis_param(objs, 2).accept);
  EXPECT_FALSE(solve_mis_param({}, 1).accept);
}

TEST(SolveParam, MatchesBruteforce) {
  std::mt19937_64 rng(99);
  for (int it = 0; it < 30; ++it) {
    int d = 2 + it % 2;
    int n = 13 + static_cast<int>(rng() % 4);
    auto objs = random_similar(n, d, rng);
    auto g = build_intersection_graph(objs);
    int best = mis_bruteforce(g).size;
    for (int k = best - 1; k <= best + 1; ++k) {
      auto r = solve_mis_param(objs, k);
      EXPECT_EQ(r.accept, best >= k) << "it=" << it << " k=" << k;
      if (r.accept) {
        EXPECT_TRUE(is_independent_set(g, r.witness));
        EXPECT_GE(static_cast<int>(r.witness.size()), k);
      }
    }
  }
}

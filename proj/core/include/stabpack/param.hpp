// Parameterized exact MIS decision via canonical sphere separators of the
// objects' circumscribed balls.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "stabpack/geometry.hpp"
#include "stabpack/isgraph.hpp"

namespace stabpack {

std::vector<Ball> circumscribed_balls(const std::vector<AxisBox>& objects);

struct SphereGuess {
  std::vector<int> support;
  std::vector<std::uint8_t> flags;  // bit 0: ball inside sphere; bit 1: ball originally not crossed
  Sphere sphere;
  std::vector<int> inside, outside, crossed;
};

struct SphereOptions {
  double eps = 1e-9;            // relative tolerance for tangency, dedup and margins
  bool with_origin_bits = true; // also emit both values of the second flag bit
  int exhaustive_below = 8;     // union in the grid family when n <= this
};

struct SphereStats {
  std::int64_t solved = 0;     // tangency systems solved
  std::int64_t degenerate = 0; // supports skipped as numerically degenerate
  std::int64_t emitted = 0;
  std::int64_t duplicates = 0;
};

// n^(d+1) * 4^(d+1).
std::int64_t sphere_guess_bound(std::int64_t n, int d);

// Classifies each ball against the sphere; anything within the margin is
// crossed.
void classify_balls(const std::vector<Ball>& balls, SphereGuess& g, double eps);

// Enumerates canonical spheres over supports of size 1..d+1 (d in {2,3}).
// The callback returns false to stop the stream early.
void canonical_sphere_candidates(const std::vector<Ball>& balls, const SphereOptions& opt,
                                 const std::function<bool(const SphereGuess&)>& emit,
                                 SphereStats* stats = nullptr);

struct ParamResult {
  bool accept = false;
  std::vector<int> witness;
  std::int64_t guesses_evaluated = 0;
  bool fallback = false;  // d outside {2,3}: brute force was used
};

struct ParamOptions {
  int k0 = 3;
  int base_n = 12;
  int crossing_budget = -1;  // < 0: unbounded
  SphereOptions sphere;
};

ParamResult solve_mis_param(const std::vector<AxisBox>& objects, int k, const ParamOptions& opt = {});

}  // namespace stabpack

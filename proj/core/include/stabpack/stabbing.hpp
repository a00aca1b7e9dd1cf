// Stabbing (piercing) sets for axis-parallel boxes and a stabbing-number
// estimator.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stabpack/geometry.hpp"
#include "stabpack/rng.hpp"

namespace stabpack {

struct StabSet {
  std::vector<ScaledPoint> points;
  std::vector<std::vector<int>> covered;  // object indices containing each point
};

struct StabCheck {
  bool ok = false;
  std::vector<int> unstabbed;
};

StabCheck verify_stab(const std::vector<ScaledPoint>& points, const std::vector<AxisBox>& objects);

// k = floor((4 alpha)^d (ln n + 1)).
std::int64_t montecarlo_sample_count(double alpha, int d, std::size_t n);

struct MonteCarloResult {
  bool success = false;
  StabSet set;
  int attempts = 0;
  std::int64_t k = 0;
  std::vector<int> unstabbed;  // residue of the last attempt on failure
};

// Samples k uniform points in `region` per attempt. Sampled points are
// rounded to a grid 1/(den * 1024) so containment stays exact.
MonteCarloResult stab_montecarlo(const std::vector<AxisBox>& objects, const Ball& region, double alpha,
                                 Rng& rng, int retry_limit = 20);

// Greedy set cover over the grid of lower-corner coordinates.
StabSet stab_greedy(const std::vector<AxisBox>& objects);

inline constexpr int kExactStabCap = 15;
StabSet stab_exact_min(const std::vector<AxisBox>& objects, int cap = kExactStabCap);

struct AlphaRow {
  double r = 0;        // class [r/2, r)
  int ball_id = -1;    // index of the object the ball is centered on
  int points = 0;
  double alpha_class = 1;
};

struct AlphaEstimate {
  double alpha = 1;
  std::vector<AlphaRow> rows;
};

// Upper-bound estimate: object-centered balls only, not all balls.
AlphaEstimate estimate_stabbing_number(const std::vector<AxisBox>& objects);

// Union over the d orientations of the lattice spanned by a canonical box's
// vertices, clipped to the closed ball. Points are at denominator `den`.
StabSet canonical_box_stab_lattice(Coord L, int d, const Ball& region, Coord den = 1);

}  // namespace stabpack

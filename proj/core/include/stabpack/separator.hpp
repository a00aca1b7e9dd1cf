// Exact MIS by balanced hypercube separators with weighted clique partitions.
#pragma once

#include <functional>
#include <vector>

#include "stabpack/geometry.hpp"
#include "stabpack/isgraph.hpp"

namespace stabpack {

struct Clique {
  std::vector<int> members;  // object indices sharing `point`
  ScaledPoint point;
};

struct SeparatorCandidate {
  int index = 0;  // 1-based candidate number i
  HyperCube cube;
  std::vector<int> crossed;
  std::vector<int> large_added;
  std::vector<Clique> cliques;
  double weight = 0;  // sum over cliques of log2(|C| + 1)
};

// x -> (x - translation) * scale maps H0 onto the unit cube centered at 0.
struct Normalization {
  std::vector<Rational> translation;
  Rational scale;
};

Normalization normalization_for(const HyperCube& h0);
HyperCube apply(const Normalization& nz, const HyperCube& h);

// Returns a cube containing at least m objects with side at most twice the
// minimum possible.
HyperCube min_enclosing_hypercube(const std::vector<AxisBox>& objects, int m);

// Smallest K with K^d >= n.
int ceil_root(int n, int d);

// ceil(n^(1/d)) cubes concentric with h0, the i-th with side
// side(h0) * (1 + 2i / ceil(n^(1/d))).
std::vector<HyperCube> candidate_hypercubes(const HyperCube& h0, int n);

// `h0_side` is the side of H0 so that "diameter >= 1/4" is measured after
// normalization. Only the objects listed in `ids` take part.
SeparatorCandidate build_separator(const HyperCube& hi, const HyperCube& h_last, const Rational& h0_side,
                                   const std::vector<AxisBox>& objects, const std::vector<int>& ids);

const SeparatorCandidate& pick_best_separator(const std::vector<SeparatorCandidate>& candidates);

// Calls emit(selection) for every independent choice of at most one member
// per clique; returns the number of emissions.
long long enumerate_clique_sets(const SeparatorCandidate& sep, const IntersectionGraph& g,
                                const std::function<void(const std::vector<int>&)>& emit);

struct SeparatorStats {
  int depth = 0;
  long long candidates_tried = 0;
  double max_separator_weight = 0;
  long long balance_violations = 0;
  long long fallback_branches = 0;
};

struct SeparatorOptions {
  int base_threshold = 12;
};

MISResult solve_mis_separator(const std::vector<AxisBox>& objects, SeparatorStats* stats = nullptr,
                              const SeparatorOptions& opt = {});

// Chosen separator at the top level (used by the weight scaling probe).
SeparatorCandidate top_level_separator(const std::vector<AxisBox>& objects);

}  // namespace stabpack

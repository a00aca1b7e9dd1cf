// Intersection graphs and exact maximum independent set oracles.
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "stabpack/geometry.hpp"

namespace stabpack {

class IntersectionGraph {
 public:
  IntersectionGraph() = default;
  explicit IntersectionGraph(int n) : adj_(n) {}

  // Builds from an undirected edge list; self-loops are rejected and
  // duplicates collapsed.
  static IntersectionGraph from_edges(int n, const std::vector<std::pair<int, int>>& edges);

  int size() const { return static_cast<int>(adj_.size()); }
  std::size_t edge_count() const;
  const std::vector<int>& neighbors(int v) const { return adj_[v]; }
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }
  bool adjacent(int u, int v) const;
  std::vector<std::pair<int, int>> edges() const;

  // Subgraph induced by `keep`, vertices renumbered in the given order.
  IntersectionGraph induced(const std::vector<int>& keep) const;

  std::vector<std::string> labels;

 private:
  std::vector<std::vector<int>> adj_;
};

// Edge (i, j) iff the boxes intersect. With `prune` the pairs are swept along
// the first axis instead of tested exhaustively; the result is identical.
IntersectionGraph build_intersection_graph(const std::vector<AxisBox>& objects, bool prune = true);

struct MISResult {
  int size = 0;
  std::vector<int> witness;
  bool exact = true;
};

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kBruteForceCap = 30;

// Branch and bound; the witness is the lexicographically smallest maximum
// independent set in vertex order.
MISResult mis_bruteforce(const IntersectionGraph& g, int cap = kBruteForceCap);

struct SparseStats {
  std::int64_t branches = 0;
  std::int64_t folds = 0;
};

// Exact MIS via degree-0/1/2 reductions, component splitting and branching.
MISResult mis_sparse(const IntersectionGraph& g, SparseStats* stats = nullptr);

int even_subdivision_target(int mis_of_g, int double_subdivisions);

bool is_independent_set(const IntersectionGraph& g, const std::vector<int>& set);

struct SubdivisionCheck {
  bool ok = true;
  std::string reason;
  int vertex = -1;  // offending vertex of `big`, if any
};

// Checks that `big` is an even subdivision of `small`: branch[v] is the image
// of v, paths[e] realizes small.edges()[e] with an odd number of edges, and
// the paths' interiors are disjoint degree-2 vertices covering the rest of
// `big` exactly.
SubdivisionCheck verify_even_subdivision(const IntersectionGraph& big, const IntersectionGraph& small,
                                         const std::vector<int>& branch,
                                         const std::vector<std::vector<int>>& paths);

// "n m" header then one "u v" line per edge, 0-indexed.
std::string to_edge_list(const IntersectionGraph& g);
IntersectionGraph parse_edge_list(const std::string& text);

}  // namespace stabpack

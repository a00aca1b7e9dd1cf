// Permutation decomposition over grid products and vertex-disjoint routing
// in grid cubes and blown-up grid cubes.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace stabpack {

class WiringError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Bijection on the index tuples of A_1 x ... x A_m, stored on row-major
// flattened indices (axis 0 most significant).
struct GridPermutation {
  std::vector<int> shape;
  std::vector<int> map;

  static GridPermutation identity(const std::vector<int>& shape);
  int size() const { return static_cast<int>(map.size()); }
  int flatten(const std::vector<int>& tuple) const;
  std::vector<int> unflatten(int index) const;
  bool is_bijection() const;
  // True iff only coordinates listed in `axes` ever change.
  bool moves_only(const std::vector<int>& axes) const;
  bool operator==(const GridPermutation& o) const { return shape == o.shape && map == o.map; }
};

// a after b.
GridPermutation compose(const GridPermutation& a, const GridPermutation& b);

struct RowColFactors {
  GridPermutation b1, a, b2;  // pi = b2 . a . b1
};

// pi over A x B (shape {|A|, |B|}); b1 and b2 change only the B coordinate,
// a changes only the A coordinate.
RowColFactors decompose_rowcol(const GridPermutation& pi);

struct AxisFactor {
  int axis;
  GridPermutation perm;
};

// 2m - 1 factors on axes 0, 1, ..., m-1, ..., 1, 0; pi is the composition
// with factors[0] applied first.
std::vector<AxisFactor> decompose_axes(const GridPermutation& pi);

using Vertex = std::vector<int>;

struct PathSet {
  std::vector<std::vector<Vertex>> paths;
  std::vector<std::pair<Vertex, Vertex>> endpoints;
};

// Plain grid [dims_0] x ... when blowup == 0; otherwise every vertex carries
// a trailing index in [blowup] and vertices in the same or adjacent cells are
// adjacent.
struct GridHost {
  std::vector<int> dims;
  int blowup = 0;
  bool contains(const Vertex& v) const;
  bool adjacent(const Vertex& a, const Vertex& b) const;
};

struct PathCheck {
  bool ok = true;
  std::string reason;
  Vertex where;
};

PathCheck verify_disjoint_paths(const PathSet& ps, const GridHost& host,
                                const std::vector<std::pair<Vertex, Vertex>>& matching);

// Line i enters at (2i, 0, 0) and leaves at (2 sigma(i), 0, h-1) in the host
// [2n] x [2] x [h]; the sheet w = 1 carries the swaps.
PathSet route_line_permutation(const std::vector<int>& sigma, int h);
GridHost line_host(int n, int h);
int line_min_height(int n);

// Terminal p in [n]^(d-1) sits at cell 2p of the footprint [2n]^(d-1).
int cube_wiring_min_height(int n, int d);
GridHost cube_host(int n, int d, int h);
Vertex cube_terminal(const std::vector<int>& p, int z);

// Matching pairs are (bottom point, top point) in [n]^(d-1); unmatched points
// are padded and the padding paths dropped. Requires d >= 3.
PathSet cube_wiring(int n, int d, int h, const std::vector<std::pair<Vertex, Vertex>>& matching);

struct BlownCube {
  int n, t, d, h;
  GridHost host() const;
};

int blown_cube_min_height(int n, int d);

// Matching pairs are ((p, i), (q, j)) with p, q in [n]^(d-1) and i, j in [t].
PathSet blown_cube_wiring(const BlownCube& cube, const std::vector<std::pair<Vertex, Vertex>>& matching);
Vertex blown_terminal(const std::vector<int>& p, int z, int index);

}  // namespace stabpack

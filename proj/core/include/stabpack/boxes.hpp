// Canonical 1 x ... x 1 x L boxes realizing even subdivisions of degree-3
// subgraphs of blown-up grid cubes: bricks, gadgets, modules and assembly.
//
// Coordinates are integers over the denominator L. A brick holds one box per
// index of [L/8]^(d-1); index tuples are flattened row-major in the order of
// the axes perpendicular to the brick axis.
#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "stabpack/geometry.hpp"
#include "stabpack/isgraph.hpp"
#include "stabpack/sat.hpp"
#include "stabpack/wiring.hpp"

namespace stabpack {

class BoxBuildError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Box of side 1 in every direction except `axis`, where it has side L.
AxisBox canonical_box(int L, int d, int axis, const std::vector<Coord>& lo);
bool is_canonical(const AxisBox& b, int L);

struct Brick {
  int L = 16, d = 3, axis = 2;
  std::vector<Coord> base;          // lexmin corner of the basic brick it perturbs
  std::vector<std::vector<Coord>> corners;  // per flattened index

  int side() const { return L / 8; }
  int count() const { return static_cast<int>(corners.size()); }
  std::vector<int> perpendicular() const;
  std::vector<AxisBox> boxes() const;
};

// Box (index) at base + 3 * index on the perpendicular axes.
Brick basic_brick(int L, int d, int axis, const std::vector<Coord>& base);

// Perturbations relative to the basic brick are multiples of 3 along the
// axis with |k| <= 3L/8 and multiples of 1/L elsewhere with |k| <= 1/8.
bool is_normal_brick(const Brick& b);

enum class GadgetKind {
  ParityFix3,
  ParityFix4,
  Bridge,
  Adjustment,
  Elbow,
  ParallelMatching,
  GeneralMatching,
  Branching,
  BrickTree,
};

const char* to_string(GadgetKind k);

struct GadgetInstance {
  GadgetKind kind = GadgetKind::Bridge;
  int L = 16, d = 3;
  std::vector<AxisBox> boxes;
  std::vector<int> brick;  // brick number inside the gadget, per box
  std::vector<int> index;  // flattened entry index of the wire or tree, per box
  // Per index: entry box, exit box and, for stars and trees, the leaves.
  std::vector<int> entry, exit;
  std::vector<std::vector<int>> leaves;
};

// Three or four boxes along `axis` whose union is [anchor, anchor + 3L] x unit.
GadgetInstance make_parity_fix(int parity, int L, int d, int axis, const std::vector<Coord>& anchor);

// `length` translates of the brick along its axis, one L apart.
GadgetInstance make_bridge(const Brick& from, int length);

// (B, B') with B' basic, shifted by L/2 along the axis and by 1 - 1/8 along
// the second perpendicular axis.
GadgetInstance make_adjustment(const Brick& b);

// B (axis d-1) at (3i, 3j, ..., -3i) and B' (axis 0) at (3i, 3j, ..., L - 3i),
// both relative to `anchor`.
GadgetInstance make_elbow(int L, int d, const std::vector<Coord>& anchor);

// Four bricks routing index x to pi(x), where pi moves only index axis t.
// Exits are labelled by their target index: exit[pi(x)] is the last box of
// the wire entering at x.
GadgetInstance make_parallel_matching(int L, const GridPermutation& pi, int t,
                                      const std::vector<Coord>& anchor);

// Parity fix on every wire, then 2d - 3 chained parallel matchings along the
// last axis. parity[x] in {3, 4} picks the variant for the wire entering at x
// (empty means all 3).
GadgetInstance make_general_matching(int L, const GridPermutation& pi, const std::vector<int>& parity = {},
                                     const std::vector<Coord>& anchor = {});

// Extends a partial matching on flattened indices to a permutation of [size].
GridPermutation extend_matching(const std::vector<int>& shape, const std::vector<std::pair<int, int>>& pairs);

// B1, B2, B' = B1 + (3, 2, L - 1) and B'' = B2 + (L, 0, 0); B2 is the centre.
GadgetInstance make_branching(int L, int d, const std::vector<Coord>& anchor);

// Leaves of a module's brick-tree.
enum ModuleTerminal : int {
  kMinusX = 0,
  kPlusX,
  kMinusY,
  kPlusY,
  kMinusZ,
  kPlusZ,
  kCoreSource,
  kCoreTarget,
  kTerminalCount,
};

// Brick-tree of the fixed d = 3 module, restricted per index to the minimal
// subtree spanning the requested terminals (bit t of `mask` for terminal t).
GadgetInstance build_brick_tree(int L, unsigned mask);

struct BoxInstance {
  int dim = 3, L = 16;
  std::vector<AxisBox> boxes;
  std::vector<int> rep;                      // per G vertex
  std::vector<std::vector<int>> edge_paths;  // per G edge, in G.graph.edges() order
  int subdivisions = 0;                      // total double subdivisions
  int target = 0;
};

// Requires d = 3, L >= 16 divisible by 8 and G's blow-up equal to (L/8)^2.
BoxInstance build_instance(const BlownCubeSubgraph& g, int L);

// Recorded paths are odd paths of the box intersection graph, nothing else
// intersects and every box is used once.
SubdivisionCheck verify_even_subdivision(const BoxInstance& inst, const BlownCubeSubgraph& g);

}  // namespace stabpack

// Internal: bundles of parallel wires and the gadgets that move them.
//
// A bundle is the free end of one brick, travelling along `axis` in
// direction `sign`. Its slot (s_0, ..., s_{d-2}) sits at corner + 3 s_k on
// the k-th perpendicular axis (increasing axis order). Gadgets are written in
// a local frame (x1, x2, x3) and mapped onto world axes with signs.
#pragma once

#include <array>
#include <utility>
#include <vector>

#include "stabpack/boxes.hpp"

namespace stabpack::detail {

struct Piece {
  AxisBox box;
  int brick = 0;
  int slot = 0;  // flattened slot of the bundle the gadget was attached to
};

struct Bundle {
  int axis = 2, sign = 1;
  std::vector<Coord> corner;  // only perpendicular entries are meaningful
  Coord head = 0;
};

struct FrameChoice {
  int x1_axis, x1_sign;
  int x2_axis, x2_sign;
};

// Axial offsets of the parity-fix boxes inside [0, 3L] (scaled); three boxes
// one L apart, or four at the 1/L points nearest to equal spacing.
std::vector<Coord> parity_offsets(int L, int variant);

// Follows each start box through the intersection graph of `boxes`; every
// visited box must have at most two neighbours.
std::vector<std::vector<int>> trace_paths(const std::vector<AxisBox>& boxes, const std::vector<int>& starts);

class Engine {
 public:
  Engine(int L, int d);

  int L() const { return L_; }
  int d() const { return d_; }
  int m() const { return m_; }
  Coord unit() const { return L_; }
  Coord len() const { return static_cast<Coord>(L_) * L_; }
  int slots() const { return slots_; }

  std::vector<int> perpendicular(int axis) const;
  std::vector<int> slot_tuple(int flat) const;
  int slot_flat(const std::vector<int>& tuple) const;

  // Slot of a basic box of bundle b (box lies in b's grid).
  int slot_of(const Bundle& b, const AxisBox& box) const;

  // n basic bricks with advances in (len/2, len]; length 0 is a no-op.
  void straight(Bundle& b, Coord length);
  // parity[s] in {3, 4} per slot; the bundle advances by 3 len.
  void parity_fix(Bundle& b, const std::vector<int>& parity);
  Bundle elbow(const Bundle& b, int out_axis, int out_sign, bool with_exit = true);
  // Spine continues in b; returns the spike travelling along spike_axis.
  Bundle branch(Bundle& b, int spike_axis, int spike_sign, int x2_sign, bool with_exit = true);
  // out[s] is the slot reached from slot s; only perpendicular position k
  // may change. x1 follows that axis with x1_sign.
  void parallel(Bundle& b, int k, int x1_sign, const std::vector<int>& out, bool with_exit = true);

  struct GmConfig {
    std::vector<int> order;  // perpendicular positions, outermost factor axis first
    std::vector<int> signs;  // x1 sign per factor (2(d-1) - 1 entries)
  };
  // pi maps entry slots to exit slots (flattened).
  void general(Bundle& b, const GridPermutation& pi, const std::vector<int>& parity, const GmConfig& cfg);

  std::vector<Piece> pieces;
  int next_brick = 0;

  struct CBox {
    int brick;
    std::array<Coord, 3> lo;
    int axis;  // local axis carrying the long side
  };
  using Gen = std::vector<CBox> (*)(Coord u, Coord len, Coord i, Coord j, Coord p);

 private:
  // Emits every slot's local-frame boxes; returns one bundle per (brick,
  // local axis) exit, built from that brick's boxes.
  std::vector<Bundle> attach(const Bundle& b, const FrameChoice& f, Gen gen, const std::vector<int>& out_slot,
                             const std::vector<std::pair<int, int>>& exits, bool with_exit);

  int L_, d_, m_, slots_;
};

}  // namespace stabpack::detail

#include "stabpack/boxes.hpp"

#include <algorithm>
#include <cstdlib>

#include "brick_engine.hpp"

namespace stabpack {

using detail::Bundle;
using detail::Engine;

AxisBox canonical_box(int L, int d, int axis, const std::vector<Coord>& lo) {
  if (static_cast<int>(lo.size()) != d) throw BoxBuildError("corner has the wrong dimension");
  std::vector<Coord> hi(lo);
  for (int t = 0; t < d; ++t) hi[t] += t == axis ? static_cast<Coord>(L) * L : L;
  return AxisBox::make(lo, hi, L);
}

bool is_canonical(const AxisBox& b, int L) {
  if (b.den != L) return false;
  int longs = 0;
  for (int t = 0; t < b.dim; ++t) {
    if (b.side(t) == static_cast<Coord>(L) * L) {
      ++longs;
    } else if (b.side(t) != L) {
      return false;
    }
  }
  return longs == 1;
}

std::vector<int> Brick::perpendicular() const {
  std::vector<int> p;
  for (int t = 0; t < d; ++t) {
    if (t != axis) p.push_back(t);
  }
  return p;
}

std::vector<AxisBox> Brick::boxes() const {
  std::vector<AxisBox> res;
  for (const auto& c : corners) res.push_back(canonical_box(L, d, axis, c));
  return res;
}

Brick basic_brick(int L, int d, int axis, const std::vector<Coord>& base) {
  const Engine e(L, d);
  Brick b;
  b.L = L;
  b.d = d;
  b.axis = axis;
  b.base = base;
  const auto P = b.perpendicular();
  for (int s = 0; s < e.slots(); ++s) {
    const auto t = e.slot_tuple(s);
    std::vector<Coord> c(base);
    for (std::size_t q = 0; q < P.size(); ++q) c[P[q]] += 3 * t[q] * static_cast<Coord>(L);
    b.corners.push_back(c);
  }
  return b;
}

bool is_normal_brick(const Brick& b) {
  const Brick ref = basic_brick(b.L, b.d, b.axis, b.base);
  if (b.corners.size() != ref.corners.size()) return false;
  const Coord u = b.L;
  for (std::size_t s = 0; s < ref.corners.size(); ++s) {
    for (int t = 0; t < b.d; ++t) {
      const Coord k = b.corners[s][t] - ref.corners[s][t];
      if (t == b.axis) {
        if (k % (3 * u) != 0 || std::llabs(k) > 3 * (b.L / 8) * u) return false;
      } else if (std::llabs(k) > b.L / 8) {
        return false;
      }
    }
  }
  const auto bx = b.boxes();
  for (std::size_t a = 0; a < bx.size(); ++a) {
    for (std::size_t c = a + 1; c < bx.size(); ++c) {
      if (boxes_intersect(bx[a], bx[c])) return false;
    }
  }
  return true;
}

const char* to_string(GadgetKind k) {
  switch (k) {
    case GadgetKind::ParityFix3: return "parity-fix-3";
    case GadgetKind::ParityFix4: return "parity-fix-4";
    case GadgetKind::Bridge: return "bridge";
    case GadgetKind::Adjustment: return "adjustment";
    case GadgetKind::Elbow: return "elbow";
    case GadgetKind::ParallelMatching: return "parallel-matching";
    case GadgetKind::GeneralMatching: return "general-matching";
    case GadgetKind::Branching: return "branching";
    case GadgetKind::BrickTree: return "brick-tree";
  }
  return "?";
}

namespace {

Bundle start_bundle(const Engine& e, const std::vector<Coord>& anchor) {
  Bundle b;
  b.axis = e.d() - 1;
  b.sign = 1;
  b.corner = anchor.empty() ? std::vector<Coord>(e.d(), 0) : anchor;
  if (static_cast<int>(b.corner.size()) != e.d()) throw BoxBuildError("anchor has the wrong dimension");
  b.head = b.corner[b.axis];
  return b;
}

GadgetInstance collect(const Engine& e, GadgetKind kind) {
  GadgetInstance g;
  g.kind = kind;
  g.L = e.L();
  g.d = e.d();
  const int first = e.pieces.empty() ? 0 : e.pieces.front().brick;
  for (const auto& p : e.pieces) {
    g.boxes.push_back(p.box);
    g.brick.push_back(p.brick - first);
    g.index.push_back(p.slot);
  }
  g.entry.assign(e.slots(), -1);
  g.exit.assign(e.slots(), -1);
  g.leaves.assign(e.slots(), {});
  return g;
}

int box_of(const GadgetInstance& g, int brick, int index) {
  for (std::size_t b = 0; b < g.boxes.size(); ++b) {
    if (g.brick[b] == brick && g.index[b] == index) return static_cast<int>(b);
  }
  return -1;
}

}  // namespace

GadgetInstance make_parity_fix(int parity, int L, int d, int axis, const std::vector<Coord>& anchor) {
  if (L < 16) throw BoxBuildError("L must be at least 16");
  const auto offsets = detail::parity_offsets(L, parity);
  GadgetInstance g;
  g.kind = parity == 3 ? GadgetKind::ParityFix3 : GadgetKind::ParityFix4;
  g.L = L;
  g.d = d;
  for (std::size_t k = 0; k < offsets.size(); ++k) {
    std::vector<Coord> lo(anchor);
    lo.at(axis) += offsets[k];
    g.boxes.push_back(canonical_box(L, d, axis, lo));
    g.brick.push_back(static_cast<int>(k));
    g.index.push_back(0);
  }
  g.entry = {0};
  g.exit = {static_cast<int>(offsets.size()) - 1};
  g.leaves = {{}};
  return g;
}

GadgetInstance make_bridge(const Brick& from, int length) {
  if (length < 1) throw BoxBuildError("bridge length must be positive");
  GadgetInstance g;
  g.kind = GadgetKind::Bridge;
  g.L = from.L;
  g.d = from.d;
  const Coord len = static_cast<Coord>(from.L) * from.L;
  for (int k = 0; k < length; ++k) {
    for (int s = 0; s < from.count(); ++s) {
      std::vector<Coord> c(from.corners[s]);
      c[from.axis] += k * len;
      g.boxes.push_back(canonical_box(from.L, from.d, from.axis, c));
      g.brick.push_back(k);
      g.index.push_back(s);
    }
  }
  g.entry.resize(from.count());
  g.exit.resize(from.count());
  g.leaves.assign(from.count(), {});
  for (int s = 0; s < from.count(); ++s) {
    g.entry[s] = s;
    g.exit[s] = (length - 1) * from.count() + s;
  }
  return g;
}

GadgetInstance make_adjustment(const Brick& b) {
  if (!is_normal_brick(b)) throw BoxBuildError("adjustment needs a normal brick");
  std::vector<Coord> base(b.base);
  base[b.axis] += static_cast<Coord>(b.L) * b.L / 2;
  base[b.perpendicular()[1]] += b.L - b.L / 8;
  const Brick partner = basic_brick(b.L, b.d, b.axis, base);
  GadgetInstance g;
  g.kind = GadgetKind::Adjustment;
  g.L = b.L;
  g.d = b.d;
  for (int k = 0; k < 2; ++k) {
    const Brick& src = k == 0 ? b : partner;
    for (int s = 0; s < src.count(); ++s) {
      g.boxes.push_back(canonical_box(b.L, b.d, b.axis, src.corners[s]));
      g.brick.push_back(k);
      g.index.push_back(s);
    }
  }
  g.entry.resize(b.count());
  g.exit.resize(b.count());
  g.leaves.assign(b.count(), {});
  for (int s = 0; s < b.count(); ++s) {
    g.entry[s] = s;
    g.exit[s] = b.count() + s;
  }
  return g;
}

GadgetInstance make_elbow(int L, int d, const std::vector<Coord>& anchor) {
  Engine e(L, d);
  e.elbow(start_bundle(e, anchor), 0, 1, false);
  GadgetInstance g = collect(e, GadgetKind::Elbow);
  for (int s = 0; s < e.slots(); ++s) {
    g.entry[s] = box_of(g, 0, s);
    g.exit[s] = box_of(g, 1, s);
  }
  return g;
}

GadgetInstance make_parallel_matching(int L, const GridPermutation& pi, int t, const std::vector<Coord>& anchor) {
  const int d = static_cast<int>(pi.shape.size()) + 1;
  Engine e(L, d);
  if (pi.shape != std::vector<int>(d - 1, e.m()) || !pi.is_bijection()) {
    throw BoxBuildError("parallel matching needs a permutation of [L/8]^(d-1)");
  }
  if (t < 0 || t >= d - 1 || !pi.moves_only({t})) throw BoxBuildError("permutation moves more than axis t");
  Bundle b = start_bundle(e, anchor);
  e.parallel(b, t, 1, pi.map, false);
  GadgetInstance g = collect(e, GadgetKind::ParallelMatching);
  for (int s = 0; s < e.slots(); ++s) {
    g.entry[s] = box_of(g, 0, s);
    g.exit[pi.map[s]] = box_of(g, 3, s);
  }
  return g;
}

GridPermutation extend_matching(const std::vector<int>& shape, const std::vector<std::pair<int, int>>& pairs) {
  GridPermutation p = GridPermutation::identity(shape);
  const int n = p.size();
  std::vector<int> fwd(n, -1);
  std::vector<char> hit(n, 0);
  for (const auto& [a, b] : pairs) {
    if (a < 0 || a >= n || b < 0 || b >= n || fwd[a] != -1 || hit[b]) {
      throw BoxBuildError("pairs are not a partial matching");
    }
    fwd[a] = b;
    hit[b] = 1;
  }
  int free_target = 0;
  for (int a = 0; a < n; ++a) {
    if (fwd[a] != -1) continue;
    while (hit[free_target]) ++free_target;
    fwd[a] = free_target;
    hit[free_target] = 1;
  }
  p.map = fwd;
  return p;
}

GadgetInstance make_general_matching(int L, const GridPermutation& pi, const std::vector<int>& parity,
                                     const std::vector<Coord>& anchor) {
  const int d = static_cast<int>(pi.shape.size()) + 1;
  Engine e(L, d);
  if (pi.shape != std::vector<int>(d - 1, e.m())) throw BoxBuildError("general matching shape must be [L/8]^(d-1)");
  if (!parity.empty() && static_cast<int>(parity.size()) != e.slots()) throw BoxBuildError("one parity per wire");
  Bundle b = start_bundle(e, anchor);
  e.general(b, pi, parity, {});
  GadgetInstance g = collect(e, GadgetKind::GeneralMatching);
  std::vector<int> starts;
  for (int s = 0; s < e.slots(); ++s) starts.push_back(box_of(g, 0, s));
  const auto wires = detail::trace_paths(g.boxes, starts);
  for (int s = 0; s < e.slots(); ++s) {
    const int last = wires[s].back();
    g.entry[s] = starts[s];
    g.exit[e.slot_of(b, g.boxes[last])] = last;
  }
  return g;
}

GadgetInstance make_branching(int L, int d, const std::vector<Coord>& anchor) {
  Engine e(L, d);
  Bundle b = start_bundle(e, anchor);
  e.branch(b, 0, 1, 1, false);
  GadgetInstance g = collect(e, GadgetKind::Branching);
  for (int s = 0; s < e.slots(); ++s) {
    g.entry[s] = box_of(g, 1, s);  // the centre
    g.leaves[s] = {box_of(g, 0, s), box_of(g, 2, s), box_of(g, 3, s)};
  }
  return g;
}

}  // namespace stabpack

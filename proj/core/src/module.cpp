// Module template for d = 3 and assembly of a full box instance.
//
// One module per cell of the blown-up cube. Its spine runs along +z and
// carries (L/8)^2 parallel trees, one per intra-cell index; branchings put
// out spikes toward the six faces and two core spikes. Wires are general
// matchings: the core wire loops from the source spike back onto the target
// spike, and the interface wire of axis k leaves the +k spike and meets the
// -k spike of the next module head-on. Modules sit on a (sheared) lattice
// whose vectors are read off the template.
#include <algorithm>
#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <queue>
#include <stdexcept>

#include "brick_engine.hpp"
#include "stabpack/boxes.hpp"

namespace stabpack {

namespace {

using detail::Bundle;
using detail::Engine;
using detail::Piece;

constexpr int kCoreWire = 3;  // wires 0, 1, 2 are the interfaces along x, y, z
constexpr int kWireKinds = 4;

Bundle shifted(Bundle b, const std::array<Coord, 3>& s) {
  for (int t = 0; t < 3; ++t) b.corner[t] += s[t];
  b.head += s[b.axis];
  return b;
}

AxisBox shifted(const AxisBox& b, const std::array<Coord, 3>& s) {
  AxisBox r = b;
  for (int t = 0; t < 3; ++t) {
    r.lo[t] += s[t];
    r.hi[t] += s[t];
  }
  return r;
}

Engine::GmConfig wire_config(int kind) {
  // Core: outer factor on y (there and back), middle on x. Interfaces: outer
  // on the first perpendicular axis, middle on the second.
  if (kind == kCoreWire) return {{1, 0}, {1, 1, -1}};
  return {{0, 1}, {1, 1, -1}};
}

struct Template {
  int L = 0, m = 0, slots = 0;
  Coord len = 0;

  std::vector<AxisBox> boxes;  // every tree box, all trees
  std::vector<int> tree;       // tree id per box
  std::vector<std::vector<int>> adj;
  std::array<std::vector<int>, kTerminalCount> leaf;  // [terminal][tree] -> box

  std::array<Bundle, kWireKinds> start;
  Coord core_lead = 0, core_return = 0;
  // Per wire kind and tree: slot of the first wire gadget, general-matching
  // entry slot of the wire leaving this tree, and the general-matching exit
  // slot of the wire arriving at it.
  std::array<std::vector<int>, kWireKinds> first_slot, gm_in, gm_out;
  std::array<int, kWireKinds> wire_len{};  // boxes per wire with parity 3
  std::array<std::array<Coord, 3>, 3> lattice{};
};

struct WireBuild {
  std::vector<Piece> pieces;
  int first_brick = 0;
  int parity_brick = 0;
  Bundle end;
};

WireBuild build_wire(const Template& t, int kind, const std::array<Coord, 3>& at, const GridPermutation& pi,
                     const std::vector<int>& parity, Coord core_lead) {
  Engine e(t.L, 3);
  WireBuild w;
  Bundle b = shifted(t.start[kind], at);
  w.first_brick = e.next_brick;
  if (kind == kCoreWire) {
    e.straight(b, core_lead);
    b = e.elbow(b, 2, 1);
    w.parity_brick = e.next_brick;
    e.general(b, pi, parity, wire_config(kind));
    b = e.elbow(b, 0, -1);
    e.straight(b, t.core_return);
  } else {
    w.parity_brick = e.next_brick;
    e.general(b, pi, parity, wire_config(kind));
  }
  w.pieces = std::move(e.pieces);
  w.end = b;
  return w;
}

std::vector<AxisBox> boxes_of(const std::vector<Piece>& ps) {
  std::vector<AxisBox> r;
  r.reserve(ps.size());
  for (const auto& p : ps) r.push_back(p.box);
  return r;
}

int find_piece(const std::vector<Piece>& ps, int brick, int slot) {
  for (std::size_t k = 0; k < ps.size(); ++k) {
    if (ps[k].brick == brick && ps[k].slot == slot) return static_cast<int>(k);
  }
  throw std::logic_error("missing piece");
}

Template make_template(int L) {
  Template t;
  Engine e(L, 3);
  t.L = L;
  t.m = e.m();
  t.slots = e.slots();
  t.len = e.len();
  const Coord len = t.len;
  std::array<int, kTerminalCount> leaf_brick{};

  Bundle sp;
  sp.axis = 2;
  sp.corner = {0, 0, 0};
  e.straight(sp, len);
  leaf_brick[kMinusZ] = e.next_brick - 1;
  const Bundle bottom = sp;

  auto spike = [&](int term, int axis, int sign, int x2_sign) {
    const Bundle s = e.branch(sp, axis, sign, x2_sign);
    leaf_brick[term] = e.next_brick - 1;
    return s;
  };
  t.start[0] = spike(kPlusX, 0, 1, 1);
  t.start[1] = spike(kPlusY, 1, 1, 1);
  const Bundle minus_y = spike(kMinusY, 1, -1, -1);
  t.start[kCoreWire] = spike(kCoreSource, 0, 1, 1);
  const Bundle minus_x = spike(kMinusX, 0, -1, -1);

  // The core wire tops out where the target spike leaves the spine, then
  // returns along -x and overlaps the target spike by a quarter length.
  const auto ident = GridPermutation::identity({t.m, t.m});
  const Coord tip = t.start[kCoreWire].head;  // both core spikes end here
  Bundle ret;
  for (t.core_lead = 0;; t.core_lead += len) {
    if (t.core_lead > 4 * len) throw std::logic_error("core wire does not close");
    t.core_return = 0;
    ret = build_wire(t, kCoreWire, {0, 0, 0}, ident, {}, t.core_lead).end;
    const Coord r = ret.head - tip + len / 4;
    if (r == 0 || 2 * r > len) {
      t.core_return = r;
      break;
    }
  }
  const Coord top = ret.corner[2] - len + 3 * (t.m - 1) * t.L;
  e.straight(sp, top - sp.head);
  const Bundle target = e.branch(sp, 0, 1, 1);
  leaf_brick[kCoreTarget] = e.next_brick - 1;
  if (target.corner[1] != ret.corner[1] || target.corner[2] != ret.corner[2] || target.head != tip) {
    throw std::logic_error("core spikes are misaligned");
  }
  e.straight(sp, len);
  leaf_brick[kPlusZ] = e.next_brick - 1;
  t.start[2] = sp;

  // Trees are the components of the template.
  t.boxes = boxes_of(e.pieces);
  const IntersectionGraph g = build_intersection_graph(t.boxes);
  const int n = g.size();
  t.adj.resize(n);
  for (int v = 0; v < n; ++v) t.adj[v] = g.neighbors(v);
  t.tree.assign(n, -1);
  for (int v = 0; v < n; ++v) {
    if (e.pieces[v].brick != leaf_brick[kMinusZ]) continue;
    std::vector<int> stack{v};
    t.tree[v] = e.pieces[v].slot;
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      for (int y : g.neighbors(x)) {
        if (t.tree[y] == -1) {
          t.tree[y] = t.tree[v];
          stack.push_back(y);
        } else if (t.tree[y] != t.tree[v]) {
          throw std::logic_error("trees touch");
        }
      }
    }
  }
  std::vector<int> leaves(t.slots, 0);
  for (int v = 0; v < n; ++v) {
    if (t.tree[v] < 0 || g.degree(v) > 3) throw std::logic_error("template is not a forest of cubic trees");
    if (g.degree(v) == 1) ++leaves[t.tree[v]];
  }
  for (int term = 0; term < kTerminalCount; ++term) {
    t.leaf[term].assign(t.slots, -1);
    for (int v = 0; v < n; ++v) {
      if (e.pieces[v].brick == leaf_brick[term]) t.leaf[term][t.tree[v]] = v;
    }
  }
  for (int k = 0; k < t.slots; ++k) {
    if (leaves[k] != kTerminalCount) throw std::logic_error("tree has stray leaves");
    for (int term = 0; term < kTerminalCount; ++term) {
      if (g.degree(t.leaf[term][k]) != 1) throw std::logic_error("terminal is not a leaf");
    }
  }
  if (g.edge_count() + t.slots != static_cast<std::size_t>(n)) throw std::logic_error("template has cycles");

  // Interface wires.
  const std::array<Bundle, 3> minus = {minus_x, minus_y, bottom};
  const std::array<int, 3> plus_term = {kPlusX, kPlusY, kPlusZ};
  const std::array<int, 3> minus_term = {kMinusX, kMinusY, kMinusZ};
  for (int k = 0; k < 3; ++k) {
    const WireBuild w = build_wire(t, k, {0, 0, 0}, ident, {}, 0);
    t.gm_in[k].resize(t.slots);
    t.gm_out[k].resize(t.slots);
    for (int tr = 0; tr < t.slots; ++tr) {
      t.gm_in[k][tr] = e.slot_of(t.start[k], t.boxes[t.leaf[plus_term[k]][tr]]);
      t.gm_out[k][tr] = e.slot_of(minus[k], t.boxes[t.leaf[minus_term[k]][tr]]);
    }
    t.first_slot[k] = t.gm_in[k];
    std::vector<int> starts;
    for (int s = 0; s < t.slots; ++s) starts.push_back(find_piece(w.pieces, w.first_brick, s));
    const auto wires = detail::trace_paths(boxes_of(w.pieces), starts);
    t.wire_len[k] = static_cast<int>(wires[0].size());
    for (const auto& wire : wires) {
      if (static_cast<int>(wire.size()) != t.wire_len[k]) throw std::logic_error("uneven interface wires");
    }
    for (int q = 0; q < 3; ++q) t.lattice[k][q] = w.end.corner[q] - minus[k].corner[q];
    t.lattice[k][k] = k == 2 ? w.end.head : w.end.head - len / 4 - minus[k].head;
  }

  // Core wire: follow each source leaf to the target leaf it reaches.
  {
    const WireBuild w = build_wire(t, kCoreWire, {0, 0, 0}, ident, {}, t.core_lead);
    std::vector<AxisBox> all = t.boxes;
    for (const auto& p : w.pieces) all.push_back(p.box);
    const IntersectionGraph cg = build_intersection_graph(all);
    auto& in = t.gm_in[kCoreWire];
    auto& out = t.gm_out[kCoreWire];
    auto& first = t.first_slot[kCoreWire];
    in.assign(t.slots, -1);
    out.assign(t.slots, -1);
    first.assign(t.slots, -1);
    for (int tr = 0; tr < t.slots; ++tr) {
      int prev = t.leaf[kCoreSource][tr], cur = -1, count = 0;
      for (int y : cg.neighbors(prev)) {
        if (y >= n) cur = y;
      }
      if (cur < 0) throw std::logic_error("core wire does not touch its source");
      first[tr] = w.pieces[cur - n].slot;
      while (cur >= n) {
        const Piece& p = w.pieces[cur - n];
        if (p.brick == w.parity_brick && in[tr] < 0) in[tr] = p.slot;
        ++count;
        int next = -1;
        for (int y : cg.neighbors(cur)) {
          if (y != prev) next = y;
        }
        if (cg.degree(cur) != 2 || next < 0) throw std::logic_error("core wire branches");
        prev = cur;
        cur = next;
      }
      const auto hit = std::find(t.leaf[kCoreTarget].begin(), t.leaf[kCoreTarget].end(), cur);
      if (hit == t.leaf[kCoreTarget].end()) throw std::logic_error("core wire misses the target spike");
      out[hit - t.leaf[kCoreTarget].begin()] = in[tr];
      if (tr == 0) t.wire_len[kCoreWire] = count;
      if (count != t.wire_len[kCoreWire]) throw std::logic_error("uneven core wires");
    }
  }
  return t;
}

const Template& template_for(int L) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<Template>> cache;
  const std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[L];
  if (!slot) slot = std::make_unique<Template>(make_template(L));
  return *slot;
}

std::vector<int> tree_path(const Template& t, int from, int to) {
  std::map<int, int> parent{{from, from}};
  std::queue<int> q;
  q.push(from);
  while (!q.empty() && !parent.count(to)) {
    const int x = q.front();
    q.pop();
    for (int y : t.adj[x]) {
      if (parent.emplace(y, x).second) q.push(y);
    }
  }
  if (!parent.count(to)) throw std::logic_error("terminals lie in different trees");
  std::vector<int> path{to};
  while (path.back() != from) path.push_back(parent.at(path.back()));
  std::reverse(path.begin(), path.end());
  return path;
}

struct TreeRoute {
  int rep = -1;
  std::array<std::vector<int>, kTerminalCount> to_leaf;  // rep first, leaf last
};

// Minimal subtree of tree `tr` spanning the requested terminals.
TreeRoute route_tree(const Template& t, int tr, const std::vector<int>& terms) {
  TreeRoute r;
  if (terms.empty()) {
    r.rep = t.leaf[kMinusZ][tr];
    return r;
  }
  const int l0 = t.leaf[terms[0]][tr];
  if (terms.size() == 1) {
    r.rep = l0;
  } else if (terms.size() == 2) {
    const auto p = tree_path(t, l0, t.leaf[terms[1]][tr]);
    r.rep = p[p.size() / 2];
  } else if (terms.size() == 3) {
    const auto p1 = tree_path(t, l0, t.leaf[terms[1]][tr]);
    const auto p2 = tree_path(t, l0, t.leaf[terms[2]][tr]);
    std::size_t k = 0;
    while (k + 1 < p1.size() && k + 1 < p2.size() && p1[k + 1] == p2[k + 1]) ++k;
    r.rep = p1[k];
  } else {
    throw BoxBuildError("vertex has degree above three");
  }
  for (int term : terms) r.to_leaf[term] = tree_path(t, r.rep, t.leaf[term][tr]);
  return r;
}

std::array<Coord, 3> module_origin(const Template& t, const Vertex& v) {
  std::array<Coord, 3> o{};
  for (int k = 0; k < 3; ++k) {
    for (int q = 0; q < 3; ++q) o[q] += v[k] * t.lattice[k][q];
  }
  return o;
}

struct EdgePlan {
  int from = -1, to = -1;  // G vertices; the wire leaves `from`
  int kind = 0;
  int parity = 3;
};

}  // namespace

GadgetInstance build_brick_tree(int L, unsigned mask) {
  const Template& t = template_for(L);
  std::vector<int> terms;
  for (int term = 0; term < kTerminalCount; ++term) {
    if (mask & (1u << term)) terms.push_back(term);
  }
  if (mask >> kTerminalCount) throw BoxBuildError("unknown terminal");
  GadgetInstance g;
  g.kind = GadgetKind::BrickTree;
  g.L = L;
  g.d = 3;
  g.entry.assign(t.slots, -1);
  g.exit.assign(t.slots, -1);
  g.leaves.assign(t.slots, {});
  std::vector<int> chosen;
  std::vector<int> id(t.boxes.size(), -1);
  auto take = [&](int v) {
    if (id[v] < 0) {
      id[v] = static_cast<int>(g.boxes.size());
      g.boxes.push_back(t.boxes[v]);
      g.brick.push_back(0);
      g.index.push_back(t.tree[v]);
    }
    return id[v];
  };
  for (int tr = 0; tr < t.slots; ++tr) {
    if (terms.size() > 3) {
      // Whole tree, rooted at the bottom of the spine.
      for (std::size_t v = 0; v < t.boxes.size(); ++v) {
        if (t.tree[v] == tr) take(static_cast<int>(v));
      }
      g.entry[tr] = id[t.leaf[kMinusZ][tr]];
      for (int term : terms) g.leaves[tr].push_back(id[t.leaf[term][tr]]);
      continue;
    }
    const TreeRoute r = route_tree(t, tr, terms);
    g.entry[tr] = take(r.rep);
    for (int term : terms) {
      for (int v : r.to_leaf[term]) take(v);
      g.leaves[tr].push_back(id[t.leaf[term][tr]]);
    }
  }
  return g;
}

BoxInstance build_instance(const BlownCubeSubgraph& g, int L) {
  if (g.d != 3) throw BoxBuildError("box instances are built for d = 3 only");
  const Template& t = template_for(L);
  if (g.t != t.slots) throw BoxBuildError("blow-up must equal (L/8)^2");
  const int nv = g.graph.size();
  if (static_cast<int>(g.vertices.size()) != nv) throw BoxBuildError("vertex list does not match the graph");
  for (const auto& v : g.vertices) {
    if (v.size() != 4 || v[3] < 0 || v[3] >= t.slots) throw BoxBuildError("malformed blown-cube vertex");
  }

  BoxInstance inst;
  inst.dim = 3;
  inst.L = L;
  const auto edges = g.graph.edges();
  std::vector<EdgePlan> plan(edges.size());
  std::vector<std::vector<int>> terms(nv);
  auto use = [&](int v, int term) {
    if (std::find(terms[v].begin(), terms[v].end(), term) != terms[v].end()) {
      throw BoxBuildError("two edges leave a vertex toward the same cell");
    }
    terms[v].push_back(term);
  };
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto [a, b] = edges[e];
    const Vertex &va = g.vertices[a], &vb = g.vertices[b];
    int axis = -1, moved = 0;
    for (int k = 0; k < 3; ++k) {
      const int diff = vb[k] - va[k];
      if (diff == 0) continue;
      if (std::abs(diff) != 1) throw BoxBuildError("edge joins non-adjacent cells");
      ++moved;
      axis = k;
      if (diff < 0) std::swap(a, b);
    }
    if (moved > 1) throw BoxBuildError("edge joins non-adjacent cells");
    EdgePlan& p = plan[e];
    p.from = a;
    p.to = b;
    p.kind = moved == 0 ? kCoreWire : axis;
    if (moved == 0) {
      use(a, kCoreSource);
      use(b, kCoreTarget);
    } else {
      use(a, std::array<int, 3>{kPlusX, kPlusY, kPlusZ}[axis]);
      use(b, std::array<int, 3>{kMinusX, kMinusY, kMinusZ}[axis]);
    }
  }

  // Trees first, in vertex order.
  std::vector<TreeRoute> routes(nv);
  std::vector<std::map<int, int>> ids(nv);
  auto tree_box = [&](int v, int tb) {
    auto [it, fresh] = ids[v].emplace(tb, static_cast<int>(inst.boxes.size()));
    if (fresh) inst.boxes.push_back(shifted(t.boxes[tb], module_origin(t, g.vertices[v])));
    return it->second;
  };
  for (int v = 0; v < nv; ++v) {
    routes[v] = route_tree(t, g.vertices[v][3], terms[v]);
    inst.rep.push_back(tree_box(v, routes[v].rep));
    for (int term : terms[v]) {
      for (int tb : routes[v].to_leaf[term]) tree_box(v, tb);
    }
  }

  // Wire parities, grouped per (cell, kind).
  const std::array<int, kWireKinds> out_term = {kPlusX, kPlusY, kPlusZ, kCoreSource};
  const std::array<int, kWireKinds> in_term = {kMinusX, kMinusY, kMinusZ, kCoreTarget};
  std::map<std::pair<Vertex, int>, std::vector<int>> groups;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    EdgePlan& p = plan[e];
    const int da = static_cast<int>(routes[p.from].to_leaf[out_term[p.kind]].size()) - 1;
    const int db = static_cast<int>(routes[p.to].to_leaf[in_term[p.kind]].size()) - 1;
    p.parity = (da + db + t.wire_len[p.kind] + 1) % 2 == 1 ? 3 : 4;
    const Vertex& va = g.vertices[p.from];
    groups[{Vertex(va.begin(), va.begin() + 3), p.kind}].push_back(static_cast<int>(e));
  }

  inst.edge_paths.resize(edges.size());
  for (const auto& [key, members] : groups) {
    const int kind = key.second;
    std::vector<std::pair<int, int>> pairs;
    std::vector<int> parity(t.slots, 3);
    std::vector<int> starts;
    for (int e : members) {
      const int ta = g.vertices[plan[e].from][3], tb = g.vertices[plan[e].to][3];
      pairs.emplace_back(t.gm_in[kind][ta], t.gm_out[kind][tb]);
      parity[t.gm_in[kind][ta]] = plan[e].parity;
    }
    const auto pi = extend_matching({t.m, t.m}, pairs);
    const WireBuild w = build_wire(t, kind, module_origin(t, key.first), pi, parity, t.core_lead);
    for (int e : members) {
      const int ta = g.vertices[plan[e].from][3];
      starts.push_back(find_piece(w.pieces, w.first_brick, t.first_slot[kind][ta]));
    }
    const auto wires = detail::trace_paths(boxes_of(w.pieces), starts);
    for (std::size_t q = 0; q < members.size(); ++q) {
      const EdgePlan& p = plan[members[q]];
      if (static_cast<int>(wires[q].size()) != t.wire_len[kind] + (p.parity == 4 ? 1 : 0)) {
        throw std::logic_error("wire has the wrong length");
      }
      auto& path = inst.edge_paths[members[q]];
      for (int tb : routes[p.from].to_leaf[out_term[kind]]) path.push_back(ids[p.from].at(tb));
      for (int b : wires[q]) {
        path.push_back(static_cast<int>(inst.boxes.size()));
        inst.boxes.push_back(w.pieces[b].box);
      }
      const auto& back = routes[p.to].to_leaf[in_term[kind]];
      for (auto it = back.rbegin(); it != back.rend(); ++it) path.push_back(ids[p.to].at(*it));
      if (p.from != edges[members[q]].first) std::reverse(path.begin(), path.end());
      inst.subdivisions += static_cast<int>(path.size() - 2) / 2;
    }
  }
  inst.target = even_subdivision_target(g.target, inst.subdivisions);
  return inst;
}

SubdivisionCheck verify_even_subdivision(const BoxInstance& inst, const BlownCubeSubgraph& g) {
  SubdivisionCheck res;
  for (std::size_t b = 0; b < inst.boxes.size(); ++b) {
    if (!is_canonical(inst.boxes[b], inst.L)) {
      res.ok = false;
      res.reason = "box is not canonical";
      res.vertex = static_cast<int>(b);
      return res;
    }
  }
  return verify_even_subdivision(build_intersection_graph(inst.boxes), g.graph, inst.rep, inst.edge_paths);
}

}  // namespace stabpack

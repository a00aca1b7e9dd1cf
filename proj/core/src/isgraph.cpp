#include "stabpack/isgraph.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

namespace stabpack {

IntersectionGraph IntersectionGraph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  IntersectionGraph g(n);
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) throw std::invalid_argument("edge endpoint out of range");
    if (u == v) throw std::invalid_argument("self-loop");
    g.adj_[u].push_back(v);
    g.adj_[v].push_back(u);
  }
  for (auto& a : g.adj_) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  return g;
}

std::size_t IntersectionGraph::edge_count() const {
  std::size_t m = 0;
  for (const auto& a : adj_) m += a.size();
  return m / 2;
}

bool IntersectionGraph::adjacent(int u, int v) const {
  return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
}

std::vector<std::pair<int, int>> IntersectionGraph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int u = 0; u < size(); ++u) {
    for (int v : adj_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

IntersectionGraph IntersectionGraph::induced(const std::vector<int>& keep) const {
  std::vector<int> pos(size(), -1);
  for (int i = 0; i < static_cast<int>(keep.size()); ++i) pos[keep[i]] = i;
  IntersectionGraph h(static_cast<int>(keep.size()));
  for (int i = 0; i < static_cast<int>(keep.size()); ++i) {
    for (int w : adj_[keep[i]]) {
      if (pos[w] >= 0) h.adj_[i].push_back(pos[w]);
    }
    std::sort(h.adj_[i].begin(), h.adj_[i].end());
  }
  if (!labels.empty()) {
    for (int v : keep) h.labels.push_back(labels[v]);
  }
  return h;
}

IntersectionGraph build_intersection_graph(const std::vector<AxisBox>& objects, bool prune) {
  const int n = static_cast<int>(objects.size());
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i < n; ++i) {
    if (objects[i].dim != objects[0].dim) throw GeometryError("mixed dimensions");
    if (objects[i].den != objects[0].den) throw GeometryError("mixed denominators");
  }
  if (!prune) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (boxes_intersect(objects[i], objects[j])) edges.emplace_back(i, j);
      }
    }
    return IntersectionGraph::from_edges(n, edges);
  }
  // Sweep along the axis with the smallest total extent.
  int axis = 0;
  if (n > 0) {
    Wide best = -1;
    for (int t = 0; t < objects[0].dim; ++t) {
      Wide total = 0;
      for (const auto& b : objects) total += b.side(t);
      if (best < 0 || total < best) {
        best = total;
        axis = t;
      }
    }
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return objects[a].lo[axis] < objects[b].lo[axis];
  });
  for (int p = 0; p < n; ++p) {
    const AxisBox& a = objects[order[p]];
    for (int q = p + 1; q < n && objects[order[q]].lo[axis] <= a.hi[axis]; ++q) {
      if (boxes_intersect(a, objects[order[q]])) edges.emplace_back(order[p], order[q]);
    }
  }
  return IntersectionGraph::from_edges(n, edges);
}

namespace {

using Mask = std::uint64_t;

struct BitGraph {
  int n;
  std::vector<Mask> nb;
};

int max_is(const BitGraph& g, Mask mask, int lower) {
  if (mask == 0) return 0;
  int ub = std::popcount(mask);
  if (ub <= lower) return 0;
  // Take vertices of degree <= 1 greedily; pick the max-degree vertex otherwise.
  int best_v = -1;
  int best_deg = -1;
  for (Mask m = mask; m != 0; m &= m - 1) {
    int v = std::countr_zero(m);
    int deg = std::popcount(g.nb[v] & mask);
    if (deg <= 1) return 1 + max_is(g, mask & ~(g.nb[v] | (Mask(1) << v)), lower - 1);
    if (deg > best_deg) {
      best_deg = deg;
      best_v = v;
    }
  }
  Mask vbit = Mask(1) << best_v;
  int with = 1 + max_is(g, mask & ~(g.nb[best_v] | vbit), lower - 1);
  int without = max_is(g, mask & ~vbit, std::max(lower, with));
  return std::max(with, without);
}

}  // namespace

MISResult mis_bruteforce(const IntersectionGraph& g, int cap) {
  const int n = g.size();
  if (n > cap || n > 64) throw CapExceeded("brute-force MIS cap exceeded: n=" + std::to_string(n));
  BitGraph bg{n, std::vector<Mask>(n, 0)};
  for (int v = 0; v < n; ++v) {
    for (int w : g.neighbors(v)) bg.nb[v] |= Mask(1) << w;
  }
  Mask all = n == 64 ? ~Mask(0) : (Mask(1) << n) - 1;
  MISResult res;
  res.size = max_is(bg, all, 0);
  // Lexicographically smallest witness: include v whenever the rest can
  // still reach the optimum.
  Mask avail = all;
  int need = res.size;
  for (int v = 0; v < n && need > 0; ++v) {
    Mask vbit = Mask(1) << v;
    if (!(avail & vbit)) continue;
    Mask rest = avail & ~(bg.nb[v] | vbit);
    rest &= ~((vbit << 1) - 1);
    if (1 + max_is(bg, rest, need - 2) >= need) {
      res.witness.push_back(v);
      avail = rest;
      --need;
    } else {
      avail &= ~vbit;
    }
  }
  return res;
}

namespace {

// Mutable graph for the reduction solver. Folding appends new vertices.
class Kernel {
 public:
  std::vector<std::vector<int>> adj;
  std::vector<char> alive;
  int live = 0;

  int add_vertex() {
    adj.emplace_back();
    alive.push_back(1);
    ++live;
    return static_cast<int>(adj.size()) - 1;
  }

  void remove(int v) {
    for (int w : adj[v]) {
      auto& a = adj[w];
      a.erase(std::find(a.begin(), a.end(), v));
    }
    adj[v].clear();
    alive[v] = 0;
    --live;
  }

  bool adjacent(int u, int v) const {
    const auto& a = adj[u].size() < adj[v].size() ? adj[u] : adj[v];
    int other = adj[u].size() < adj[v].size() ? v : u;
    return std::find(a.begin(), a.end(), other) != a.end();
  }
};

struct Fold {
  int v, u, w, merged;
};

struct Action {
  enum Kind { Take, Folded } kind;
  int v;
  Fold fold;
};

class SparseSolver {
 public:
  explicit SparseSolver(SparseStats* stats) : stats_(stats) {}

  // Returns an MIS of the live part of `k` (ids in k's id space).
  std::vector<int> solve(Kernel k) {
    std::vector<Action> log;
    reduce(k, log);
    std::vector<int> sol;
    if (k.live > 0) {
      auto comps = components(k);
      if (comps.size() > 1) {
        for (const auto& comp : comps) {
          auto part = solve_subset(k, comp);
          sol.insert(sol.end(), part.begin(), part.end());
        }
      } else {
        sol = branch(k);
      }
    }
    unwind(log, sol);
    return sol;
  }

 private:
  SparseStats* stats_;

  void reduce(Kernel& k, std::vector<Action>& log) {
    std::vector<int> queue;
    for (int v = 0; v < static_cast<int>(k.adj.size()); ++v) {
      if (k.alive[v]) queue.push_back(v);
    }
    auto push_nbrs = [&](int v) {
      for (int w : k.adj[v]) queue.push_back(w);
    };
    while (!queue.empty()) {
      int v = queue.back();
      queue.pop_back();
      if (!k.alive[v]) continue;
      int deg = static_cast<int>(k.adj[v].size());
      if (deg == 0) {
        log.push_back({Action::Take, v, {}});
        k.remove(v);
      } else if (deg == 1) {
        int u = k.adj[v][0];
        log.push_back({Action::Take, v, {}});
        push_nbrs(u);
        k.remove(u);
        k.remove(v);
      } else if (deg == 2) {
        int u = k.adj[v][0];
        int w = k.adj[v][1];
        if (k.adjacent(u, w)) {
          log.push_back({Action::Take, v, {}});
          push_nbrs(u);
          push_nbrs(w);
          k.remove(u);
          k.remove(w);
          k.remove(v);
        } else {
          std::vector<int> merged_nb;
          for (int x : k.adj[u]) {
            if (x != v) merged_nb.push_back(x);
          }
          for (int x : k.adj[w]) {
            if (x != v) merged_nb.push_back(x);
          }
          std::sort(merged_nb.begin(), merged_nb.end());
          merged_nb.erase(std::unique(merged_nb.begin(), merged_nb.end()), merged_nb.end());
          k.remove(u);
          k.remove(w);
          k.remove(v);
          int m = k.add_vertex();
          for (int x : merged_nb) {
            k.adj[m].push_back(x);
            k.adj[x].push_back(m);
          }
          log.push_back({Action::Folded, v, Fold{v, u, w, m}});
          if (stats_) ++stats_->folds;
          queue.push_back(m);
          for (int x : merged_nb) queue.push_back(x);
        }
      }
    }
  }

  static void unwind(const std::vector<Action>& log, std::vector<int>& sol) {
    for (auto it = log.rbegin(); it != log.rend(); ++it) {
      if (it->kind == Action::Take) {
        sol.push_back(it->v);
      } else {
        auto pos = std::find(sol.begin(), sol.end(), it->fold.merged);
        if (pos != sol.end()) {
          sol.erase(pos);
          sol.push_back(it->fold.u);
          sol.push_back(it->fold.w);
        } else {
          sol.push_back(it->fold.v);
        }
      }
    }
  }

  static std::vector<std::vector<int>> components(const Kernel& k) {
    std::vector<int> comp(k.adj.size(), -1);
    std::vector<std::vector<int>> out;
    for (int s = 0; s < static_cast<int>(k.adj.size()); ++s) {
      if (!k.alive[s] || comp[s] >= 0) continue;
      out.emplace_back();
      std::vector<int> stack{s};
      comp[s] = static_cast<int>(out.size()) - 1;
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        out.back().push_back(v);
        for (int w : k.adj[v]) {
          if (comp[w] < 0) {
            comp[w] = comp[s];
            stack.push_back(w);
          }
        }
      }
    }
    return out;
  }

  std::vector<int> solve_subset(const Kernel& k, const std::vector<int>& verts) {
    std::vector<int> local(k.adj.size(), -1);
    for (int i = 0; i < static_cast<int>(verts.size()); ++i) local[verts[i]] = i;
    Kernel sub;
    for (std::size_t i = 0; i < verts.size(); ++i) sub.add_vertex();
    for (int i = 0; i < static_cast<int>(verts.size()); ++i) {
      for (int w : k.adj[verts[i]]) sub.adj[i].push_back(local[w]);
    }
    auto part = solve(std::move(sub));
    std::vector<int> out;
    for (int x : part) out.push_back(verts[x]);
    return out;
  }

  std::vector<int> branch(const Kernel& k) {
    if (stats_) ++stats_->branches;
    int v = -1;
    for (int x = 0; x < static_cast<int>(k.adj.size()); ++x) {
      if (k.alive[x] && (v < 0 || k.adj[x].size() > k.adj[v].size())) v = x;
    }
    Kernel with = k;
    std::vector<int> nb = with.adj[v];
    for (int w : nb) with.remove(w);
    with.remove(v);
    auto a = solve(std::move(with));
    a.push_back(v);
    Kernel without = k;
    without.remove(v);
    auto b = solve(std::move(without));
    return b.size() > a.size() ? b : a;
  }
};

}  // namespace

MISResult mis_sparse(const IntersectionGraph& g, SparseStats* stats) {
  Kernel k;
  for (int v = 0; v < g.size(); ++v) k.add_vertex();
  for (int v = 0; v < g.size(); ++v) k.adj[v] = g.neighbors(v);
  SparseSolver solver(stats);
  auto sol = solver.solve(std::move(k));
  MISResult res;
  for (int v : sol) {
    if (v < g.size()) res.witness.push_back(v);
  }
  std::sort(res.witness.begin(), res.witness.end());
  res.size = static_cast<int>(res.witness.size());
  return res;
}

int even_subdivision_target(int mis_of_g, int double_subdivisions) {
  if (mis_of_g < 0 || double_subdivisions < 0) throw std::invalid_argument("negative count");
  return mis_of_g + double_subdivisions;
}

bool is_independent_set(const IntersectionGraph& g, const std::vector<int>& set) {
  std::vector<char> in(g.size(), 0);
  for (int v : set) {
    if (v < 0 || v >= g.size() || in[v]) return false;
    in[v] = 1;
  }
  for (int v : set) {
    for (int w : g.neighbors(v)) {
      if (in[w]) return false;
    }
  }
  return true;
}

std::string to_edge_list(const IntersectionGraph& g) {
  std::ostringstream os;
  auto e = g.edges();
  os << g.size() << ' ' << e.size() << '\n';
  for (auto [u, v] : e) os << u << ' ' << v << '\n';
  return os.str();
}

IntersectionGraph parse_edge_list(const std::string& text) {
  std::istringstream is(text);
  int n = 0;
  std::size_t m = 0;
  if (!(is >> n >> m) || n < 0) throw std::invalid_argument("bad edge-list header");
  std::vector<std::pair<int, int>> edges(m);
  for (auto& [u, v] : edges) {
    if (!(is >> u >> v)) throw std::invalid_argument("truncated edge list");
  }
  return IntersectionGraph::from_edges(n, edges);
}

SubdivisionCheck verify_even_subdivision(const IntersectionGraph& big, const IntersectionGraph& small,
                                         const std::vector<int>& branch,
                                         const std::vector<std::vector<int>>& paths) {
  SubdivisionCheck res;
  auto fail = [&](std::string why, int v) {
    res.ok = false;
    res.reason = std::move(why);
    res.vertex = v;
    return res;
  };
  if (static_cast<int>(branch.size()) != small.size()) return fail("branch map size differs", -1);
  std::vector<int> owner(big.size(), -1);  // -2: branch vertex, >= 0: path index
  for (int v : branch) {
    if (v < 0 || v >= big.size()) return fail("branch vertex out of range", v);
    if (owner[v] != -1) return fail("branch map not injective", v);
    owner[v] = -2;
  }
  const auto edges = small.edges();
  if (paths.size() != edges.size()) return fail("path count differs from edge count", -1);
  std::size_t edge_total = 0;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& p = paths[e];
    if (p.size() < 2) return fail("path too short", -1);
    const int a = branch[edges[e].first], b = branch[edges[e].second];
    if (!((p.front() == a && p.back() == b) || (p.front() == b && p.back() == a))) {
      return fail("path endpoints differ from edge", p.front());
    }
    if ((p.size() - 1) % 2 == 0) return fail("path has even length", p.front());
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] < 0 || p[i] >= big.size()) return fail("path vertex out of range", p[i]);
      if (i > 0 && !big.adjacent(p[i - 1], p[i])) return fail("path step is not an edge", p[i]);
      if (i == 0 || i + 1 == p.size()) continue;
      if (owner[p[i]] != -1) return fail("interior vertex reused", p[i]);
      owner[p[i]] = static_cast<int>(e);
      if (big.degree(p[i]) != 2) return fail("interior vertex degree is not 2", p[i]);
    }
    edge_total += p.size() - 1;
  }
  for (int v = 0; v < big.size(); ++v) {
    if (owner[v] == -1) return fail("vertex not covered", v);
  }
  if (edge_total != big.edge_count()) return fail("edge count differs", -1);
  return res;
}

}  // namespace stabpack

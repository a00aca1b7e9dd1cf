#include "stabpack/sat.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "stabpack/rng.hpp"

namespace stabpack {

void CNF33::validate() const {
  if (num_vars < 0) throw SatError("negative variable count");
  std::vector<int> occ(num_vars + 1, 0);
  for (const auto& c : clauses) {
    if (c.empty() || c.size() > 3) throw SatError("clause size must be 1..3");
    for (int l : c) {
      if (l == 0 || std::abs(l) > num_vars) throw SatError("literal out of range");
      if (++occ[std::abs(l)] > 3) throw SatError("variable " + std::to_string(std::abs(l)) + " occurs more than 3 times");
    }
  }
}

CNF33 parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  CNF33 phi;
  int declared = -1;
  bool header = false;
  std::vector<int> cur;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok == "c" || tok[0] == 'c' || tok == "%") continue;
    if (tok == "p") {
      std::string fmt;
      if (header || !(ls >> fmt >> phi.num_vars >> declared) || fmt != "cnf") throw SatError("bad DIMACS header");
      header = true;
      continue;
    }
    if (!header) throw SatError("clause before DIMACS header");
    do {
      int lit;
      try {
        std::size_t used = 0;
        lit = std::stoi(tok, &used);
        if (used != tok.size()) throw SatError("bad literal '" + tok + "'");
      } catch (const std::logic_error&) {
        throw SatError("bad literal '" + tok + "'");
      }
      if (lit == 0) {
        phi.clauses.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(lit);
      }
    } while (ls >> tok);
  }
  if (!header) throw SatError("missing DIMACS header");
  if (!cur.empty()) phi.clauses.push_back(cur);
  if (declared >= 0 && static_cast<int>(phi.clauses.size()) != declared) throw SatError("clause count differs from header");
  phi.validate();
  return phi;
}

std::string to_dimacs(const CNF33& phi) {
  std::ostringstream out;
  out << "p cnf " << phi.num_vars << ' ' << phi.clauses.size() << '\n';
  for (const auto& c : phi.clauses) {
    for (int l : c) out << l << ' ';
    out << "0\n";
  }
  return out.str();
}

Preprocessed preprocess(const CNF33& phi) {
  phi.validate();
  Preprocessed res;
  res.formula.num_vars = phi.num_vars;
  std::vector<std::vector<int>> cls;
  for (auto c : phi.clauses) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    bool taut = false;
    for (int l : c) taut |= std::binary_search(c.begin(), c.end(), -l);
    if (!taut) cls.push_back(std::move(c));
  }
  for (;;) {
    auto unit = std::find_if(cls.begin(), cls.end(), [](const auto& c) { return c.size() <= 1; });
    if (unit == cls.end()) break;
    if (unit->empty()) {
      res.verdict = Verdict::Unsat;
      return res;
    }
    const int l = unit->front();
    std::vector<std::vector<int>> next;
    for (auto& c : cls) {
      if (std::find(c.begin(), c.end(), l) != c.end()) continue;
      c.erase(std::remove(c.begin(), c.end(), -l), c.end());
      next.push_back(std::move(c));
    }
    cls = std::move(next);
  }
  if (cls.empty()) {
    res.verdict = Verdict::Sat;
    return res;
  }
  // Keep the original clause order when nothing was propagated.
  bool unchanged = cls.size() == phi.clauses.size();
  for (std::size_t i = 0; unchanged && i < cls.size(); ++i) {
    auto c = phi.clauses[i];
    std::sort(c.begin(), c.end());
    unchanged = c == cls[i];
  }
  res.formula.clauses = unchanged ? phi.clauses : cls;
  return res;
}

CNF33 random_cnf33(int num_vars, std::uint64_t seed, double three_fraction) {
  Rng rng = make_stream(seed, "cnf33");
  CNF33 phi;
  phi.num_vars = num_vars;
  std::vector<int> pool;
  for (int v = 1; v <= num_vars; ++v) {
    const int occ = 1 + static_cast<int>(rng() % 3 == 0 ? rng() % 2 : 2);
    for (int i = 0; i < occ; ++i) pool.push_back(rng() % 2 ? v : -v);
  }
  std::shuffle(pool.begin(), pool.end(), rng);
  std::vector<int> cur;
  auto flush = [&] {
    if (cur.size() >= 2) phi.clauses.push_back(cur);
    cur.clear();
  };
  for (int l : pool) {
    const bool clash = std::any_of(cur.begin(), cur.end(), [&](int x) { return std::abs(x) == std::abs(l); });
    if (clash) flush();
    cur.push_back(l);
    const std::size_t want = std::uniform_real_distribution<double>(0, 1)(rng) < three_fraction ? 3 : 2;
    if (cur.size() >= want) flush();
  }
  flush();
  return phi;
}

CNF33 planted_unsat_cnf33(int num_vars, std::uint64_t seed, double three_fraction) {
  if (num_vars < 4) throw SatError("planted core needs at least 4 variables");
  Rng rng = make_stream(seed, "cnf33-planted");
  const int c = 1 + static_cast<int>(rng() % (num_vars - 3));
  // Core variables 1 (x), 2..c+2 (y0..yc), c+3 (z); the rest is random.
  std::vector<std::vector<int>> core{{1, 2}, {-1, 2}};
  for (int i = 0; i < c; ++i) core.push_back({-(2 + i), 3 + i});
  core.push_back({-(2 + c), 3 + c});
  core.push_back({-(2 + c), -(3 + c)});
  const int used = c + 3;
  CNF33 phi;
  phi.num_vars = num_vars;
  phi.clauses = core;
  if (num_vars > used) {
    for (auto cl : random_cnf33(num_vars - used, seed, three_fraction).clauses) {
      for (int& l : cl) l += l > 0 ? used : -used;
      phi.clauses.push_back(cl);
    }
  }
  std::vector<int> rename(num_vars);
  std::iota(rename.begin(), rename.end(), 1);
  std::shuffle(rename.begin(), rename.end(), rng);
  std::vector<int> flip(num_vars + 1);
  for (int v = 1; v <= num_vars; ++v) flip[v] = rng() % 2 ? -1 : 1;
  for (auto& cl : phi.clauses) {
    for (int& l : cl) l = (l > 0 ? 1 : -1) * flip[std::abs(l)] * rename[std::abs(l) - 1];
  }
  std::shuffle(phi.clauses.begin(), phi.clauses.end(), rng);
  return phi;
}

bool sat_bruteforce(const CNF33& phi, int cap) {
  phi.validate();
  if (phi.num_vars > cap) throw SatError("sat_bruteforce: variable cap exceeded");
  for (std::uint32_t m = 0; m < (1u << phi.num_vars); ++m) {
    bool all = true;
    for (const auto& c : phi.clauses) {
      bool sat = false;
      for (int l : c) sat |= ((m >> (std::abs(l) - 1)) & 1) == (l > 0 ? 1u : 0u);
      if (!sat) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

namespace {

bool dpll(const std::vector<std::vector<int>>& cls, std::vector<int>& val) {
  // Unit propagation with an undo trail.
  std::vector<int> trail;
  auto undo = [&] {
    for (int v : trail) val[v] = 0;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& c : cls) {
      int free_lit = 0, free_count = 0;
      bool sat = false;
      for (int l : c) {
        const int v = val[std::abs(l)];
        if (v == 0) {
          ++free_count;
          free_lit = l;
        } else if ((v > 0) == (l > 0)) {
          sat = true;
        }
      }
      if (sat) continue;
      if (free_count == 0) {
        undo();
        return false;
      }
      if (free_count == 1) {
        val[std::abs(free_lit)] = free_lit > 0 ? 1 : -1;
        trail.push_back(std::abs(free_lit));
        changed = true;
      }
    }
  }
  int pick = 0;
  for (const auto& c : cls) {
    bool sat = false;
    int cand = 0;
    for (int l : c) {
      const int v = val[std::abs(l)];
      if (v != 0 && (v > 0) == (l > 0)) sat = true;
      if (v == 0 && cand == 0) cand = std::abs(l);
    }
    if (!sat && cand) {
      pick = cand;
      break;
    }
  }
  if (pick == 0) return true;
  for (int s : {1, -1}) {
    val[pick] = s;
    if (dpll(cls, val)) return true;
  }
  val[pick] = 0;
  undo();
  return false;
}

}  // namespace

bool sat_dpll(const CNF33& phi) {
  phi.validate();
  std::vector<int> val(phi.num_vars + 1, 0);
  return dpll(phi.clauses, val);
}

GadgetGraph build_gadget_graph(const CNF33& phi) {
  phi.validate();
  GadgetGraph gg;
  const int nu = phi.num_vars;
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v < nu; ++v) {
    gg.cycles.push_back({});
    for (int i = 0; i < 6; ++i) {
      gg.cycles[v].push_back(6 * v + i);
      edges.emplace_back(6 * v + i, 6 * v + (i + 1) % 6);
    }
  }
  int next = 6 * nu;
  // Positive literals take v2, v4, v6 and negative ones v1, v3, v5.
  std::vector<int> pos_used(nu, 0), neg_used(nu, 0);
  for (int j = 0; j < static_cast<int>(phi.clauses.size()); ++j) {
    const auto& c = phi.clauses[j];
    if (c.size() < 2) throw SatError("gadget graph needs clauses of size 2 or 3; preprocess first");
    std::vector<int> cv;
    for (std::size_t r = 0; r < c.size(); ++r) cv.push_back(next++);
    for (std::size_t a = 0; a < cv.size(); ++a) {
      for (std::size_t b = a + 1; b < cv.size(); ++b) edges.emplace_back(cv[a], cv[b]);
    }
    for (int r = 0; r < static_cast<int>(c.size()); ++r) {
      const int v = std::abs(c[r]) - 1;
      const int pos = c[r] > 0 ? 1 + 2 * pos_used[v]++ : 2 * neg_used[v]++;
      const int cyc = gg.cycles[v][pos];
      edges.emplace_back(cyc, cv[r]);
      gg.connectors.push_back({v, pos, j, r, cyc, cv[r]});
    }
    gg.clauses.push_back(std::move(cv));
  }
  gg.graph = IntersectionGraph::from_edges(next, edges);
  return gg;
}

namespace {

using Tuple = std::vector<int>;

// All tuples of [n]^m in row-major order.
std::vector<Tuple> all_tuples(int n, int m) {
  std::vector<Tuple> out;
  Tuple cur(m, 0);
  if (n <= 0) return out;
  for (;;) {
    out.push_back(cur);
    int t = m - 1;
    while (t >= 0 && ++cur[t] == n) cur[t--] = 0;
    if (t < 0) break;
  }
  return out;
}

struct VarSlot {
  int k;
  std::vector<Tuple> ring;  // six terminals in cycle order
};

struct ClauseSlot {
  int q;
  Tuple x;  // terminal of u and v; w sits one terminal further along axis 0
};

std::vector<VarSlot> var_slots(int n, int d, int t) {
  std::vector<VarSlot> out;
  for (int k = 0; k < t / 2; ++k) {
    for (const auto& x : all_tuples(n, d - 1)) {
      if (x[0] % 3 != 0 || x[0] + 2 >= n || x[1] % 2 != 0 || x[1] + 1 >= n) continue;
      VarSlot s{k, {}};
      const int off[6][2] = {{0, 0}, {1, 0}, {2, 0}, {2, 1}, {1, 1}, {0, 1}};
      for (const auto& o : off) {
        Tuple y = x;
        y[0] += o[0];
        y[1] += o[1];
        s.ring.push_back(y);
      }
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<ClauseSlot> clause_slots(int n, int d, int t) {
  std::vector<ClauseSlot> out;
  for (int q = 0; q < t / 2; ++q) {
    for (const auto& x : all_tuples(n, d - 1)) {
      if (x[0] % 2 == 0 && x[0] + 1 < n) out.push_back({q, x});
    }
  }
  return out;
}

Vertex cell_vertex(const Tuple& cell, int z, int index) {
  Vertex v = cell;
  v.push_back(z);
  v.push_back(index);
  return v;
}

Tuple terminal_cell(const Tuple& x) {
  Tuple c;
  for (int v : x) c.push_back(2 * v);
  return c;
}

}  // namespace

BlownCubeSubgraph embed_in_blown_cube(const GadgetGraph& gg, const EmbedOptions& opt) {
  const int d = opt.d, t = opt.t;
  if (t < 2) throw SatError("blow-up t must be at least 2");
  if (d < 3) throw SatError("embedding needs d >= 3");
  const int nu = static_cast<int>(gg.cycles.size()), gamma = static_cast<int>(gg.clauses.size());
  int n = 1;
  while (static_cast<int>(var_slots(n, d, t).size()) < nu || static_cast<int>(clause_slots(n, d, t).size()) < gamma) {
    ++n;
    if (n > 4096) throw SatError("capacity infeasible at requested t");
  }
  const auto vslots = var_slots(n, d, t);
  const auto cslots = clause_slots(n, d, t);
  BlownCubeSubgraph out;
  out.t = t;
  out.d = d;
  out.terminals = n;
  out.height = blown_cube_min_height(n, d);
  out.s = std::max(2 * n, out.height);
  const int top = out.height - 1;

  // Clause vertex positions: (terminal, index) for u, v, w.
  auto clause_point = [&](int j, int slot) {
    const auto& cs = cslots[j];
    const bool three = gg.clauses[j].size() == 3;
    const int role = three ? slot : (slot == 0 ? 0 : 2);
    Tuple x = cs.x;
    int idx = 2 * cs.q + (role == 1 ? 1 : 0);
    if (role == 2) x[0] += 1;
    return std::make_pair(x, idx);
  };

  std::vector<std::pair<Vertex, Vertex>> matching;
  for (const auto& c : gg.connectors) {
    Vertex a = vslots[c.var].ring[c.cycle_pos];
    a.push_back(2 * vslots[c.var].k + 1);
    auto [x, idx] = clause_point(c.clause, c.slot);
    Vertex b = x;
    b.push_back(idx);
    matching.emplace_back(std::move(a), std::move(b));
  }
  PathSet wires;
  if (!matching.empty()) wires = blown_cube_wiring(BlownCube{n, t, d, out.height}, matching);

  std::map<Vertex, int> ids;
  auto vid = [&](const Vertex& v) {
    auto [it, fresh] = ids.emplace(v, static_cast<int>(out.vertices.size()));
    if (fresh) out.vertices.push_back(v);
    return it->second;
  };
  std::map<std::pair<int, int>, std::vector<int>> edge_path;
  auto record = [&](int a, int b, std::vector<int> path) {
    if (a > b) {
      std::swap(a, b);
      std::reverse(path.begin(), path.end());
    }
    edge_path[{a, b}] = std::move(path);
  };

  out.branch.assign(gg.graph.size(), -1);
  for (int v = 0; v < nu; ++v) {
    const auto& vs = vslots[v];
    for (int i = 0; i < 6; ++i) out.branch[gg.cycles[v][i]] = vid(cell_vertex(terminal_cell(vs.ring[i]), 0, 2 * vs.k + 1));
  }
  for (int j = 0; j < gamma; ++j) {
    for (int r = 0; r < static_cast<int>(gg.clauses[j].size()); ++r) {
      auto [x, idx] = clause_point(j, r);
      out.branch[gg.clauses[j][r]] = vid(cell_vertex(terminal_cell(x), top, idx));
    }
  }
  // Wires, with a parity edge into the partner index when the wire is even.
  for (std::size_t w = 0; w < gg.connectors.size(); ++w) {
    const auto& c = gg.connectors[w];
    std::vector<int> path;
    for (const auto& x : wires.paths[w]) path.push_back(vid(x));
    if ((path.size() - 1) % 2 == 0) {
      Vertex partner = out.vertices[path.front()];
      partner.back() -= 1;
      path.insert(path.begin(), vid(partner));
      out.branch[c.cycle_vertex] = path.front();
    }
    record(c.cycle_vertex, c.clause_vertex, std::move(path));
  }
  // Cycle edges detour through the odd cell between two terminals.
  for (int v = 0; v < nu; ++v) {
    const auto& vs = vslots[v];
    for (int i = 0; i < 6; ++i) {
      const int j = (i + 1) % 6;
      Tuple mid = terminal_cell(vs.ring[i]);
      const Tuple far = terminal_cell(vs.ring[j]);
      for (std::size_t a = 0; a < mid.size(); ++a) mid[a] = (mid[a] + far[a]) / 2;
      record(gg.cycles[v][i], gg.cycles[v][j],
             {out.branch[gg.cycles[v][i]], vid(cell_vertex(mid, 0, 2 * vs.k + 1)), vid(cell_vertex(mid, 0, 2 * vs.k)),
              out.branch[gg.cycles[v][j]]});
    }
  }
  // Clause gadgets on the top layer.
  for (int j = 0; j < gamma; ++j) {
    const auto& cs = cslots[j];
    const auto& cv = gg.clauses[j];
    Tuple x = terminal_cell(cs.x);
    const int q0 = 2 * cs.q, q1 = q0 + 1;
    Tuple m = x, e1 = x, e01 = x, e21 = x;
    m[0] += 1;
    e1[1] += 1;
    e01[0] += 1;
    e01[1] += 1;
    e21[0] += 2;
    e21[1] += 1;
    const int wv = cv.back();
    record(cv[0], wv, {out.branch[cv[0]], vid(cell_vertex(m, top, q0)), vid(cell_vertex(m, top, q1)), out.branch[wv]});
    if (cv.size() == 3) {
      record(cv[0], cv[1], {out.branch[cv[0]], out.branch[cv[1]]});
      record(cv[1], wv, {out.branch[cv[1]], vid(cell_vertex(e1, top, q0)), vid(cell_vertex(e1, top, q1)),
                         vid(cell_vertex(e01, top, q0)), vid(cell_vertex(e21, top, q0)), out.branch[wv]});
    }
  }

  std::vector<std::pair<int, int>> edges;
  for (const auto& [key, path] : edge_path) {
    for (std::size_t i = 1; i < path.size(); ++i) edges.emplace_back(path[i - 1], path[i]);
  }
  out.graph = IntersectionGraph::from_edges(static_cast<int>(out.vertices.size()), edges);
  for (const auto& e : gg.graph.edges()) {
    auto it = edge_path.find(e);
    if (it == edge_path.end()) throw std::logic_error("gadget edge without realization");
    out.paths.push_back(it->second);
  }
  out.p = (static_cast<int>(out.vertices.size()) - gg.graph.size()) / 2;
  out.target = gg.target() + out.p;
  return out;
}

CellCheck verify_cell_property(const BlownCubeSubgraph& g) {
  CellCheck res;
  auto fail = [&](std::string why, int v) {
    res.ok = false;
    res.reason = std::move(why);
    res.vertex = v;
    return res;
  };
  auto cell = [&](int v) { return Vertex(g.vertices[v].begin(), g.vertices[v].begin() + g.d); };
  for (int v = 0; v < g.graph.size(); ++v) {
    const auto& x = g.vertices[v];
    if (static_cast<int>(x.size()) != g.d + 1) return fail("vertex has wrong arity", v);
    for (int a = 0; a < g.d; ++a) {
      if (x[a] < 0 || x[a] >= g.s) return fail("vertex outside host", v);
    }
    if (x.back() < 0 || x.back() >= g.t) return fail("intra-cell index outside host", v);
    if (g.graph.degree(v) > 3) return fail("degree above three", v);
    std::set<Vertex> cells;
    for (int u : g.graph.neighbors(v)) {
      if (!cells.insert(cell(u)).second) return fail("two neighbours share a cell", v);
      int l1 = 0;
      for (int a = 0; a < g.d; ++a) l1 += std::abs(x[a] - g.vertices[u][a]);
      if (l1 > 1 || (l1 == 0 && x.back() == g.vertices[u].back())) return fail("edge not in blown-up cube", v);
    }
  }
  return res;
}

SatPipeline reduce_sat_to_blown_cube(const CNF33& phi, const EmbedOptions& opt) {
  SatPipeline res;
  auto pre = preprocess(phi);
  res.verdict = pre.verdict;
  if (pre.verdict != Verdict::Open) return res;
  res.gadget = build_gadget_graph(pre.formula);
  res.embedded = embed_in_blown_cube(res.gadget, opt);
  return res;
}

}  // namespace stabpack

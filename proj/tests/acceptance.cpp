// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "stabpack/boxes.hpp"
#include "stabpack/instance_io.hpp"
#include "stabpack/isgraph.hpp"
#include "stabpack/param.hpp"
#include "stabpack/sat.hpp"
#include "stabpack/separator.hpp"
#include "stabpack/stabbing.hpp"
#include "stabpack/wiring.hpp"

using namespace stabpack;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::vector<int> iota_vec(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

std::vector<int> point(int flat, int n, int arity) {
  std::vector<int> p(arity);
  for (int t = arity - 1; t >= 0; --t) {
    p[t] = flat % n;
    flat /= n;
  }
  return p;
}

GridPermutation random_perm(const std::vector<int>& shape, std::mt19937_64& rng) {
  auto p = GridPermutation::identity(shape);
  std::shuffle(p.map.begin(), p.map.end(), rng);
  return p;
}

// Mixed unit and long boxes (long side 2 or 4, random axis) at denominator
// 4, packed so the expected total volume is about 1.5 times the region.
std::vector<AxisBox> mixed_instance(int n, int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Coord L = seed % 2 ? 2 : 4, den = 4;
  const double vol = n * (1.0 + L) / 2;
  const Coord side = std::max<Coord>(2, static_cast<Coord>(std::ceil(std::pow(vol / 1.5, 1.0 / d))));
  std::uniform_int_distribution<Coord> pos(0, side * den - 1);
  std::vector<AxisBox> out;
  for (int k = 0; k < n; ++k) {
    const int axis = rng() % 2 ? static_cast<int>(rng() % d) : -1;
    std::vector<Coord> lo(d), hi(d);
    for (int t = 0; t < d; ++t) {
      lo[t] = pos(rng);
      hi[t] = lo[t] + (t == axis ? L : 1) * den;
    }
    out.push_back(AxisBox::make(lo, hi, den));
  }
  return out;
}

Outcome separator_vs_brute() {
  Outcome o;
  const auto t0 = Clock::now();
  int runs = 0;
  std::size_t edges = 0;
  for (std::uint64_t seed = 1; seed <= 220; ++seed) {
    const int d = 2 + static_cast<int>(seed % 2);
    const int n = 10 + static_cast<int>(seed % 9);  // 10..18
    const auto objs = mixed_instance(n, d, seed);
    const auto g = build_intersection_graph(objs);
    edges += g.edge_count();
    const auto got = solve_mis_separator(objs);
    const int want = mis_bruteforce(g).size;
    if (got.size != want) o.fail(fmt::format("seed {}: separator {} vs brute {}", seed, got.size, want));
    if (!is_independent_set(g, got.witness)) o.fail(fmt::format("seed {}: witness not independent", seed));
    ++runs;
  }
  const double s = seconds_since(t0);
  if (s > 300) o.fail(fmt::format("took {:.1f}s", s));
  if (o.pass) o.detail = fmt::format("{} instances, {:.1f} edges on average, 0 disagreements, {:.1f}s", runs,
                                  double(edges) / runs, s);
  return o;
}

Outcome param_vs_brute() {
  Outcome o;
  const auto t0 = Clock::now();
  int runs = 0, decisions = 0;
  for (std::uint64_t seed = 1; seed <= 160; ++seed) {
    const int d = 2 + static_cast<int>(seed % 2);
    const int n = 4 + static_cast<int>(seed % 13);  // 4..16
    const auto objs = mixed_instance(n, d, 1000 + seed);
    const auto g = build_intersection_graph(objs);
    const int best = mis_bruteforce(g).size;
    for (int k = 0; k <= n; ++k) {
      const auto r = solve_mis_param(objs, k);
      ++decisions;
      if (r.accept != (best >= k)) o.fail(fmt::format("seed {} k {}: accept {} with optimum {}", seed, k, r.accept, best));
      if (r.accept && (!is_independent_set(g, r.witness) || static_cast<int>(r.witness.size()) < k)) {
        o.fail(fmt::format("seed {} k {}: bad witness", seed, k));
      }
    }
    ++runs;
  }
  const double s = seconds_since(t0);
  if (s > 600) o.fail(fmt::format("took {:.1f}s", s));
  if (o.pass) o.detail = fmt::format("{} instances, {} decisions, 0 disagreements, {:.1f}s", runs, decisions, s);
  return o;
}

Outcome decompositions() {
  Outcome o;
  auto rowcol = [&](const GridPermutation& pi) {
    const auto f = decompose_rowcol(pi);
    if (!(compose(f.b2, compose(f.a, f.b1)) == pi) || !f.b1.moves_only({1}) || !f.b2.moves_only({1}) ||
        !f.a.moves_only({0})) {
      o.fail("row-column factors do not recompose");
    }
  };
  std::vector<int> m = iota_vec(6);
  int exhaustive = 0;
  do {
    rowcol(GridPermutation{{3, 2}, m});
    ++exhaustive;
  } while (std::next_permutation(m.begin(), m.end()));
  std::mt19937_64 rng(8);
  for (int it = 0; it < 100; ++it) rowcol(random_perm({8, 8}, rng));
  const int axes[5] = {0, 1, 2, 1, 0};
  for (int it = 0; it < 100; ++it) {
    const auto pi = random_perm({4, 4, 4}, rng);
    const auto fs = decompose_axes(pi);
    if (fs.size() != 5) {
      o.fail(fmt::format("{} axis factors", fs.size()));
      continue;
    }
    GridPermutation acc = GridPermutation::identity(pi.shape);
    for (int j = 0; j < 5; ++j) {
      if (fs[j].axis != axes[j] || !fs[j].perm.moves_only({axes[j]})) o.fail("axis factor moves the wrong axis");
      acc = compose(fs[j].perm, acc);
    }
    if (!(acc == pi)) o.fail("axis factors do not recompose");
  }
  if (o.pass) o.detail = fmt::format("[3]x[2] exhaustive ({}), 100 on [8]x[8], 100 on [4]^3", exhaustive);
  return o;
}

Outcome wiring() {
  Outcome o;
  std::mt19937_64 rng(31);
  const int n = 4, d = 3, h = cube_wiring_min_height(n, d);
  for (int it = 0; it < 50; ++it) {
    std::vector<int> perm = iota_vec(n * n);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::pair<Vertex, Vertex>> match, ends;
    for (int i = 0; i < n * n; ++i) {
      match.push_back({point(i, n, 2), point(perm[i], n, 2)});
      ends.push_back({cube_terminal(point(i, n, 2), 0), cube_terminal(point(perm[i], n, 2), h - 1)});
    }
    const auto r = verify_disjoint_paths(cube_wiring(n, d, h, match), cube_host(n, d, h), ends);
    if (!r.ok) o.fail("cube wiring: " + r.reason);
  }
  for (int t : {2, 4}) {
    const BlownCube cube{n, t, d, blown_cube_min_height(n, d)};
    for (int it = 0; it < 50; ++it) {
      std::vector<int> perm = iota_vec(n * n * t);
      std::shuffle(perm.begin(), perm.end(), rng);
      std::vector<std::pair<Vertex, Vertex>> match, ends;
      for (int i = 0; i < n * n * t; ++i) {
        const auto p = point(i / t, n, 2), q = point(perm[i] / t, n, 2);
        Vertex a = p, b = q;
        a.push_back(i % t);
        b.push_back(perm[i] % t);
        match.push_back({a, b});
        ends.push_back({blown_terminal(p, 0, i % t), blown_terminal(q, cube.h - 1, perm[i] % t)});
      }
      const auto r = verify_disjoint_paths(blown_cube_wiring(cube, match), cube.host(), ends);
      if (!r.ok) o.fail(fmt::format("blown cube wiring t={}: {}", t, r.reason));
    }
  }
  if (o.pass) o.detail = "50 cube matchings, 50 blown-cube matchings for each t in {2,4}, 0 violations";
  return o;
}

std::vector<std::vector<int>> components(const IntersectionGraph& g) {
  std::vector<int> comp(g.size(), -1);
  std::vector<std::vector<int>> res;
  for (int s = 0; s < g.size(); ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = static_cast<int>(res.size());
    res.push_back({s});
    for (std::size_t q = 0; q < res.back().size(); ++q) {
      for (int w : g.neighbors(res.back()[q])) {
        if (comp[w] < 0) {
          comp[w] = comp[s];
          res.back().push_back(w);
        }
      }
    }
  }
  return res;
}

// Every component is a path on `len` vertices running from entry[x] to
// exit[target[x]]. Returns an empty string when the shape is right.
std::string path_shape(const GadgetInstance& g, int len, const std::vector<int>& target) {
  const auto ig = build_intersection_graph(g.boxes);
  const auto comps = components(ig);
  if (comps.size() != g.entry.size()) return fmt::format("{} components for {} wires", comps.size(), g.entry.size());
  std::vector<int> comp_of(ig.size());
  for (std::size_t c = 0; c < comps.size(); ++c) {
    for (int v : comps[c]) comp_of[v] = static_cast<int>(c);
  }
  for (std::size_t x = 0; x < g.entry.size(); ++x) {
    const int a = g.entry[x], b = g.exit[target[x]];
    const auto& c = comps[comp_of[a]];
    if (static_cast<int>(c.size()) != len) return fmt::format("wire {} has {} boxes", x, c.size());
    if (comp_of[b] != comp_of[a]) return fmt::format("wire {} ends at the wrong exit", x);
    int ends = 0;
    for (int v : c) {
      if (ig.degree(v) > 2) return fmt::format("wire {} branches", x);
      ends += ig.degree(v) == 1;
    }
    if (ends != (len > 1 ? 2 : 0) || (len > 1 && (ig.degree(a) != 1 || ig.degree(b) != 1))) {
      return fmt::format("wire {} is not a path between its terminals", x);
    }
  }
  return {};
}

Outcome gadget_shapes() {
  Outcome o;
  std::mt19937_64 rng(6);
  int checked = 0;
  auto expect = [&](const std::string& what, int L, const std::string& err) {
    ++checked;
    if (!err.empty()) o.fail(fmt::format("{} at L={}: {}", what, L, err));
  };
  for (int L : {16, 32}) {
    const int t = (L / 8) * (L / 8), m = L / 8;
    expect("parity fix 3", L, path_shape(make_parity_fix(3, L, 3, 0, {0, 0, 0}), 3, {0}));
    expect("parity fix 4", L, path_shape(make_parity_fix(4, L, 3, 0, {0, 0, 0}), 4, {0}));
    for (int len : {2, 3}) {
      expect("bridge", L, path_shape(make_bridge(basic_brick(L, 3, 2, {0, 0, 0}), len), len, iota_vec(t)));
    }
    expect("elbow", L, path_shape(make_elbow(L, 3, {0, 0, 0}), 2, iota_vec(t)));
    expect("adjustment", L, path_shape(make_adjustment(basic_brick(L, 3, 2, {0, 0, 0})), 2, iota_vec(t)));

    if (m == 4) {
      // pi_1 = (1, 4, 2, 3) in one-based terms on the first column.
      GridPermutation fig = GridPermutation::identity({m, m});
      const int pi1[4] = {0, 3, 1, 2};
      for (int i = 0; i < 4; ++i) fig.map[fig.flatten({i, 0})] = fig.flatten({pi1[i], 0});
      expect("parallel matching pi_1", L, path_shape(make_parallel_matching(L, fig, 0, {0, 0, 0}), 4, fig.map));
    }
    for (int rep = 0; rep < 10; ++rep) {
      const int axis = rep % 2;
      GridPermutation p = GridPermutation::identity({m, m});
      for (int c = 0; c < m; ++c) {
        std::vector<int> perm = iota_vec(m);
        std::shuffle(perm.begin(), perm.end(), rng);
        for (int i = 0; i < m; ++i) {
          std::vector<int> a(2), b(2);
          a[axis] = i;
          b[axis] = perm[i];
          a[1 - axis] = b[1 - axis] = c;
          p.map[p.flatten(a)] = p.flatten(b);
        }
      }
      expect("parallel matching", L, path_shape(make_parallel_matching(L, p, axis, {0, 0, 0}), 4, p.map));
    }

    const auto br = make_branching(L, 3, {0, 0, 0});
    const auto ig = build_intersection_graph(br.boxes);
    std::string err;
    if (static_cast<int>(components(ig).size()) != t || static_cast<int>(ig.edge_count()) != 3 * t) {
      err = "not a disjoint union of stars";
    }
    for (int s = 0; s < t && err.empty(); ++s) {
      if (ig.degree(br.entry[s]) != 3 || br.leaves[s].size() != 3) err = fmt::format("centre {} is not K1,3", s);
      for (int leaf : br.leaves[s]) {
        if (ig.degree(leaf) != 1 || !ig.adjacent(leaf, br.entry[s])) err = fmt::format("leaf of star {}", s);
      }
    }
    expect("branching", L, err);
  }
  if (o.pass) o.detail = fmt::format("{} gadgets at L in {{16,32}} match their shapes", checked);
  return o;
}

struct SatRun {
  Outcome equivalence, canonical;
};

SatRun sat_equivalence() {
  SatRun run;
  Outcome& o = run.equivalence;
  Outcome& c = run.canonical;
  const auto t0 = Clock::now();
  std::vector<CNF33> formulas{CNF33{3, {{1, -2, 3}}}};
  int open = 0, decided = 0, sat = 0, unsat = 0;
  for (std::uint64_t seed = 1; open < 60 && seed < 1000; ++seed) {
    const int nu = 3 + static_cast<int>(seed % 6);  // 3..8
    CNF33 phi = seed % 3 == 0 && nu >= 4 ? planted_unsat_cnf33(nu, seed) : random_cnf33(nu, seed, 0.25 + 0.25 * (seed % 2));
    if (preprocess(phi).verdict != Verdict::Open) {
      ++decided;
      continue;
    }
    formulas.push_back(phi);
    ++open;
  }
  for (const auto& phi : formulas) {
    const bool truth = sat_bruteforce(phi);
    (truth ? sat : unsat)++;
    const auto pipe = reduce_sat_to_blown_cube(phi, {4, 3});
    if (pipe.verdict != Verdict::Open) {
      o.fail("formula decided by preprocessing in the open set");
      continue;
    }
    const int mis = mis_sparse(pipe.embedded.graph).size;
    if ((mis == pipe.embedded.target) != truth) {
      o.fail(fmt::format("cube MIS {} target {} but satisfiable={}", mis, pipe.embedded.target, truth));
    }
  }
  // Full box instances: the single-clause formula and every fifth one after it.
  int boxed = 0, boxed_sat = 0;
  std::size_t boxes = 0;
  for (std::size_t i = 0; i < formulas.size(); i += 5) {
    const auto r = end_to_end_sat(formulas[i], 16);
    ++boxed;
    boxed_sat += r.satisfiable;
    boxes += r.boxes;
    if (!r.verified) o.fail(fmt::format("formula {}: box instance fails the subdivision check", i));
    if (!r.equivalent || (r.achieved == r.target) != r.satisfiable) {
      o.fail(fmt::format("formula {}: box MIS {} target {} satisfiable={}", i, r.achieved, r.target, r.satisfiable));
    }
    if (!r.canonical) c.fail(fmt::format("formula {}: a box is not {{1,1,16}} at denominator 16", i));
  }
  const double s = seconds_since(t0);
  if (boxed < 10) o.fail(fmt::format("only {} box instances", boxed));
  if (formulas.size() < 51) o.fail(fmt::format("only {} formulas", formulas.size()));
  if (s > 1800) o.fail(fmt::format("took {:.1f}s", s));
  if (o.pass) {
    o.detail = fmt::format("{} formulas ({} sat, {} unsat; {} more decided by preprocessing), {} through boxes "
                           "at L=16 ({} sat), {:.1f}s",
                           formulas.size(), sat, unsat, decided, boxed, boxed_sat, s);
  }
  if (c.pass) c.detail = fmt::format("{} boxes from {} instances, all canonical at denominator 16", boxes, boxed);
  return run;
}

Outcome stabbing_probe() {
  Outcome o;
  double worst = 0;
  std::string rows;
  for (int L : {8, 16, 32, 64}) {
    double top = 0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const auto boxes = gen_random_boxes(200, 3, BoxShape::Canonical, seed, L);
      top = std::max(top, estimate_stabbing_number(boxes).alpha / std::cbrt(double(L) * L));
    }
    worst = std::max(worst, top);
    rows += fmt::format(" L={}:{:.3f}", L, top);
  }
  if (worst > 8) o.fail(fmt::format("max alpha/L^(2/3) = {:.3f} >{}", worst, rows));
  if (o.pass) o.detail = fmt::format("max alpha/L^(2/3) = {:.3f} (bound 8);{}", worst, rows);
  return o;
}

Outcome separator_weight_probe() {
  Outcome o;
  const std::vector<int> ns{64, 96, 128, 192, 256, 384, 512};
  std::vector<double> x, y;
  for (int n : ns) {
    double sum = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      sum += top_level_separator(gen_random_boxes(n, 3, BoxShape::Unit, seed)).weight;
    }
    x.push_back(std::log(n));
    y.push_back(std::log(sum / 20));
  }
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  const double slope = sxy / sxx;
  const std::string note = slope <= 0.95 ? "below" : "above";
  if (slope > 0.85) o.fail(fmt::format("fitted exponent {:.3f} > 0.85 ({} the 0.95 report line)", slope, note));
  if (o.pass) o.detail = fmt::format("fitted exponent {:.3f} (bound 0.85; {} the 0.95 report line)", slope, note);
  return o;
}

Outcome guarded(const std::function<Outcome()>& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    Outcome o;
    o.fail(std::string("exception: ") + e.what());
    return o;
  }
}

}  // namespace

int main() {
  bool all = true;
  auto report = [&](int id, const char* name, const Outcome& o) {
    all = all && o.pass;
    std::printf("criterion %d %-20s %s  %s\n", id, name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  };
  report(1, "separator-vs-brute", guarded(separator_vs_brute));
  report(2, "param-vs-brute", guarded(param_vs_brute));
  report(3, "decompositions", guarded(decompositions));
  report(4, "wiring", guarded(wiring));
  report(5, "gadget-shapes", guarded(gadget_shapes));
  SatRun sat;
  try {
    sat = sat_equivalence();
  } catch (const std::exception& e) {
    sat.equivalence.fail(std::string("exception: ") + e.what());
    sat.canonical.fail("not run");
  }
  report(6, "sat-equivalence", sat.equivalence);
  report(7, "canonical-boxes", sat.canonical);
  report(8, "stabbing-scaling", guarded(stabbing_probe));
  report(9, "separator-weight", guarded(separator_weight_probe));
  return all ? 0 : 1;
}

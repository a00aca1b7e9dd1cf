#include "stabpack/separator.hpp"

#include <algorithm>
#include <cmath>

#include "stabpack/stabbing.hpp"

namespace stabpack {

Normalization normalization_for(const HyperCube& h0) {
  Normalization nz;
  for (int t = 0; t < h0.dim; ++t) nz.translation.push_back(h0.center(t));
  nz.scale = Rational(1) / h0.side_length();
  return nz;
}

HyperCube apply(const Normalization& nz, const HyperCube& h) {
  std::vector<Rational> c;
  for (int t = 0; t < h.dim; ++t) c.push_back((h.center(t) - nz.translation[t]) * nz.scale);
  return HyperCube::from_center(c, h.side_length() * nz.scale);
}

namespace {

bool contained_in(const AxisBox& b, const CoordVec& lo, Coord side) {
  for (int t = 0; t < b.dim; ++t) {
    if (b.lo[t] < lo[t] || b.hi[t] > lo[t] + side) return false;
  }
  return true;
}

}  // namespace

HyperCube min_enclosing_hypercube(const std::vector<AxisBox>& objects, int m) {
  const int n = static_cast<int>(objects.size());
  if (n == 0) throw std::invalid_argument("empty instance");
  m = std::max(m, 1);
  if (m > n) throw std::invalid_argument("m exceeds the number of objects");
  const int d = objects[0].dim;
  std::vector<Coord> sides;
  for (int t = 0; t < d; ++t) {
    for (const auto& a : objects) {
      for (const auto& b : objects) {
        if (a.hi[t] >= b.lo[t]) sides.push_back(a.hi[t] - b.lo[t]);
      }
    }
  }
  std::sort(sides.begin(), sides.end());
  sides.erase(std::unique(sides.begin(), sides.end()), sides.end());
  // Two-sided cube of half-width s around each anchor's lower corner.
  auto anchor_with = [&](Coord s) -> int {
    for (int o = 0; o < n; ++o) {
      CoordVec lo{};
      for (int t = 0; t < d; ++t) lo[t] = objects[o].lo[t] - s;
      int cnt = 0;
      for (const auto& b : objects) cnt += contained_in(b, lo, 2 * s);
      if (cnt >= m) return o;
    }
    return -1;
  };
  std::size_t a = 0, b = sides.size() - 1;
  while (a < b) {
    std::size_t mid = (a + b) / 2;
    if (anchor_with(sides[mid]) >= 0) {
      b = mid;
    } else {
      a = mid + 1;
    }
  }
  const Coord s = sides[a];
  HyperCube h;
  h.dim = d;
  h.den = objects[0].den;
  for (int o = 0; o < n; ++o) {
    int cnt = 0;
    for (const auto& box : objects) cnt += contained_in(box, objects[o].lo, s);
    if (cnt >= m) {
      h.lo = objects[o].lo;
      h.side = std::max<Coord>(s, 1);
      return h;
    }
  }
  const int o = anchor_with(s);
  CoordVec qlo{};
  for (int t = 0; t < d; ++t) qlo[t] = objects[o].lo[t] - s;
  CoordVec lo{}, hi{};
  bool first = true;
  for (const auto& box : objects) {
    if (!contained_in(box, qlo, 2 * s)) continue;
    for (int t = 0; t < d; ++t) {
      lo[t] = first ? box.lo[t] : std::min(lo[t], box.lo[t]);
      hi[t] = first ? box.hi[t] : std::max(hi[t], box.hi[t]);
    }
    first = false;
  }
  Coord side = 1;
  for (int t = 0; t < d; ++t) side = std::max(side, hi[t] - lo[t]);
  h.lo = lo;
  h.side = side;
  return h;
}

int ceil_root(int n, int d) {
  int k = 1;
  while (std::pow(static_cast<double>(k), d) < n) ++k;
  return k;
}

std::vector<HyperCube> candidate_hypercubes(const HyperCube& h0, int n) {
  const int k = ceil_root(std::max(n, 1), h0.dim);
  std::vector<HyperCube> out;
  for (int i = 1; i <= k; ++i) {
    HyperCube h;
    h.dim = h0.dim;
    h.den = h0.den * k;
    h.side = h0.side * (k + 2 * i);
    for (int t = 0; t < h0.dim; ++t) h.lo[t] = h0.lo[t] * k - h0.side * i;
    out.push_back(h);
  }
  return out;
}

SeparatorCandidate build_separator(const HyperCube& hi, const HyperCube& h_last, const Rational& h0_side,
                                   const std::vector<AxisBox>& objects, const std::vector<int>& ids) {
  SeparatorCandidate sep;
  sep.cube = hi;
  const Rational large = h0_side * h0_side / Rational(16);
  for (int id : ids) {
    const AxisBox& b = objects[id];
    if (classify_against_hypercube(b, hi) == CubeSide::Crossing) {
      sep.crossed.push_back(id);
    } else if (classify_against_hypercube(b, h_last) != CubeSide::Outside && diameter_sq(b) >= large) {
      sep.large_added.push_back(id);
    }
  }
  std::vector<int> members = sep.crossed;
  members.insert(members.end(), sep.large_added.begin(), sep.large_added.end());
  std::vector<AxisBox> sub;
  for (int id : members) sub.push_back(objects[id]);
  StabSet stab = stab_greedy(sub);
  std::vector<char> used(members.size(), 0);
  for (const auto& p : stab.points) {
    Clique c;
    c.point = p;
    for (std::size_t k = 0; k < members.size(); ++k) {
      if (!used[k] && box_contains_point(sub[k], p)) {
        used[k] = 1;
        c.members.push_back(members[k]);
      }
    }
    if (!c.members.empty()) {
      sep.weight += std::log2(static_cast<double>(c.members.size()) + 1.0);
      sep.cliques.push_back(std::move(c));
    }
  }
  return sep;
}

const SeparatorCandidate& pick_best_separator(const std::vector<SeparatorCandidate>& candidates) {
  if (candidates.empty()) throw std::invalid_argument("no separator candidates");
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    if (candidates[i].weight < candidates[best].weight - 1e-9) best = i;
  }
  return candidates[best];
}

long long enumerate_clique_sets(const SeparatorCandidate& sep, const IntersectionGraph& g,
                                const std::function<void(const std::vector<int>&)>& emit) {
  const std::size_t k = sep.cliques.size();
  std::vector<std::size_t> digit(k, 0);
  long long count = 0;
  std::vector<int> pick;
  while (true) {
    pick.clear();
    bool ok = true;
    for (std::size_t c = 0; c < k && ok; ++c) {
      if (digit[c] == 0) continue;
      int v = sep.cliques[c].members[digit[c] - 1];
      for (int u : pick) {
        if (g.adjacent(u, v)) {
          ok = false;
          break;
        }
      }
      pick.push_back(v);
    }
    if (ok) {
      ++count;
      emit(pick);
    }
    std::size_t c = 0;
    while (c < k && ++digit[c] > sep.cliques[c].members.size()) {
      digit[c] = 0;
      ++c;
    }
    if (c == k) break;
  }
  return count;
}

namespace {

class SeparatorSolver {
 public:
  SeparatorSolver(const std::vector<AxisBox>& objects, SeparatorStats& stats, const SeparatorOptions& opt)
      : objects_(objects), g_(build_intersection_graph(objects)), stats_(stats), opt_(opt),
        mark_(objects.size(), 0) {}

  std::vector<int> solve(const std::vector<int>& ids, int depth) {
    stats_.depth = std::max(stats_.depth, depth);
    const int n = static_cast<int>(ids.size());
    if (n == 0) return {};
    if (n <= opt_.base_threshold) return brute(ids);
    SeparatorCandidate sep = choose(ids);
    stats_.max_separator_weight = std::max(stats_.max_separator_weight, sep.weight);

    std::vector<int> in_sep;
    for (const auto& c : sep.cliques) in_sep.insert(in_sep.end(), c.members.begin(), c.members.end());
    std::sort(in_sep.begin(), in_sep.end());
    std::vector<int> interior, exterior;
    for (int id : ids) {
      if (std::binary_search(in_sep.begin(), in_sep.end(), id)) continue;
      if (classify_against_hypercube(objects_[id], sep.cube) == CubeSide::Inside) {
        interior.push_back(id);
      } else {
        exterior.push_back(id);
      }
    }
    const int d = objects_[ids[0]].dim;
    const double p = std::pow(6.0, d);
    const double bound = p / (p + 1.0) * n + static_cast<double>(in_sep.size());
    if (interior.size() > bound || exterior.size() > bound) ++stats_.balance_violations;
    if (static_cast<int>(interior.size()) >= n || static_cast<int>(exterior.size()) >= n) {
      return fallback(ids, depth);
    }

    std::vector<int> best;
    bool have = false;
    enumerate_clique_sets(sep, g_, [&](const std::vector<int>& pick) {
      ++stats_.candidates_tried;
      std::vector<int> in2 = without_neighbors(interior, pick);
      std::vector<int> ex2 = without_neighbors(exterior, pick);
      if (have && pick.size() + in2.size() + ex2.size() <= best.size()) return;
      std::vector<int> sol = pick;
      auto a = solve(in2, depth + 1);
      auto b = solve(ex2, depth + 1);
      sol.insert(sol.end(), a.begin(), a.end());
      sol.insert(sol.end(), b.begin(), b.end());
      if (!have || sol.size() > best.size()) {
        best = std::move(sol);
        have = true;
      }
    });
    return best;
  }

  SeparatorCandidate choose(const std::vector<int>& ids) {
    const int n = static_cast<int>(ids.size());
    const int d = objects_[ids[0]].dim;
    std::vector<AxisBox> sub;
    for (int id : ids) sub.push_back(objects_[id]);
    const long long p = static_cast<long long>(std::llround(std::pow(6.0, d)));
    const int m = static_cast<int>((n + p) / (p + 1));  // ceil(n / (6^d + 1))
    HyperCube h0 = min_enclosing_hypercube(sub, m);
    auto cubes = candidate_hypercubes(h0, n);
    std::vector<SeparatorCandidate> cands;
    for (std::size_t i = 0; i < cubes.size(); ++i) {
      cands.push_back(build_separator(cubes[i], cubes.back(), h0.side_length(), objects_, ids));
      cands.back().index = static_cast<int>(i) + 1;
    }
    return pick_best_separator(cands);
  }

 private:
  const std::vector<AxisBox>& objects_;
  IntersectionGraph g_;
  SeparatorStats& stats_;
  SeparatorOptions opt_;
  std::vector<char> mark_;

  std::vector<int> without_neighbors(const std::vector<int>& ids, const std::vector<int>& pick) {
    for (int v : pick) {
      for (int w : g_.neighbors(v)) mark_[w] = 1;
    }
    std::vector<int> out;
    for (int id : ids) {
      if (!mark_[id]) out.push_back(id);
    }
    for (int v : pick) {
      for (int w : g_.neighbors(v)) mark_[w] = 0;
    }
    return out;
  }

  std::vector<int> brute(const std::vector<int>& ids) {
    auto res = mis_bruteforce(g_.induced(ids));
    std::vector<int> out;
    for (int v : res.witness) out.push_back(ids[v]);
    return out;
  }

  // Include/exclude branching on a max-degree vertex when the split does not
  // shrink the instance.
  std::vector<int> fallback(const std::vector<int>& ids, int depth) {
    ++stats_.fallback_branches;
    if (static_cast<int>(ids.size()) <= kBruteForceCap) return brute(ids);
    IntersectionGraph sub = g_.induced(ids);
    int v = 0;
    for (int x = 1; x < sub.size(); ++x) {
      if (sub.degree(x) > sub.degree(v)) v = x;
    }
    std::vector<int> rest;
    for (int x = 0; x < sub.size(); ++x) {
      if (x != v) rest.push_back(ids[x]);
    }
    auto with = solve(without_neighbors(rest, {ids[v]}), depth + 1);
    with.push_back(ids[v]);
    auto without = solve(rest, depth + 1);
    return without.size() > with.size() ? without : with;
  }
};

}  // namespace

MISResult solve_mis_separator(const std::vector<AxisBox>& objects, SeparatorStats* stats,
                              const SeparatorOptions& opt) {
  SeparatorStats local;
  SeparatorStats& st = stats ? *stats : local;
  SeparatorSolver solver(objects, st, opt);
  std::vector<int> ids(objects.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
  MISResult res;
  res.witness = solver.solve(ids, 0);
  std::sort(res.witness.begin(), res.witness.end());
  res.size = static_cast<int>(res.witness.size());
  return res;
}

SeparatorCandidate top_level_separator(const std::vector<AxisBox>& objects) {
  SeparatorStats st;
  SeparatorSolver solver(objects, st, {});
  std::vector<int> ids(objects.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
  return solver.choose(ids);
}

}  // namespace stabpack

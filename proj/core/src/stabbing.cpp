#include "stabpack/stabbing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <unordered_map>

namespace stabpack {

StabCheck verify_stab(const std::vector<ScaledPoint>& points, const std::vector<AxisBox>& objects) {
  StabCheck res;
  for (int i = 0; i < static_cast<int>(objects.size()); ++i) {
    bool hit = false;
    for (const auto& p : points) {
      if (box_contains_point(objects[i], p)) {
        hit = true;
        break;
      }
    }
    if (!hit) res.unstabbed.push_back(i);
  }
  res.ok = res.unstabbed.empty();
  return res;
}

std::int64_t montecarlo_sample_count(double alpha, int d, std::size_t n) {
  double ln = n > 0 ? std::log(static_cast<double>(n)) : 0.0;
  return static_cast<std::int64_t>(std::floor(std::pow(4.0 * alpha, d) * (ln + 1.0)));
}

namespace {

std::vector<int> covering(const std::vector<AxisBox>& objects, const ScaledPoint& p) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(objects.size()); ++i) {
    if (box_contains_point(objects[i], p)) out.push_back(i);
  }
  return out;
}

// Grid of distinct lower-corner coordinates per axis.
struct CornerGrid {
  int dim = 0;
  Coord den = 1;
  std::vector<std::vector<Coord>> vals;
  std::vector<std::uint64_t> stride;

  explicit CornerGrid(const std::vector<AxisBox>& objects) {
    dim = objects.empty() ? 0 : objects[0].dim;
    den = objects.empty() ? 1 : objects[0].den;
    vals.resize(dim);
    stride.resize(dim);
    for (int t = 0; t < dim; ++t) {
      for (const auto& b : objects) vals[t].push_back(b.lo[t]);
      std::sort(vals[t].begin(), vals[t].end());
      vals[t].erase(std::unique(vals[t].begin(), vals[t].end()), vals[t].end());
    }
    std::uint64_t s = 1;
    for (int t = 0; t < dim; ++t) {
      stride[t] = s;
      s *= vals[t].size();
    }
  }

  // Calls f(key) for each grid point inside b.
  template <class F>
  void for_each_in(const AxisBox& b, F&& f) const {
    std::array<std::size_t, kMaxDim> from{}, to{}, idx{};
    for (int t = 0; t < dim; ++t) {
      from[t] = std::lower_bound(vals[t].begin(), vals[t].end(), b.lo[t]) - vals[t].begin();
      to[t] = std::upper_bound(vals[t].begin(), vals[t].end(), b.hi[t]) - vals[t].begin();
      if (from[t] >= to[t]) return;
      idx[t] = from[t];
    }
    while (true) {
      std::uint64_t key = 0;
      for (int t = 0; t < dim; ++t) key += idx[t] * stride[t];
      f(key);
      int t = 0;
      while (t < dim && ++idx[t] == to[t]) {
        idx[t] = from[t];
        ++t;
      }
      if (t == dim) return;
    }
  }

  std::uint64_t cells() const { return dim == 0 ? 0 : stride[dim - 1] * vals[dim - 1].size(); }

  ScaledPoint point(std::uint64_t key) const {
    ScaledPoint p;
    p.dim = dim;
    p.den = den;
    for (int t = dim - 1; t >= 0; --t) {
      p.coords[t] = vals[t][key / stride[t]];
      key %= stride[t];
    }
    return p;
  }
};

}  // namespace

MonteCarloResult stab_montecarlo(const std::vector<AxisBox>& objects, const Ball& region, double alpha,
                                 Rng& rng, int retry_limit) {
  MonteCarloResult res;
  const int d = static_cast<int>(region.center.size());
  res.k = montecarlo_sample_count(alpha, d, objects.size());
  const Coord den = (objects.empty() ? 1 : objects[0].den) * 1024;
  const double radius = std::sqrt(region.radius_sq.to_double());
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (res.attempts = 1; res.attempts <= retry_limit; ++res.attempts) {
    std::vector<ScaledPoint> pts;
    pts.reserve(res.k);
    for (std::int64_t s = 0; s < res.k; ++s) {
      std::vector<double> g(d);
      double norm = 0;
      for (auto& x : g) {
        x = normal(rng);
        norm += x * x;
      }
      norm = std::sqrt(norm);
      double rad = radius * std::pow(unif(rng), 1.0 / d);
      ScaledPoint p;
      p.dim = d;
      p.den = den;
      for (int t = 0; t < d; ++t) {
        double x = region.center[t].to_double() + (norm > 0 ? g[t] / norm * rad : 0.0);
        p.coords[t] = static_cast<Coord>(std::llround(x * static_cast<double>(den)));
      }
      pts.push_back(p);
    }
    auto check = verify_stab(pts, objects);
    if (check.ok) {
      res.success = true;
      for (const auto& p : pts) {
        res.set.points.push_back(p);
        res.set.covered.push_back(covering(objects, p));
      }
      return res;
    }
    res.unstabbed = std::move(check.unstabbed);
  }
  res.attempts = retry_limit;
  return res;
}

namespace {

// Lazy greedy: counts only fall, so a popped entry whose count went stale is
// pushed back with its current value. Picks the same point as a heap updated
// on every decrement.
template <class Counts>
StabSet greedy_on(const std::vector<AxisBox>& objects, const CornerGrid& grid, Counts& count) {
  StabSet out;
  std::vector<std::uint64_t> keys;
  for (const auto& b : objects) {
    grid.for_each_in(b, [&](std::uint64_t k) {
      if (count[k]++ == 0) keys.push_back(k);
    });
  }
  // Max count first, then smallest key.
  using Entry = std::pair<int, std::uint64_t>;
  auto cmp = [](const Entry& a, const Entry& b) {
    return a.first != b.first ? a.first < b.first : a.second > b.second;
  };
  std::vector<Entry> init;
  init.reserve(keys.size());
  for (auto k : keys) init.emplace_back(count[k], k);
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> heap(cmp, std::move(init));
  std::vector<char> stabbed(objects.size(), 0);
  std::size_t remaining = objects.size();
  while (remaining > 0) {
    auto [c, key] = heap.top();
    heap.pop();
    const int now = count[key];
    if (now != c) {
      if (now > 0) heap.emplace(now, key);
      continue;
    }
    ScaledPoint p = grid.point(key);
    for (int i = 0; i < static_cast<int>(objects.size()); ++i) {
      if (stabbed[i] || !box_contains_point(objects[i], p)) continue;
      stabbed[i] = 1;
      --remaining;
      grid.for_each_in(objects[i], [&](std::uint64_t k) { --count[k]; });
    }
    out.points.push_back(p);
    out.covered.push_back(covering(objects, p));
  }
  return out;
}

}  // namespace

StabSet stab_greedy(const std::vector<AxisBox>& objects) {
  if (objects.empty()) return {};
  CornerGrid grid(objects);
  if (grid.cells() <= (std::uint64_t{1} << 24)) {
    std::vector<int> count(grid.cells(), 0);
    return greedy_on(objects, grid, count);
  }
  std::unordered_map<std::uint64_t, int> count;
  return greedy_on(objects, grid, count);
}

StabSet stab_exact_min(const std::vector<AxisBox>& objects, int cap) {
  const int n = static_cast<int>(objects.size());
  if (n > cap || n > 30) throw std::length_error("exact stabbing cap exceeded");
  StabSet out;
  if (n == 0) return out;
  CornerGrid grid(objects);
  std::map<std::uint32_t, std::uint64_t> cand;  // cover mask -> a grid key
  for (const auto& b : objects) {
    grid.for_each_in(b, [&](std::uint64_t k) {
      ScaledPoint p = grid.point(k);
      std::uint32_t m = 0;
      for (int i = 0; i < n; ++i) {
        if (box_contains_point(objects[i], p)) m |= 1u << i;
      }
      cand.emplace(m, k);
    });
  }
  std::vector<std::pair<std::uint32_t, std::uint64_t>> maximal;
  for (const auto& [m, k] : cand) {
    bool dominated = false;
    for (const auto& [m2, k2] : cand) {
      if (m2 != m && (m2 & m) == m) {
        dominated = true;
        break;
      }
    }
    if (!dominated) maximal.emplace_back(m, k);
  }
  const std::uint32_t full = n == 32 ? ~0u : (1u << n) - 1;
  std::vector<int> dist(std::size_t(full) + 1, -1);
  std::vector<std::pair<std::uint32_t, int>> parent(std::size_t(full) + 1);
  std::queue<std::uint32_t> q;
  dist[0] = 0;
  q.push(0);
  while (!q.empty() && dist[full] < 0) {
    std::uint32_t m = q.front();
    q.pop();
    int e = __builtin_ctz(~m);
    for (int c = 0; c < static_cast<int>(maximal.size()); ++c) {
      if (!(maximal[c].first >> e & 1)) continue;
      std::uint32_t nm = m | maximal[c].first;
      if (dist[nm] >= 0) continue;
      dist[nm] = dist[m] + 1;
      parent[nm] = {m, c};
      q.push(nm);
    }
  }
  for (std::uint32_t m = full; m != 0; m = parent[m].first) {
    ScaledPoint p = grid.point(maximal[parent[m].second].second);
    out.points.push_back(p);
    out.covered.push_back(covering(objects, p));
  }
  std::reverse(out.points.begin(), out.points.end());
  std::reverse(out.covered.begin(), out.covered.end());
  return out;
}

namespace {

Wide pow4(int k) {
  Wide r = 1;
  for (int i = 0; i < k; ++i) r *= 4;
  return r;
}

// Smallest k with diam^2 < 4^k, i.e. diam in [2^(k-1), 2^k).
int diameter_class(const Rational& d2) {
  int k = static_cast<int>(std::floor(std::log(d2.to_double()) / std::log(4.0))) + 1;
  auto below = [&](int kk) {  // d2 < 4^kk
    return kk >= 0 ? Wide(d2.num) < pow4(kk) * d2.den : Wide(d2.num) * pow4(-kk) < Wide(d2.den);
  };
  while (!below(k)) ++k;
  while (below(k - 1)) --k;
  return k;
}

// Is box b inside the closed ball of radius 2^k centered at the midpoint of c?
bool inside_ball(const AxisBox& b, const AxisBox& c, int k) {
  Wide lhs = 0;
  for (int t = 0; t < b.dim; ++t) {
    Wide cs = Wide(c.lo[t]) + c.hi[t];
    Wide a = 2 * Wide(b.lo[t]) - cs;
    Wide z = 2 * Wide(b.hi[t]) - cs;
    lhs += std::max(a * a, z * z);
  }
  Wide rhs = 4 * Wide(b.den) * b.den;
  if (k >= 0) return lhs <= rhs * pow4(k);
  return lhs * pow4(-k) <= rhs;
}

}  // namespace

AlphaEstimate estimate_stabbing_number(const std::vector<AxisBox>& objects) {
  AlphaEstimate est;
  if (objects.empty()) return est;
  const int d = objects[0].dim;
  std::map<int, std::vector<int>> classes;
  for (int i = 0; i < static_cast<int>(objects.size()); ++i) {
    classes[diameter_class(diameter_sq(objects[i]))].push_back(i);
  }
  for (auto& [k, members] : classes) {
    std::sort(members.begin(), members.end(), [&](int a, int b) { return objects[a].lo[0] < objects[b].lo[0]; });
    const double r = std::ldexp(1.0, k);
    // Axis-0 window of half-width 2r around each center, in scaled units.
    const Wide reach = k >= 0 ? Wide(objects[0].den) * (Wide(1) << (k + 1)) : Wide(objects[0].den);
    std::map<std::vector<int>, int> memo;
    for (int c : members) {
      const Wide cs = Wide(objects[c].lo[0]) + objects[c].hi[0];
      auto first = std::partition_point(members.begin(), members.end(),
                                        [&](int i) { return Wide(objects[i].lo[0]) * 2 < cs - reach; });
      std::vector<int> inside;
      for (auto it = first; it != members.end(); ++it) {
        const int i = *it;
        if (Wide(objects[i].lo[0]) * 2 > cs + reach) break;
        if (inside_ball(objects[i], objects[c], k)) inside.push_back(i);
      }
      auto it = memo.find(inside);
      if (it == memo.end()) {
        std::vector<AxisBox> sub;
        for (int i : inside) sub.push_back(objects[i]);
        it = memo.emplace(inside, static_cast<int>(stab_greedy(sub).points.size())).first;
      }
      AlphaRow row;
      row.r = r;
      row.ball_id = c;
      row.points = it->second;
      row.alpha_class = std::pow(static_cast<double>(row.points), 1.0 / d);
      est.alpha = std::max(est.alpha, row.alpha_class);
      est.rows.push_back(row);
    }
  }
  return est;
}

StabSet canonical_box_stab_lattice(Coord L, int d, const Ball& region, Coord den) {
  if (L < 1) throw GeometryError("L must be positive");
  StabSet out;
  if (region.radius_sq.num <= 0) return out;
  const double rad = std::sqrt(region.radius_sq.to_double());
  std::vector<Coord> lo(d), hi(d);
  for (int t = 0; t < d; ++t) {
    double c = region.center[t].to_double();
    lo[t] = static_cast<Coord>(std::floor(c - rad)) - 1;
    hi[t] = static_cast<Coord>(std::ceil(c + rad)) + 1;
  }
  std::vector<std::vector<Coord>> seen;
  for (int axis = 0; axis < d; ++axis) {
    std::vector<Coord> x(d);
    std::vector<Coord> from(d), to(d), step(d, 1);
    for (int t = 0; t < d; ++t) {
      from[t] = lo[t];
      to[t] = hi[t];
      if (t == axis) {
        step[t] = L;
        // First multiple of L at or above lo.
        Coord q = lo[t] / L;
        if (q * L < lo[t]) ++q;
        from[t] = q * L;
      }
      x[t] = from[t];
    }
    if (from[axis] > to[axis]) continue;
    while (true) {
      Rational dist2(0);
      for (int t = 0; t < d; ++t) {
        Rational diff = Rational(x[t]) - region.center[t];
        dist2 = dist2 + diff * diff;
      }
      if (dist2 <= region.radius_sq) seen.push_back(x);
      int t = 0;
      while (t < d) {
        x[t] += step[t];
        if (x[t] <= to[t]) break;
        x[t] = from[t];
        ++t;
      }
      if (t == d) break;
    }
  }
  std::sort(seen.begin(), seen.end());
  seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
  for (const auto& x : seen) {
    std::vector<Coord> scaled(x);
    for (auto& v : scaled) v *= den;
    out.points.push_back(ScaledPoint::make(scaled, den));
    out.covered.emplace_back();
  }
  return out;
}

}  // namespace stabpack

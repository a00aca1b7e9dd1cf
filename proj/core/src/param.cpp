#include "stabpack/param.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <climits>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace stabpack {

namespace {

struct DBall {
  std::vector<double> c;
  double r;
};

std::vector<DBall> to_double(const std::vector<Ball>& balls) {
  std::vector<DBall> out;
  out.reserve(balls.size());
  for (const auto& b : balls) {
    DBall d;
    for (const auto& x : b.center) d.c.push_back(x.to_double());
    d.r = std::sqrt(b.radius_sq.to_double());
    out.push_back(std::move(d));
  }
  return out;
}

double dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t t = 0; t < a.size(); ++t) s += (a[t] - b[t]) * (a[t] - b[t]);
  return std::sqrt(s);
}

void classify(const std::vector<DBall>& balls, SphereGuess& g, double eps) {
  g.inside.clear();
  g.outside.clear();
  g.crossed.clear();
  const double R = g.sphere.radius;
  const double margin = eps * std::max(1.0, R);
  std::vector<int> role(balls.size(), -1);
  for (std::size_t s = 0; s < g.support.size(); ++s) {
    if (g.flags[s] & 2) role[g.support[s]] = g.flags[s] & 1;
    else role[g.support[s]] = 2;
  }
  for (int i = 0; i < static_cast<int>(balls.size()); ++i) {
    int side = role[i];
    if (side < 0) {
      double dc = dist(g.sphere.center, balls[i].c);
      if (dc + balls[i].r < R - margin) side = 1;
      else if (dc - balls[i].r > R + margin) side = 0;
      else side = 2;
    }
    (side == 1 ? g.inside : side == 0 ? g.outside : g.crossed).push_back(i);
  }
}

// Spheres tangent to the support balls, centered in the affine hull of their
// centers. e[i] = -r_i for a ball inside the sphere and +r_i outside, so that
// |c - c_i| = R + e[i].
int solve_tangency(const std::vector<DBall>& balls, const std::vector<int>& sup, const std::vector<double>& e,
                   double eps, std::vector<Sphere>& out) {
  const int m = static_cast<int>(sup.size());
  const int d = static_cast<int>(balls[sup[0]].c.size());
  const auto& c0 = balls[sup[0]].c;
  Eigen::MatrixXd V(d, m - 1);
  for (int j = 1; j < m; ++j) {
    for (int t = 0; t < d; ++t) V(t, j - 1) = balls[sup[j]].c[t] - c0[t];
  }
  Eigen::VectorXd l0 = Eigen::VectorXd::Zero(m - 1), l1 = Eigen::VectorXd::Zero(m - 1);
  if (m > 1) {
    Eigen::MatrixXd G = V.transpose() * V;
    Eigen::VectorXd beta(m - 1), alpha(m - 1);
    for (int i = 1; i < m; ++i) {
      beta(i - 1) = (G(i - 1, i - 1) - e[i] * e[i] + e[0] * e[0]) / 2;
      alpha(i - 1) = -(e[i] - e[0]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(G);
    lu.setThreshold(1e-10);
    if (lu.rank() < m - 1) return -1;
    l0 = lu.solve(beta);
    l1 = lu.solve(alpha);
  }
  Eigen::VectorXd u = V * l0, w = V * l1;
  const double a = w.squaredNorm() - 1, b = 2 * (u.dot(w) - e[0]), c = u.squaredNorm() - e[0] * e[0];
  std::vector<double> roots;
  if (std::abs(a) < 1e-12) {
    if (std::abs(b) > 1e-12) roots.push_back(-c / b);
  } else {
    double disc = b * b - 4 * a * c;
    if (disc < -eps * std::max(1.0, b * b)) return 0;
    disc = std::sqrt(std::max(0.0, disc));
    roots.push_back((-b - disc) / (2 * a));
    if (disc > 0) roots.push_back((-b + disc) / (2 * a));
  }
  int found = 0;
  for (double R : roots) {
    if (!(R > eps)) continue;
    Eigen::VectorXd cv = u + R * w;
    Sphere s;
    s.center.resize(d);
    for (int t = 0; t < d; ++t) s.center[t] = c0[t] + cv(t);
    s.radius = R;
    bool ok = true;
    for (int i = 0; i < m && ok; ++i) {
      double want = R + e[i];
      ok = want >= -eps && std::abs(dist(s.center, balls[sup[i]].c) - want) <= 1e-6 * std::max(1.0, R);
    }
    if (!ok) continue;
    out.push_back(std::move(s));
    ++found;
  }
  return found;
}

struct Emitter {
  const std::vector<DBall>& balls;
  const SphereOptions& opt;
  const std::function<bool(const SphereGuess&)>& emit;
  SphereStats& st;
  std::set<std::vector<std::int64_t>> seen;
  bool stopped = false;

  // Both sphere and resulting classification must match to count as a
  // duplicate.
  bool push(SphereGuess& g) {
    classify(balls, g, opt.eps);
    std::vector<std::int64_t> key;
    const double q = 1.0 / std::max(opt.eps, 1e-12);
    for (double x : g.sphere.center) key.push_back(std::llround(x * q * 1e-3));
    key.push_back(std::llround(g.sphere.radius * q * 1e-3));
    key.push_back(-1);
    for (int i : g.inside) key.push_back(i);
    key.push_back(-2);
    for (int i : g.outside) key.push_back(i);
    if (!seen.insert(std::move(key)).second) {
      ++st.duplicates;
      return true;
    }
    ++st.emitted;
    if (!emit(g)) stopped = true;
    return !stopped;
  }

  bool support(const std::vector<int>& sup) {
    const int m = static_cast<int>(sup.size());
    for (int mask = 0; mask < (1 << m); ++mask) {
      std::vector<double> e(m);
      for (int i = 0; i < m; ++i) e[i] = (mask >> i & 1) ? -balls[sup[i]].r : balls[sup[i]].r;
      std::vector<Sphere> spheres;
      ++st.solved;
      if (solve_tangency(balls, sup, e, opt.eps, spheres) < 0) {
        ++st.degenerate;
        continue;
      }
      for (auto& s : spheres) {
        const int bits = opt.with_origin_bits ? (1 << m) : 1;
        for (int ob = 0; ob < bits; ++ob) {
          SphereGuess g;
          g.support = sup;
          g.sphere = s;
          for (int i = 0; i < m; ++i) g.flags.push_back(static_cast<std::uint8_t>((mask >> i & 1) | ((ob >> i & 1) << 1)));
          if (!push(g)) return false;
        }
      }
    }
    return true;
  }
};

bool combos(int n, int m, int start, std::vector<int>& cur, const std::function<bool(const std::vector<int>&)>& f) {
  if (static_cast<int>(cur.size()) == m) return f(cur);
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    if (!combos(n, m, i + 1, cur, f)) return false;
    cur.pop_back();
  }
  return true;
}

}  // namespace

std::vector<Ball> circumscribed_balls(const std::vector<AxisBox>& objects) {
  std::vector<Ball> out;
  out.reserve(objects.size());
  for (const auto& o : objects) out.push_back(circumscribed_ball(o));
  return out;
}

std::int64_t sphere_guess_bound(std::int64_t n, int d) {
  std::int64_t r = 1;
  for (int i = 0; i <= d; ++i) r *= 4 * n;
  return r;
}

void classify_balls(const std::vector<Ball>& balls, SphereGuess& g, double eps) {
  classify(to_double(balls), g, eps);
}

void canonical_sphere_candidates(const std::vector<Ball>& balls, const SphereOptions& opt,
                                 const std::function<bool(const SphereGuess&)>& emit, SphereStats* stats) {
  SphereStats local;
  SphereStats& st = stats ? *stats : local;
  if (balls.empty()) return;
  const auto db = to_double(balls);
  const int n = static_cast<int>(db.size());
  const int d = static_cast<int>(db[0].c.size());
  if (d < 2 || d > 3) throw GeometryError("canonical spheres need d in {2,3}");
  Emitter em{db, opt, emit, st, {}};
  for (int m = 1; m <= std::min(n, d + 1); ++m) {
    std::vector<int> cur;
    if (!combos(n, m, 0, cur, [&](const std::vector<int>& s) { return em.support(s); })) return;
  }
  if (n > opt.exhaustive_below) return;
  // Small instances: also every sphere centered at a ball center or pair
  // midpoint whose radius sits just off a tangency event.
  std::vector<std::vector<double>> centers;
  for (int i = 0; i < n; ++i) {
    centers.push_back(db[i].c);
    for (int j = i + 1; j < n; ++j) {
      std::vector<double> mid(d);
      for (int t = 0; t < d; ++t) mid[t] = (db[i].c[t] + db[j].c[t]) / 2;
      centers.push_back(mid);
    }
  }
  for (const auto& c : centers) {
    for (int j = 0; j < n; ++j) {
      const double dc = dist(c, db[j].c);
      for (double ev : {dc - db[j].r, dc + db[j].r}) {
        for (double off : {-1e-4, 1e-4}) {
          double R = ev + off * std::max(1.0, ev);
          if (R <= opt.eps) continue;
          SphereGuess g;
          g.sphere = {c, R};
          if (!em.push(g)) return;
        }
      }
    }
  }
}

namespace {

class ParamSolver {
 public:
  ParamSolver(const std::vector<AxisBox>& objs, const ParamOptions& opt)
      : objs_(objs), opt_(opt), g_(build_intersection_graph(objs)), balls_(circumscribed_balls(objs)) {}

  std::int64_t guesses = 0;

  // Returns true with an independent set of size >= k (original ids).
  bool decide(const std::vector<int>& ids, int k, std::vector<int>& witness) {
    if (k <= 0) {
      witness.clear();
      return true;
    }
    if (static_cast<int>(ids.size()) < k) return false;
    auto& e = memo_[ids];
    if (k <= e.lb) {
      witness = e.lbw;
      return true;
    }
    if (k > e.ub) return false;
    const int n = static_cast<int>(ids.size());
    if (k <= opt_.k0 || n <= opt_.base_n) {
      auto sub = g_.induced(ids);
      auto r = n <= kBruteForceCap ? mis_bruteforce(sub) : mis_sparse(sub);
      auto& e2 = memo_[ids];
      e2.lb = e2.ub = r.size;
      e2.lbw.clear();
      for (int v : r.witness) e2.lbw.push_back(ids[v]);
      witness = e2.lbw;
      return r.size >= k;
    }
    bool ok = split(ids, k, witness);
    auto& e2 = memo_[ids];
    if (ok && static_cast<int>(witness.size()) > e2.lb) {
      e2.lb = static_cast<int>(witness.size());
      e2.lbw = witness;
    }
    if (!ok) e2.ub = std::min(e2.ub, k - 1);
    return ok;
  }

 private:
  struct Entry {
    int lb = 0;
    std::vector<int> lbw;
    int ub = INT_MAX;
  };

  // Picks the guess that leaves the fewest crossed objects and the smallest
  // side above the base case. Guesses with an edge between the sides are
  // unusable: the closed balls may touch at a single point.
  bool best_guess(const std::vector<int>& ids, SphereGuess& best) {
    std::vector<Ball> sub;
    for (int v : ids) sub.push_back(balls_[v]);
    const int n = static_cast<int>(ids.size());
    long best_score = LONG_MAX;
    SphereOptions so = opt_.sphere;
    so.exhaustive_below = 0;
    canonical_sphere_candidates(sub, so, [&](const SphereGuess& g) {
      ++guesses;
      const int big = static_cast<int>(std::max(g.inside.size(), g.outside.size()));
      if (big >= n) return true;
      long score = static_cast<long>(g.crossed.size()) * 4 + std::max(0, big - opt_.base_n) * 3 + big;
      if (score >= best_score) return true;
      for (int a : g.inside) {
        for (int b : g.outside) {
          if (g_.adjacent(ids[a], ids[b])) return true;
        }
      }
      best_score = score;
      best = g;
      return true;
    });
    if (best_score == LONG_MAX) return false;
    for (auto* v : {&best.inside, &best.outside, &best.crossed}) {
      for (int& x : *v) x = ids[x];
    }
    return true;
  }

  bool split(const std::vector<int>& ids, int k, std::vector<int>& witness) {
    SphereGuess g;
    if (!best_guess(ids, g)) return branch(ids, k, witness);
    std::vector<int> w;
    std::vector<char> blocked(objs_.size(), 0);
    return subsets(g, 0, w, blocked, k, witness);
  }

  // No usable sphere: branch on the first vertex.
  bool branch(const std::vector<int>& ids, int k, std::vector<int>& witness) {
    const int v = ids[0];
    std::vector<int> rest;
    for (int u : ids) {
      if (u != v && !g_.adjacent(u, v)) rest.push_back(u);
    }
    std::vector<int> sub;
    if (decide(rest, k - 1, sub)) {
      witness = sub;
      witness.push_back(v);
      return true;
    }
    rest.assign(ids.begin() + 1, ids.end());
    return decide(rest, k, witness);
  }

  bool subsets(const SphereGuess& g, std::size_t pos, std::vector<int>& w, std::vector<char>& blocked, int k,
               std::vector<int>& witness) {
    if (try_sides(g, w, blocked, k, witness)) return true;
    if (opt_.crossing_budget >= 0 && static_cast<int>(w.size()) >= opt_.crossing_budget) return false;
    for (std::size_t i = pos; i < g.crossed.size(); ++i) {
      const int v = g.crossed[i];
      if (blocked[v]) continue;
      std::vector<int> touched;
      for (int u : g_.neighbors(v)) {
        if (!blocked[u]) {
          blocked[u] = 1;
          touched.push_back(u);
        }
      }
      blocked[v] = 1;
      w.push_back(v);
      bool ok = subsets(g, i + 1, w, blocked, k, witness);
      w.pop_back();
      blocked[v] = 0;
      for (int u : touched) blocked[u] = 0;
      if (ok) return true;
    }
    return false;
  }

  bool try_sides(const SphereGuess& g, const std::vector<int>& w, const std::vector<char>& blocked, int k,
                 std::vector<int>& witness) {
    const int r = k - static_cast<int>(w.size());
    if (r <= 0) {
      witness = w;
      return true;
    }
    std::vector<int> in, out;
    for (int v : g.inside) {
      if (!blocked[v]) in.push_back(v);
    }
    for (int v : g.outside) {
      if (!blocked[v]) out.push_back(v);
    }
    if (static_cast<int>(in.size() + out.size()) < r) return false;
    // Acceptance is monotone in the budget, so the best inside budget is the
    // largest one that still accepts.
    std::vector<int> win, wout, tmp;
    int kin = 0;
    for (int b = 1; b <= std::min(r, static_cast<int>(in.size())); ++b) {
      if (!decide(in, b, tmp)) break;
      kin = static_cast<int>(tmp.size());
      win = tmp;
      if (kin >= r) break;
    }
    if (!decide(out, r - kin, wout)) return false;
    witness = w;
    witness.insert(witness.end(), win.begin(), win.end());
    witness.insert(witness.end(), wout.begin(), wout.end());
    return true;
  }

  const std::vector<AxisBox>& objs_;
  const ParamOptions& opt_;
  IntersectionGraph g_;
  std::vector<Ball> balls_;
  std::map<std::vector<int>, Entry> memo_;
};

}  // namespace

ParamResult solve_mis_param(const std::vector<AxisBox>& objects, int k, const ParamOptions& opt) {
  if (k < 0) throw std::invalid_argument("k must be non-negative");
  ParamResult res;
  if (k == 0) {
    res.accept = true;
    return res;
  }
  const int d = objects.empty() ? 0 : objects[0].dim;
  if (!objects.empty() && (d < 2 || d > 3)) {
    auto g = build_intersection_graph(objects);
    auto r = g.size() <= kBruteForceCap ? mis_bruteforce(g) : mis_sparse(g);
    res.fallback = true;
    res.accept = r.size >= k;
    if (res.accept) res.witness = r.witness;
    return res;
  }
  ParamSolver s(objects, opt);
  std::vector<int> ids(objects.size());
  for (int i = 0; i < static_cast<int>(ids.size()); ++i) ids[i] = i;
  std::vector<int> w;
  res.accept = s.decide(ids, k, w);
  res.guesses_evaluated = s.guesses;
  if (res.accept) {
    std::sort(w.begin(), w.end());
    auto g = build_intersection_graph(objects);
    if (static_cast<int>(w.size()) < k || !is_independent_set(g, w)) {
      throw std::logic_error("param solver produced an invalid witness");
    }
    res.witness = std::move(w);
  }
  return res;
}

}  // namespace stabpack

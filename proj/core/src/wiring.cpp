#include "stabpack/wiring.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace stabpack {

GridPermutation GridPermutation::identity(const std::vector<int>& shape) {
  int n = 1;
  for (int s : shape) {
    if (s <= 0) throw WiringError("shape entries must be positive");
    n *= s;
  }
  GridPermutation p{shape, std::vector<int>(n)};
  std::iota(p.map.begin(), p.map.end(), 0);
  return p;
}

int GridPermutation::flatten(const std::vector<int>& tuple) const {
  if (tuple.size() != shape.size()) throw WiringError("tuple arity mismatch");
  int idx = 0;
  for (std::size_t t = 0; t < shape.size(); ++t) {
    if (tuple[t] < 0 || tuple[t] >= shape[t]) throw WiringError("tuple out of range");
    idx = idx * shape[t] + tuple[t];
  }
  return idx;
}

std::vector<int> GridPermutation::unflatten(int index) const {
  std::vector<int> out(shape.size());
  for (int t = static_cast<int>(shape.size()) - 1; t >= 0; --t) {
    out[t] = index % shape[t];
    index /= shape[t];
  }
  return out;
}

bool GridPermutation::is_bijection() const {
  std::vector<char> seen(map.size(), 0);
  for (int v : map) {
    if (v < 0 || v >= size() || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

bool GridPermutation::moves_only(const std::vector<int>& axes) const {
  for (int i = 0; i < size(); ++i) {
    auto a = unflatten(i), b = unflatten(map[i]);
    for (std::size_t t = 0; t < shape.size(); ++t) {
      if (a[t] != b[t] && std::find(axes.begin(), axes.end(), static_cast<int>(t)) == axes.end()) return false;
    }
  }
  return true;
}

GridPermutation compose(const GridPermutation& a, const GridPermutation& b) {
  if (a.shape != b.shape) throw WiringError("compose: shape mismatch");
  GridPermutation r{a.shape, std::vector<int>(a.map.size())};
  for (int i = 0; i < a.size(); ++i) r.map[i] = a.map[b.map[i]];
  return r;
}

namespace {

// Splits a permutation on outer x inner (flattened o * R + r) into
// s2 . mid . s1 where s1, s2 change only the outer part and mid only the
// inner part. The inner-to-inner multigraph is O-regular; each of its O
// perfect matchings becomes one intermediate outer value.
struct Split {
  std::vector<int> s1, mid, s2;
};

Split split_outer(const std::vector<int>& pi, int O, int R) {
  const int N = O * R;
  // Edges grouped by left inner vertex; each edge is an element index.
  std::vector<std::vector<int>> left(R);
  for (int e = 0; e < N; ++e) left[e % R].push_back(e);
  std::vector<char> used(N, 0);
  std::vector<int> slot(N, -1);
  for (int c = 0; c < O; ++c) {
    std::vector<int> match_r(R, -1);  // right inner vertex -> element
    std::vector<int> seen(R, -1);
    std::function<bool(int, int)> augment = [&](int r, int stamp) -> bool {
      for (int e : left[r]) {
        if (used[e]) continue;
        const int rr = pi[e] % R;
        if (seen[rr] == stamp) continue;
        seen[rr] = stamp;
        if (match_r[rr] < 0 || augment(match_r[rr] % R, stamp)) {
          match_r[rr] = e;
          return true;
        }
      }
      return false;
    };
    for (int r = 0; r < R; ++r) {
      if (!augment(r, r)) throw WiringError("regular multigraph without perfect matching");
    }
    for (int rr = 0; rr < R; ++rr) {
      used[match_r[rr]] = 1;
      slot[match_r[rr]] = c;
    }
  }
  Split s{std::vector<int>(N), std::vector<int>(N), std::vector<int>(N)};
  for (int e = 0; e < N; ++e) {
    const int c = slot[e], r = e % R, rr = pi[e] % R;
    s.s1[e] = c * R + r;
    s.mid[c * R + r] = c * R + rr;
    s.s2[c * R + rr] = pi[e];
  }
  return s;
}

// Transposes flattened indices between (o, r) and (r, o).
std::vector<int> transpose(const std::vector<int>& m, int O, int R) {
  std::vector<int> out(m.size());
  for (int i = 0; i < O * R; ++i) {
    const int o = i / R, r = i % R, j = m[i];
    out[r * O + o] = (j % R) * O + j / R;
  }
  return out;
}

}  // namespace

RowColFactors decompose_rowcol(const GridPermutation& pi) {
  if (pi.shape.size() != 2) throw WiringError("decompose_rowcol needs a two-axis shape");
  if (!pi.is_bijection()) throw WiringError("decompose_rowcol: not a bijection");
  const int A = pi.shape[0], B = pi.shape[1];
  // Outer factors move B, so B plays the outer role.
  auto s = split_outer(transpose(pi.map, A, B), B, A);
  RowColFactors f{{pi.shape, transpose(s.s1, B, A)}, {pi.shape, transpose(s.mid, B, A)},
                  {pi.shape, transpose(s.s2, B, A)}};
  return f;
}

std::vector<AxisFactor> decompose_axes(const GridPermutation& pi) {
  const int m = static_cast<int>(pi.shape.size());
  if (m < 2) throw WiringError("decompose_axes needs at least two axes");
  if (!pi.is_bijection()) throw WiringError("decompose_axes: not a bijection");
  const int O = pi.shape[0], R = pi.size() / O;
  auto s = split_outer(pi.map, O, R);
  std::vector<AxisFactor> out;
  out.push_back({0, {pi.shape, s.s1}});
  std::vector<int> rest(pi.shape.begin() + 1, pi.shape.end());
  if (m == 2) {
    out.push_back({1, {pi.shape, s.mid}});
  } else {
    std::vector<std::vector<AxisFactor>> slices;
    for (int o = 0; o < O; ++o) {
      GridPermutation slice{rest, std::vector<int>(R)};
      for (int r = 0; r < R; ++r) slice.map[r] = s.mid[o * R + r] - o * R;
      slices.push_back(decompose_axes(slice));
    }
    for (std::size_t f = 0; f < slices[0].size(); ++f) {
      AxisFactor af{slices[0][f].axis + 1, {pi.shape, std::vector<int>(pi.size())}};
      for (int o = 0; o < O; ++o) {
        for (int r = 0; r < R; ++r) af.perm.map[o * R + r] = o * R + slices[o][f].perm.map[r];
      }
      out.push_back(std::move(af));
    }
  }
  out.push_back({0, {pi.shape, s.s2}});
  return out;
}

bool GridHost::contains(const Vertex& v) const {
  if (v.size() != dims.size() + (blowup > 0 ? 1 : 0)) return false;
  for (std::size_t t = 0; t < dims.size(); ++t) {
    if (v[t] < 0 || v[t] >= dims[t]) return false;
  }
  return blowup == 0 || (v.back() >= 0 && v.back() < blowup);
}

bool GridHost::adjacent(const Vertex& a, const Vertex& b) const {
  int l1 = 0;
  for (std::size_t t = 0; t < dims.size(); ++t) l1 += std::abs(a[t] - b[t]);
  if (blowup == 0) return l1 == 1;
  return l1 == 1 || (l1 == 0 && a.back() != b.back());
}

PathCheck verify_disjoint_paths(const PathSet& ps, const GridHost& host,
                                const std::vector<std::pair<Vertex, Vertex>>& matching) {
  PathCheck res;
  auto fail = [&](std::string why, const Vertex& v) {
    res.ok = false;
    res.reason = std::move(why);
    res.where = v;
    return res;
  };
  if (ps.paths.size() != matching.size()) return fail("path count differs from matching size", {});
  std::set<Vertex> used;
  for (std::size_t i = 0; i < ps.paths.size(); ++i) {
    const auto& p = ps.paths[i];
    if (p.empty()) return fail("empty path", {});
    const auto& [a, b] = matching[i];
    if (!((p.front() == a && p.back() == b) || (p.front() == b && p.back() == a))) {
      return fail("endpoints do not match", p.front());
    }
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (!host.contains(p[j])) return fail("vertex outside host", p[j]);
      if (j > 0 && !host.adjacent(p[j - 1], p[j])) return fail("non-adjacent step", p[j]);
      if (!used.insert(p[j]).second) return fail("shared vertex", p[j]);
    }
  }
  return res;
}

namespace {

// Odd-even transposition schedule: rounds[r] lists the left positions of the
// swaps performed in round r.
std::vector<std::vector<int>> transposition_rounds(const std::vector<int>& sigma) {
  const int n = static_cast<int>(sigma.size());
  std::vector<int> tok(n);
  std::iota(tok.begin(), tok.end(), 0);
  std::vector<std::vector<int>> rounds(n);
  for (int r = 0; r < n; ++r) {
    for (int i = r % 2; i + 1 < n; i += 2) {
      if (sigma[tok[i]] > sigma[tok[i + 1]]) {
        std::swap(tok[i], tok[i + 1]);
        rounds[r].push_back(i);
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    if (sigma[tok[i]] != i) throw WiringError("line permutation is not a bijection");
  }
  return rounds;
}

// Tokens moving on a footprint grid with even terminal coordinates. The
// last coordinate of every vertex is the layer.
struct Router {
  int n, fd;  // side and footprint dimension
  std::vector<std::vector<Vertex>> paths;
  std::vector<std::vector<int>> pos;  // token -> tuple in [n]^fd

  Vertex at(const std::vector<int>& tuple, int z) const {
    Vertex v(fd + 1);
    for (int t = 0; t < fd; ++t) v[t] = 2 * tuple[t];
    v[fd] = z;
    return v;
  }

  void straight(int z) {
    for (std::size_t k = 0; k < paths.size(); ++k) paths[k].push_back(at(pos[k], z));
  }

  // One axis factor: n rounds of three layers. A swap bends the right token
  // through the sheet at offset +1 along `sheet`, only on the two interior
  // layers of its round, so rounds and neighbouring lines never meet there.
  int phase(int axis, int sheet, const std::function<int(const std::vector<int>&)>& target, int z) {
    std::map<std::vector<int>, std::vector<int>> lines;  // key: tuple with axis zeroed
    for (std::size_t k = 0; k < pos.size(); ++k) {
      auto key = pos[k];
      key[axis] = 0;
      auto& line = lines[key];
      if (line.empty()) line.assign(n, -1);
      line[pos[k][axis]] = static_cast<int>(k);
    }
    std::vector<std::pair<std::vector<int>*, std::vector<std::vector<int>>>> sched;
    for (auto& [key, line] : lines) {
      std::vector<int> sigma(n);
      for (int i = 0; i < n; ++i) sigma[i] = target(pos[line[i]]);
      sched.emplace_back(&line, transposition_rounds(sigma));
    }
    for (int r = 0; r < n; ++r) {
      for (auto& [line, rounds] : sched) {
        std::vector<char> moved(n, 0);
        for (int i : rounds[r]) {
          const int ta = (*line)[i], tb = (*line)[i + 1];
          Vertex base = at(pos[ta], z);
          const int a = base[axis];
          auto v = [&](int u, int w, int zz) {
            Vertex x = base;
            x[axis] = u;
            x[sheet] += w;
            x[fd] = zz;
            return x;
          };
          for (const Vertex& x : {v(a, 0, z + 1), v(a + 1, 0, z + 1), v(a + 1, 0, z + 2), v(a + 2, 0, z + 2),
                                  v(a + 2, 0, z + 3)}) {
            paths[ta].push_back(x);
          }
          for (const Vertex& x : {v(a + 2, 0, z + 1), v(a + 2, 1, z + 1), v(a + 2, 1, z + 2), v(a + 1, 1, z + 2),
                                  v(a, 1, z + 2), v(a, 0, z + 2), v(a, 0, z + 3)}) {
            paths[tb].push_back(x);
          }
          pos[ta][axis] = i + 1;
          pos[tb][axis] = i;
          std::swap((*line)[i], (*line)[i + 1]);
          moved[i] = moved[i + 1] = 1;
        }
        for (int i = 0; i < n; ++i) {
          if (moved[i]) continue;
          const int k = (*line)[i];
          for (int dz = 1; dz <= 3; ++dz) paths[k].push_back(at(pos[k], z + dz));
        }
      }
      z += 3;
    }
    return z;
  }
};

void check_matching_points(const std::vector<int>& p, int n, int arity) {
  if (static_cast<int>(p.size()) != arity) throw WiringError("matching point has wrong arity");
  for (int x : p) {
    if (x < 0 || x >= n) throw WiringError("matching point out of range");
  }
}

// Completes a partial matching on [N] to a permutation, pairing unmatched
// sources with unmatched targets in order.
std::vector<int> pad_to_permutation(int N, const std::vector<std::pair<int, int>>& pairs) {
  std::vector<int> perm(N, -1), inv(N, -1);
  for (auto [a, b] : pairs) {
    if (perm[a] >= 0 || inv[b] >= 0) throw WiringError("matching is not injective");
    perm[a] = b;
    inv[b] = a;
  }
  int j = 0;
  for (int i = 0; i < N; ++i) {
    if (perm[i] >= 0) continue;
    while (inv[j] >= 0) ++j;
    perm[i] = j;
    inv[j] = i;
  }
  return perm;
}

}  // namespace

int line_min_height(int n) { return 3 * n + 1; }

GridHost line_host(int n, int h) { return GridHost{{2 * n, 2, h}, 0}; }

PathSet route_line_permutation(const std::vector<int>& sigma, int h) {
  const int n = static_cast<int>(sigma.size());
  if (h < line_min_height(n)) throw WiringError("insufficient height for line routing");
  Router rt{n, 2, std::vector<std::vector<Vertex>>(n), std::vector<std::vector<int>>(n)};
  for (int i = 0; i < n; ++i) {
    rt.pos[i] = {i, 0};
    rt.paths[i].push_back(rt.at(rt.pos[i], 0));
  }
  int z = rt.phase(0, 1, [&](const std::vector<int>& p) { return sigma[p[0]]; }, 0);
  while (z < h - 1) rt.straight(++z);
  PathSet ps;
  for (int i = 0; i < n; ++i) {
    ps.paths.push_back(std::move(rt.paths[i]));
    ps.endpoints.emplace_back(ps.paths.back().front(), ps.paths.back().back());
  }
  return ps;
}

int cube_wiring_min_height(int n, int d) { return (2 * d - 3) * 3 * n + 1; }

GridHost cube_host(int n, int d, int h) {
  GridHost g;
  g.dims.assign(d - 1, 2 * n);
  g.dims.push_back(h);
  return g;
}

Vertex cube_terminal(const std::vector<int>& p, int z) {
  Vertex v;
  for (int x : p) v.push_back(2 * x);
  v.push_back(z);
  return v;
}

namespace {

// All tokens of a full permutation on [n]^(d-1); returns one path per
// source index.
std::vector<std::vector<Vertex>> wire_permutation(int n, int d, int h, const GridPermutation& pi) {
  const int fd = d - 1;
  Router rt{n, fd, std::vector<std::vector<Vertex>>(pi.size()), std::vector<std::vector<int>>(pi.size())};
  for (int k = 0; k < pi.size(); ++k) {
    rt.pos[k] = pi.unflatten(k);
    rt.paths[k].push_back(rt.at(rt.pos[k], 0));
  }
  int z = 0;
  for (const auto& f : decompose_axes(pi)) {
    const int axis = f.axis, sheet = (f.axis + 1) % fd;
    z = rt.phase(axis, sheet, [&](const std::vector<int>& p) { return f.perm.unflatten(f.perm.map[pi.flatten(p)])[axis]; },
                 z);
  }
  while (z < h - 1) rt.straight(++z);
  return std::move(rt.paths);
}

}  // namespace

PathSet cube_wiring(int n, int d, int h, const std::vector<std::pair<Vertex, Vertex>>& matching) {
  if (d < 3) throw WiringError("cube wiring needs d >= 3");
  if (n < 1) throw WiringError("cube wiring needs n >= 1");
  if (h < cube_wiring_min_height(n, d)) throw WiringError("insufficient height for cube wiring");
  const std::vector<int> shape(d - 1, n);
  GridPermutation pi = GridPermutation::identity(shape);
  std::vector<std::pair<int, int>> pairs;
  for (const auto& [p, q] : matching) {
    check_matching_points(p, n, d - 1);
    check_matching_points(q, n, d - 1);
    pairs.emplace_back(pi.flatten(p), pi.flatten(q));
  }
  pi.map = pad_to_permutation(pi.size(), pairs);
  auto paths = wire_permutation(n, d, h, pi);
  PathSet ps;
  for (const auto& [p, q] : pairs) {
    ps.paths.push_back(std::move(paths[p]));
    ps.endpoints.emplace_back(ps.paths.back().front(), ps.paths.back().back());
  }
  return ps;
}

GridHost BlownCube::host() const {
  GridHost g = cube_host(n, d, h);
  g.blowup = t;
  return g;
}

int blown_cube_min_height(int n, int d) { return cube_wiring_min_height(n, d) + 2; }

Vertex blown_terminal(const std::vector<int>& p, int z, int index) {
  Vertex v = cube_terminal(p, z);
  v.push_back(index);
  return v;
}

PathSet blown_cube_wiring(const BlownCube& cube, const std::vector<std::pair<Vertex, Vertex>>& matching) {
  const int n = cube.n, d = cube.d, t = cube.t, h = cube.h;
  if (d < 3 || n < 1 || t < 1) throw WiringError("blown cube needs d >= 3, n >= 1, t >= 1");
  if (h < blown_cube_min_height(n, d)) throw WiringError("insufficient height for blown cube wiring");
  const std::vector<int> cells_shape(d - 1, n);
  GridPermutation cells = GridPermutation::identity(cells_shape);
  const int C = cells.size();
  auto split = [&](const Vertex& v) {
    check_matching_points(std::vector<int>(v.begin(), v.end() - 1), n, d - 1);
    if (v.back() < 0 || v.back() >= t) throw WiringError("blow-up index out of range");
    return cells.flatten(std::vector<int>(v.begin(), v.end() - 1)) * t + v.back();
  };
  std::vector<std::pair<int, int>> pairs;
  for (const auto& [a, b] : matching) {
    if (a.size() != static_cast<std::size_t>(d)) throw WiringError("matching point has wrong arity");
    pairs.emplace_back(split(a), split(b));
  }
  GridPermutation pi{{C, t}, pad_to_permutation(C * t, pairs)};
  auto f = decompose_rowcol(pi);
  // Per blow-up index, the cell permutation of the middle factor.
  std::vector<std::vector<std::vector<Vertex>>> copies(t);
  for (int c = 0; c < t; ++c) {
    GridPermutation sub{cells_shape, std::vector<int>(C)};
    for (int x = 0; x < C; ++x) sub.map[x] = f.a.map[x * t + c] / t;
    copies[c] = wire_permutation(n, d, h - 2, sub);
  }
  PathSet ps;
  for (const auto& [e, target] : pairs) {
    const int cell = e / t, idx = e % t;
    const int mid = f.b1.map[e];
    const int c = mid % t;
    std::vector<Vertex> path{blown_terminal(cells.unflatten(cell), 0, idx)};
    for (Vertex v : copies[c][cell]) {
      v.back() += 1;
      v.push_back(c);
      path.push_back(std::move(v));
    }
    path.push_back(blown_terminal(cells.unflatten(target / t), h - 1, target % t));
    ps.paths.push_back(std::move(path));
    ps.endpoints.emplace_back(ps.paths.back().front(), ps.paths.back().back());
  }
  return ps;
}

}  // namespace stabpack

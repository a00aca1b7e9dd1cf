#include "brick_engine.hpp"

#include <algorithm>
#include <stdexcept>

namespace stabpack::detail {

namespace {

// Paper coordinates of one slot's boxes; u is 1 and len is L, both scaled.
// Elbow: B (3i, 3j, -3i) on x3, B' (3i, 3j, L - 3i) on x1, exit on x1.
std::vector<Engine::CBox> elbow_gen(Coord u, Coord len, Coord i, Coord j, Coord) {
  return {{0, {3 * i * u, 3 * j * u, -3 * i * u}, 2},
          {1, {3 * i * u, 3 * j * u, len - 3 * i * u}, 0},
          {2, {len, 3 * j * u, len - 3 * i * u}, 0}};
}

// B1, B2 (centre), B' = B1 + (3, 2, L - 1), B'' = B2 + (L, 0, 0), then the
// spine exit on x3 and the spike exit on x1.
std::vector<Engine::CBox> branch_gen(Coord u, Coord len, Coord i, Coord j, Coord) {
  return {{0, {3 * i * u, 3 * j * u + i, -3 * i * u}, 2},
          {1, {0, 3 * j * u + u + i, len - 3 * i * u}, 0},
          {2, {3 * i * u + 3 * u, 3 * j * u + 2 * u + i, len - u - 3 * i * u}, 2},
          {3, {len, 3 * j * u + u + i, len - 3 * i * u}, 0},
          {4, {3 * i * u + 3 * u, 3 * j * u + 2 * u, 3 * len / 2}, 2},
          {5, {2 * len, 3 * j * u + u, len - 3 * i * u}, 0}};
}

// B1..B4 route slot i of column j to p; brick 4 is the exit.
std::vector<Engine::CBox> parallel_gen(Coord u, Coord len, Coord i, Coord j, Coord p) {
  return {{0, {3 * i * u, 3 * j * u + i, -3 * i * u}, 2},
          {1, {0, 3 * j * u + u + i, len - 3 * i * u}, 0},
          {2, {len / 2 + 3 * p * u, 3 * j * u + u + p, len - 3 * i * u}, 0},
          {3, {3 * len / 2 + 3 * p * u, 3 * j * u + p, len - 3 * i * u}, 2},
          {4, {3 * len / 2 + 3 * p * u, 3 * j * u, 3 * len / 2}, 2}};
}

}  // namespace

std::vector<Coord> parity_offsets(int L, int variant) {
  const Coord len = static_cast<Coord>(L) * L;
  if (variant == 3) return {0, len, 2 * len};
  if (variant == 4) return {0, (2 * len + 1) / 3, (4 * len + 1) / 3, 2 * len};
  throw BoxBuildError("parity must be 3 or 4");
}

std::vector<std::vector<int>> trace_paths(const std::vector<AxisBox>& boxes, const std::vector<int>& starts) {
  const IntersectionGraph g = build_intersection_graph(boxes);
  std::vector<std::vector<int>> res;
  for (int s : starts) {
    std::vector<int> path{s};
    int prev = -1, cur = s;
    while (true) {
      if (g.degree(cur) > 2) throw std::logic_error("wire branches");
      int next = -1;
      for (int w : g.neighbors(cur)) {
        if (w != prev) next = w;
      }
      if (next < 0 || next == s) break;
      prev = cur;
      cur = next;
      path.push_back(cur);
      if (path.size() > boxes.size()) throw std::logic_error("wire is a cycle");
    }
    res.push_back(std::move(path));
  }
  return res;
}

Engine::Engine(int L, int d) : L_(L), d_(d), m_(L / 8), slots_(1) {
  if (L < 16 || L % 8 != 0) throw BoxBuildError("L must be a multiple of 8 and at least 16");
  if (d < 3 || d > kMaxDim) throw BoxBuildError("dimension must be between 3 and 8");
  for (int k = 0; k + 1 < d; ++k) slots_ *= m_;
}

std::vector<int> Engine::perpendicular(int axis) const {
  std::vector<int> p;
  for (int t = 0; t < d_; ++t) {
    if (t != axis) p.push_back(t);
  }
  return p;
}

std::vector<int> Engine::slot_tuple(int flat) const {
  std::vector<int> t(d_ - 1);
  for (int k = d_ - 2; k >= 0; --k) {
    t[k] = flat % m_;
    flat /= m_;
  }
  return t;
}

int Engine::slot_flat(const std::vector<int>& tuple) const {
  int f = 0;
  for (int v : tuple) f = f * m_ + v;
  return f;
}

int Engine::slot_of(const Bundle& b, const AxisBox& box) const {
  const auto P = perpendicular(b.axis);
  std::vector<int> t(P.size());
  const Coord step = 3 * unit();
  for (std::size_t q = 0; q < P.size(); ++q) {
    const Coord diff = box.lo[P[q]] - b.corner[P[q]];
    const Coord s = (diff + step / 2) / step - (diff + step / 2 < 0 ? 1 : 0);
    if (s < 0 || s >= m_) throw std::logic_error("box outside the bundle grid");
    t[q] = static_cast<int>(s);
  }
  return slot_flat(t);
}

void Engine::straight(Bundle& b, Coord length) {
  if (length == 0) return;
  if (length < 0 || 2 * length <= len()) throw std::logic_error("straight segment too short");
  const Coord n = (length + len() - 1) / len();
  const auto P = perpendicular(b.axis);
  for (Coord k = 0; k < n; ++k) {
    const Coord adv = length / n + (k < length % n ? 1 : 0);
    const Coord end = b.head + b.sign * adv;
    for (int s = 0; s < slots_; ++s) {
      const auto t = slot_tuple(s);
      std::vector<Coord> lo(d_), hi(d_);
      for (std::size_t q = 0; q < P.size(); ++q) {
        lo[P[q]] = b.corner[P[q]] + 3 * t[q] * unit();
        hi[P[q]] = lo[P[q]] + unit();
      }
      lo[b.axis] = b.sign > 0 ? end - len() : end;
      hi[b.axis] = lo[b.axis] + len();
      pieces.push_back({AxisBox::make(lo, hi, L_), next_brick, s});
    }
    ++next_brick;
    b.head = end;
  }
}

void Engine::parity_fix(Bundle& b, const std::vector<int>& parity) {
  const auto P = perpendicular(b.axis);
  for (int s = 0; s < slots_; ++s) {
    const auto offsets = parity_offsets(L_, parity.empty() ? 3 : parity[s]);
    const auto t = slot_tuple(s);
    for (std::size_t k = 0; k < offsets.size(); ++k) {
      const Coord off = offsets[k];
      std::vector<Coord> lo(d_), hi(d_);
      for (std::size_t q = 0; q < P.size(); ++q) {
        lo[P[q]] = b.corner[P[q]] + 3 * t[q] * unit();
        hi[P[q]] = lo[P[q]] + unit();
      }
      lo[b.axis] = b.sign > 0 ? b.head + off : b.head - off - len();
      hi[b.axis] = lo[b.axis] + len();
      pieces.push_back({AxisBox::make(lo, hi, L_), next_brick + static_cast<int>(k), s});
    }
  }
  next_brick += 4;
  b.head += b.sign * 3 * len();
}

std::vector<Bundle> Engine::attach(const Bundle& b, const FrameChoice& f, Gen gen,
                                   const std::vector<int>& out_slot,
                                   const std::vector<std::pair<int, int>>& exits, bool with_exit) {
  const auto P = perpendicular(b.axis);
  const auto k1 = std::find(P.begin(), P.end(), f.x1_axis) - P.begin();
  const auto k2 = std::find(P.begin(), P.end(), f.x2_axis) - P.begin();
  if (k1 == static_cast<long>(P.size()) || k2 == static_cast<long>(P.size()) || k1 == k2) {
    throw std::logic_error("frame axes must be distinct and perpendicular to the bundle");
  }
  const std::array<int, 3> ax = {f.x1_axis, f.x2_axis, b.axis};
  const std::array<int, 3> sg = {f.x1_sign, f.x2_sign, b.sign};
  const Coord u = unit();
  std::vector<Coord> off(d_, 0);
  for (int c = 0; c < 2; ++c) {
    off[ax[c]] = sg[c] > 0 ? b.corner[ax[c]] : b.corner[ax[c]] + 3 * (m_ - 1) * u + u;
  }
  off[b.axis] = b.head;
  auto conv = [&](int s, int sign) { return sign > 0 ? s : m_ - 1 - s; };

  std::vector<std::vector<AxisBox>> exit_boxes(exits.size());
  const int base = next_brick;
  int top = 0;
  for (int flat = 0; flat < slots_; ++flat) {
    const auto t = slot_tuple(flat);
    const Coord i = conv(t[k1], f.x1_sign);
    const Coord j = conv(t[k2], f.x2_sign);
    const Coord p = out_slot.empty() ? i : conv(slot_tuple(out_slot[flat])[k1], f.x1_sign);
    for (const auto& cb : gen(u, len(), i, j, p)) {
      std::vector<Coord> lo(d_), hi(d_);
      for (int c = 0; c < 3; ++c) {
        const int w = ax[c];
        const Coord ext = cb.axis == c ? len() : u;
        if (sg[c] > 0) {
          lo[w] = off[w] + cb.lo[c];
          hi[w] = lo[w] + ext;
        } else {
          hi[w] = off[w] - cb.lo[c];
          lo[w] = hi[w] - ext;
        }
      }
      for (std::size_t q = 0; q < P.size(); ++q) {
        const int w = P[q];
        if (w == ax[0] || w == ax[1]) continue;
        lo[w] = b.corner[w] + 3 * t[q] * u;
        hi[w] = lo[w] + u;
      }
      const AxisBox box = AxisBox::make(lo, hi, L_);
      bool is_exit = false;
      for (std::size_t e = 0; e < exits.size(); ++e) {
        if (cb.brick == exits[e].first) {
          exit_boxes[e].push_back(box);
          is_exit = true;
        }
      }
      top = std::max(top, cb.brick);
      if (is_exit && !with_exit) continue;
      pieces.push_back({box, base + cb.brick, flat});
    }
  }
  next_brick = base + top + 1;

  std::vector<Bundle> res;
  for (std::size_t e = 0; e < exits.size(); ++e) {
    Bundle nb;
    nb.axis = ax[exits[e].second];
    nb.sign = sg[exits[e].second];
    nb.corner.assign(d_, 0);
    for (int q : perpendicular(nb.axis)) {
      Coord mn = exit_boxes[e].front().lo[q];
      for (const auto& bx : exit_boxes[e]) mn = std::min(mn, bx.lo[q]);
      nb.corner[q] = mn;
    }
    Coord h = nb.sign > 0 ? exit_boxes[e].front().hi[nb.axis] : exit_boxes[e].front().lo[nb.axis];
    for (const auto& bx : exit_boxes[e]) {
      h = nb.sign > 0 ? std::max(h, bx.hi[nb.axis]) : std::min(h, bx.lo[nb.axis]);
    }
    nb.head = h;
    res.push_back(nb);
  }
  return res;
}

Bundle Engine::elbow(const Bundle& b, int out_axis, int out_sign, bool with_exit) {
  int x2 = -1;
  for (int q : perpendicular(b.axis)) {
    if (q != out_axis) {
      x2 = q;
      break;
    }
  }
  return attach(b, {out_axis, out_sign, x2, 1}, elbow_gen, {}, {{2, 0}}, with_exit)[0];
}

Bundle Engine::branch(Bundle& b, int spike_axis, int spike_sign, int x2_sign, bool with_exit) {
  int x2 = -1;
  for (int q : perpendicular(b.axis)) {
    if (q != spike_axis) {
      x2 = q;
      break;
    }
  }
  auto r = attach(b, {spike_axis, spike_sign, x2, x2_sign}, branch_gen, {}, {{4, 2}, {5, 0}}, with_exit);
  b = r[0];
  return r[1];
}

void Engine::parallel(Bundle& b, int k, int x1_sign, const std::vector<int>& out, bool with_exit) {
  const auto P = perpendicular(b.axis);
  const int n = static_cast<int>(P.size());
  for (int s = 0; s < slots_; ++s) {
    const auto a = slot_tuple(s), c = slot_tuple(out[s]);
    for (int q = 0; q < n; ++q) {
      if (q != k && a[q] != c[q]) throw BoxBuildError("parallel matching moves a fixed coordinate");
    }
  }
  b = attach(b, {P[k], x1_sign, P[(k + 1) % n], 1}, parallel_gen, out, {{4, 2}}, with_exit)[0];
}

void Engine::general(Bundle& b, const GridPermutation& pi, const std::vector<int>& parity, const GmConfig& cfg) {
  const int n = d_ - 1;
  std::vector<int> order = cfg.order;
  if (order.empty()) {
    for (int k = 0; k < n; ++k) order.push_back(k);
  }
  std::vector<int> signs = cfg.signs;
  if (signs.empty()) signs.assign(2 * n - 1, 1);
  if (static_cast<int>(order.size()) != n || static_cast<int>(signs.size()) != 2 * n - 1) {
    throw std::logic_error("bad general matching configuration");
  }
  if (pi.size() != slots_ || !pi.is_bijection()) throw BoxBuildError("general matching needs a permutation");

  parity_fix(b, parity);

  // Reorder slot coordinates so the decomposition's axis 0 is order[0].
  auto to_inner = [&](const std::vector<int>& t) {
    std::vector<int> r(n);
    for (int k = 0; k < n; ++k) r[k] = t[order[k]];
    return r;
  };
  auto to_outer = [&](const std::vector<int>& r) {
    std::vector<int> t(n);
    for (int k = 0; k < n; ++k) t[order[k]] = r[k];
    return t;
  };
  GridPermutation q = GridPermutation::identity(std::vector<int>(n, m_));
  for (int s = 0; s < slots_; ++s) {
    q.map[q.flatten(to_inner(slot_tuple(s)))] = q.flatten(to_inner(slot_tuple(pi.map[s])));
  }
  const auto factors = decompose_axes(q);
  for (std::size_t f = 0; f < factors.size(); ++f) {
    std::vector<int> out(slots_);
    for (int s = 0; s < slots_; ++s) {
      const int inner = q.flatten(to_inner(slot_tuple(s)));
      out[s] = slot_flat(to_outer(q.unflatten(factors[f].perm.map[inner])));
    }
    parallel(b, order[factors[f].axis], signs[f], out);
  }
}

}  // namespace stabpack::detail

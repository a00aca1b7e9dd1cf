#include "stabpack/geometry.hpp"

#include <numeric>

namespace stabpack {

namespace {

std::int64_t checked_narrow(Wide v) {
  if (v > INT64_MAX || v < INT64_MIN) throw GeometryError("rational overflow");
  return static_cast<std::int64_t>(v);
}

Rational make_reduced(Wide n, Wide d) {
  if (d == 0) throw GeometryError("zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  Wide a = n < 0 ? -n : n;
  Wide b = d;
  while (b != 0) {
    Wide r = a % b;
    a = b;
    b = r;
  }
  if (a > 1) {
    n /= a;
    d /= a;
  }
  Rational r;
  r.num = checked_narrow(n);
  r.den = checked_narrow(d);
  return r;
}

void require_same(const AxisBox& a, const AxisBox& b) {
  if (a.dim != b.dim) throw GeometryError("dimension mismatch");
  if (a.den != b.den) throw GeometryError("denominator mismatch");
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) { *this = make_reduced(n, d); }

std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

Rational operator+(const Rational& a, const Rational& b) {
  return make_reduced(Wide(a.num) * b.den + Wide(b.num) * a.den, Wide(a.den) * b.den);
}
Rational operator-(const Rational& a, const Rational& b) {
  return make_reduced(Wide(a.num) * b.den - Wide(b.num) * a.den, Wide(a.den) * b.den);
}
Rational operator*(const Rational& a, const Rational& b) {
  return make_reduced(Wide(a.num) * b.num, Wide(a.den) * b.den);
}
Rational operator/(const Rational& a, const Rational& b) {
  return make_reduced(Wide(a.num) * b.den, Wide(a.den) * b.num);
}

ScaledPoint ScaledPoint::make(const std::vector<Coord>& c, Coord den) {
  if (c.empty() || c.size() > kMaxDim) throw GeometryError("unsupported dimension");
  if (den < 1) throw GeometryError("denominator must be positive");
  ScaledPoint p;
  p.dim = static_cast<int>(c.size());
  p.den = den;
  for (int t = 0; t < p.dim; ++t) p.coords[t] = c[t];
  return p;
}

AxisBox AxisBox::make(const std::vector<Coord>& lo, const std::vector<Coord>& hi, Coord den) {
  if (lo.size() != hi.size()) throw GeometryError("dimension mismatch");
  if (lo.empty() || lo.size() > kMaxDim) throw GeometryError("unsupported dimension");
  if (den < 1) throw GeometryError("denominator must be positive");
  AxisBox b;
  b.dim = static_cast<int>(lo.size());
  b.den = den;
  for (int t = 0; t < b.dim; ++t) {
    if (lo[t] > hi[t]) throw GeometryError("box has lo > hi");
    b.lo[t] = lo[t];
    b.hi[t] = hi[t];
  }
  return b;
}

bool AxisBox::operator==(const AxisBox& o) const {
  if (dim != o.dim || den != o.den) return false;
  for (int t = 0; t < dim; ++t) {
    if (lo[t] != o.lo[t] || hi[t] != o.hi[t]) return false;
  }
  return true;
}

HyperCube HyperCube::from_center(const std::vector<Rational>& center, const Rational& side) {
  if (center.empty() || center.size() > kMaxDim) throw GeometryError("unsupported dimension");
  if (side.num <= 0) throw GeometryError("cube side must be positive");
  // Common denominator D for every lo = c - side/2.
  std::int64_t d = 2 * side.den;
  for (const auto& c : center) d = std::lcm(d, c.den);
  HyperCube h;
  h.dim = static_cast<int>(center.size());
  h.den = d;
  h.side = side.num * (d / side.den);
  for (int t = 0; t < h.dim; ++t) {
    Rational lo = center[t] - side / Rational(2);
    h.lo[t] = lo.num * (d / lo.den);
  }
  return h;
}

bool boxes_intersect(const AxisBox& a, const AxisBox& b) {
  require_same(a, b);
  for (int t = 0; t < a.dim; ++t) {
    if (std::max(a.lo[t], b.lo[t]) > std::min(a.hi[t], b.hi[t])) return false;
  }
  return true;
}

bool box_contains_point(const AxisBox& b, const ScaledPoint& p) {
  if (b.dim != p.dim) throw GeometryError("dimension mismatch");
  for (int t = 0; t < b.dim; ++t) {
    Wide x = Wide(p.coords[t]) * b.den;
    if (Wide(b.lo[t]) * p.den > x || x > Wide(b.hi[t]) * p.den) return false;
  }
  return true;
}

CubeSide classify_against_hypercube(const AxisBox& b, const HyperCube& h) {
  if (b.dim != h.dim) throw GeometryError("dimension mismatch");
  bool inside = true;
  for (int t = 0; t < b.dim; ++t) {
    Wide blo = Wide(b.lo[t]) * h.den;
    Wide bhi = Wide(b.hi[t]) * h.den;
    Wide clo = Wide(h.lo[t]) * b.den;
    Wide chi = Wide(h.lo[t] + h.side) * b.den;
    if (bhi < clo || blo > chi) return CubeSide::Outside;
    if (!(clo < blo && bhi < chi)) inside = false;
  }
  return inside ? CubeSide::Inside : CubeSide::Crossing;
}

Ball circumscribed_ball(const AxisBox& b) {
  Ball ball;
  ball.center.reserve(b.dim);
  Wide sum = 0;
  for (int t = 0; t < b.dim; ++t) {
    ball.center.emplace_back(b.lo[t] + b.hi[t], 2 * b.den);
    Wide s = b.hi[t] - b.lo[t];
    sum += s * s;
  }
  ball.radius_sq = make_reduced(sum, Wide(4) * b.den * b.den);
  return ball;
}

Rational diameter_sq(const AxisBox& b) {
  Wide sum = 0;
  for (int t = 0; t < b.dim; ++t) {
    Wide s = b.hi[t] - b.lo[t];
    sum += s * s;
  }
  if (sum == 0) throw GeometryError("point-degenerate box has no positive diameter");
  return make_reduced(sum, Wide(b.den) * b.den);
}

AxisBox rescale(const AxisBox& b, Coord new_den) {
  if (new_den < 1 || new_den % b.den != 0) throw GeometryError("denominator must be a multiple");
  Coord f = new_den / b.den;
  AxisBox r = b;
  r.den = new_den;
  for (int t = 0; t < b.dim; ++t) {
    r.lo[t] *= f;
    r.hi[t] *= f;
  }
  return r;
}

AxisBox translate(const AxisBox& b, const CoordVec& delta) {
  AxisBox r = b;
  for (int t = 0; t < b.dim; ++t) {
    r.lo[t] += delta[t];
    r.hi[t] += delta[t];
  }
  return r;
}

const char* to_string(CubeSide s) {
  switch (s) {
    case CubeSide::Inside: return "inside";
    case CubeSide::Outside: return "outside";
    case CubeSide::Crossing: return "crossing";
  }
  return "?";
}

}  // namespace stabpack

// Exact geometric primitives over scaled integer coordinates.
//
// Every coordinate of an instance is an integer numerator over a shared
// denominator S, so all box predicates reduce to integer comparisons.
#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace stabpack {

using Coord = std::int64_t;
using Wide = __int128;

inline constexpr int kMaxDim = 8;

class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Exact rational with a positive denominator, always reduced.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1);  // NOLINT(google-explicit-constructor)

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return Wide(a.num) * b.den < Wide(b.num) * a.den;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }
};

using CoordVec = std::array<Coord, kMaxDim>;

// A point p with p[t] = coords[t] / den.
struct ScaledPoint {
  int dim = 0;
  Coord den = 1;
  CoordVec coords{};

  static ScaledPoint make(const std::vector<Coord>& c, Coord den = 1);
  Rational at(int t) const { return Rational(coords[t], den); }
};

// Closed axis-parallel box [lo, hi] with coordinates over denominator den.
struct AxisBox {
  int dim = 0;
  Coord den = 1;
  CoordVec lo{};
  CoordVec hi{};

  // Validates lo <= hi and 1 <= dim <= kMaxDim.
  static AxisBox make(const std::vector<Coord>& lo, const std::vector<Coord>& hi, Coord den = 1);

  Coord side(int t) const { return hi[t] - lo[t]; }
  bool operator==(const AxisBox& o) const;
};

struct Ball {
  std::vector<Rational> center;
  Rational radius_sq;
};

// Cube [lo, lo + side]^d over its own denominator den.
struct HyperCube {
  int dim = 0;
  Coord den = 1;
  CoordVec lo{};
  Coord side = 1;

  static HyperCube from_center(const std::vector<Rational>& center, const Rational& side);
  Rational center(int t) const { return Rational(2 * lo[t] + side, 2 * den); }
  Rational side_length() const { return Rational(side, den); }
};

// Floating point sphere, used only by the parameterized solver.
struct Sphere {
  std::vector<double> center;
  double radius = 0.0;
};

enum class CubeSide { Inside, Outside, Crossing };

bool boxes_intersect(const AxisBox& a, const AxisBox& b);
bool box_contains_point(const AxisBox& b, const ScaledPoint& p);
CubeSide classify_against_hypercube(const AxisBox& b, const HyperCube& h);
Ball circumscribed_ball(const AxisBox& b);
Rational diameter_sq(const AxisBox& b);

// Rescales the box to a new denominator; the new denominator must be a
// multiple of the old one.
AxisBox rescale(const AxisBox& b, Coord new_den);
AxisBox translate(const AxisBox& b, const CoordVec& delta);

const char* to_string(CubeSide s);

}  // namespace stabpack

// Instance files, random instance generators and the end-to-end SAT
// pipeline shared by the command line tool, benchmarks and acceptance run.
//
// JSON is written canonically: sorted keys, integers only, no whitespace,
// one trailing newline. Parsing then writing reproduces the input bytes.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stabpack/boxes.hpp"
#include "stabpack/geometry.hpp"
#include "stabpack/sat.hpp"

namespace stabpack {

class FormatError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Provenance {
  std::vector<int> rep;
  std::vector<std::vector<int>> edge_paths;
  int subdivisions = 0;
};

struct InstanceFile {
  int dim = 0;
  Coord denominator = 1;
  std::vector<AxisBox> boxes;
  std::optional<Provenance> provenance;
  std::optional<int> target;
};

std::string to_json(const InstanceFile& f);
InstanceFile instance_from_json(std::string_view text);

InstanceFile to_instance_file(const BoxInstance& inst);
// Needs provenance and target.
BoxInstance to_box_instance(const InstanceFile& f);

// {"d", "edges", "height", "p", "s", "t", "target", "terminals", "vertices"}.
std::string to_json(const BlownCubeSubgraph& g);
BlownCubeSubgraph cube_from_json(std::string_view text);

enum class BoxShape { Unit, Canonical, Mixed };
BoxShape parse_shape(std::string_view name);  // "unit", "canonical" or "mixed"
const char* to_string(BoxShape s);

// n boxes at denominator 4 inside a cube sized for a constant expected
// degree. Unit cubes have side 1; canonical boxes have sides {1, ..., 1, L}
// with the long axis uniform among the d axes; mixed draws either per box.
std::vector<AxisBox> gen_random_boxes(int n, int d, BoxShape shape, std::uint64_t seed, Coord L = 16);

struct SatReport {
  bool satisfiable = false;     // SAT oracle on the input formula
  Verdict preprocessed = Verdict::Open;
  int gadget_vertices = 0;
  int cube_vertices = 0;
  std::size_t boxes = 0;
  int target = 0;    // box MIS equals this iff the formula is satisfiable
  int achieved = 0;  // exact MIS of the box intersection graph
  bool verified = false;  // even-subdivision provenance check
  bool canonical = false;
  bool equivalent = false;  // (achieved == target) == satisfiable
};

// Formula -> gadget graph -> blown-up cube (blow-up (L/8)^2) -> boxes ->
// exact MIS. Formulas decided by preprocessing skip the geometric stages and
// report an empty instance. Throws SatError above `var_cap` variables.
SatReport end_to_end_sat(const CNF33& phi, int L, int d = 3, int var_cap = 24);

}  // namespace stabpack

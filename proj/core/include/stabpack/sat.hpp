// (3,3)-SAT formulas, the cycle/clause gadget graph and its embedding as a
// degree-3 subgraph of a blown-up grid cube.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "stabpack/isgraph.hpp"
#include "stabpack/wiring.hpp"

namespace stabpack {

class SatError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Literals are DIMACS style: +v / -v for variable v in 1..num_vars.
struct CNF33 {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;

  // Throws SatError unless every clause has 1..3 literals over known
  // variables and each variable occurs at most three times.
  void validate() const;
};

CNF33 parse_dimacs(const std::string& text);
std::string to_dimacs(const CNF33& phi);

enum class Verdict { Open, Sat, Unsat };

struct Preprocessed {
  Verdict verdict = Verdict::Open;
  CNF33 formula;
};

// Unit propagation to a fixpoint; also drops tautologies and repeated
// literals. Open formulas have only clauses of size 2 and 3.
Preprocessed preprocess(const CNF33& phi);

// Random formula: each variable gets 1..3 occurrences of random sign, dealt
// into clauses of size 3 (with probability three_fraction) or 2 with
// distinct variables. Mostly 2-clauses make unsatisfiable draws common.
CNF33 random_cnf33(int num_vars, std::uint64_t seed, double three_fraction = 0.5);

// Random formula with a planted unsatisfiable core of 2-clauses (x or y0,
// not x or y0, an implication chain y0 -> ... -> yc, yc forcing both z and
// not z), polarities flipped and variables renamed at random. num_vars >= 4.
CNF33 planted_unsat_cnf33(int num_vars, std::uint64_t seed, double three_fraction = 0.5);

bool sat_bruteforce(const CNF33& phi, int cap = 24);
bool sat_dpll(const CNF33& phi);

struct Connector {
  int var, cycle_pos, clause, slot;
  int cycle_vertex, clause_vertex;
};

struct GadgetGraph {
  IntersectionGraph graph;
  std::vector<std::vector<int>> cycles;   // 6 vertices per variable
  std::vector<std::vector<int>> clauses;  // 2 or 3 vertices per clause
  std::vector<Connector> connectors;
  int target() const { return 3 * static_cast<int>(cycles.size()) + static_cast<int>(clauses.size()); }
};

// Expects a preprocessed formula (clauses of size 2 or 3).
GadgetGraph build_gadget_graph(const CNF33& phi);

struct BlownCubeSubgraph {
  int s = 0, t = 0, d = 0;  // host side, blow-up and dimension
  int terminals = 0;        // terminal positions per footprint axis
  int height = 0;           // layers used along the last cell axis
  std::vector<Vertex> vertices;  // d cell coordinates then the intra-cell index
  IntersectionGraph graph;
  int p = 0;       // double subdivisions relative to the gadget graph
  int target = 0;  // 3 nu + gamma + p
  std::vector<int> branch;                 // gadget vertex -> subgraph vertex
  std::vector<std::vector<int>> paths;     // per gadget edge, in gadget edge order
};

struct EmbedOptions {
  int t = 4;
  int d = 3;
};

BlownCubeSubgraph embed_in_blown_cube(const GadgetGraph& gg, const EmbedOptions& opt = {});

struct CellCheck {
  bool ok = true;
  std::string reason;
  int vertex = -1;
};

// Maximum degree three, neighbours in pairwise distinct cells, every edge an
// edge of the blown-up cube.
CellCheck verify_cell_property(const BlownCubeSubgraph& g);

struct SatPipeline {
  Verdict verdict = Verdict::Open;  // decided by preprocessing when not Open
  GadgetGraph gadget;
  BlownCubeSubgraph embedded;
};

SatPipeline reduce_sat_to_blown_cube(const CNF33& phi, const EmbedOptions& opt = {});

}  // namespace stabpack

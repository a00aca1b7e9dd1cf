#include "stabpack/instance_io.hpp"

#include <cmath>
#include <json.hpp>

#include "stabpack/isgraph.hpp"
#include "stabpack/rng.hpp"

namespace stabpack {

using nlohmann::json;

namespace {

std::string dump(const json& j) { return j.dump() + "\n"; }

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw FormatError(std::string("field \"") + key + "\" has the wrong type");
  }
}

}  // namespace

std::string to_json(const InstanceFile& f) {
  json boxes = json::array();
  for (const auto& b : f.boxes) {
    boxes.push_back({{"lo", std::vector<Coord>(b.lo.begin(), b.lo.begin() + b.dim)},
                     {"hi", std::vector<Coord>(b.hi.begin(), b.hi.begin() + b.dim)}});
  }
  json j = {{"dim", f.dim}, {"denominator", f.denominator}, {"boxes", boxes}};
  if (f.provenance) {
    j["provenance"] = {{"rep", f.provenance->rep},
                       {"edge_paths", f.provenance->edge_paths},
                       {"subdivisions", f.provenance->subdivisions}};
  }
  if (f.target) j["target"] = *f.target;
  return dump(j);
}

InstanceFile instance_from_json(std::string_view text) {
  const json j = parse(text);
  InstanceFile f;
  f.dim = field<int>(j, "dim");
  f.denominator = field<Coord>(j, "denominator");
  if (f.dim < 1 || f.dim > kMaxDim) throw FormatError("dimension out of range");
  if (f.denominator < 1) throw FormatError("denominator must be positive");
  for (const auto& b : field<json>(j, "boxes")) {
    const auto lo = field<std::vector<Coord>>(b, "lo");
    const auto hi = field<std::vector<Coord>>(b, "hi");
    if (static_cast<int>(lo.size()) != f.dim || static_cast<int>(hi.size()) != f.dim) {
      throw FormatError("box corner has the wrong dimension");
    }
    try {
      f.boxes.push_back(AxisBox::make(lo, hi, f.denominator));
    } catch (const std::invalid_argument& e) {
      throw FormatError(e.what());
    }
  }
  if (j.contains("provenance")) {
    const json& p = j.at("provenance");
    f.provenance = Provenance{field<std::vector<int>>(p, "rep"),
                              field<std::vector<std::vector<int>>>(p, "edge_paths"),
                              field<int>(p, "subdivisions")};
  }
  if (j.contains("target")) f.target = field<int>(j, "target");
  return f;
}

InstanceFile to_instance_file(const BoxInstance& inst) {
  InstanceFile f;
  f.dim = inst.dim;
  f.denominator = inst.L;
  f.boxes = inst.boxes;
  f.provenance = Provenance{inst.rep, inst.edge_paths, inst.subdivisions};
  f.target = inst.target;
  return f;
}

BoxInstance to_box_instance(const InstanceFile& f) {
  if (!f.provenance || !f.target) throw FormatError("box instance needs provenance and a target");
  BoxInstance inst;
  inst.dim = f.dim;
  inst.L = static_cast<int>(f.denominator);
  inst.boxes = f.boxes;
  inst.rep = f.provenance->rep;
  inst.edge_paths = f.provenance->edge_paths;
  inst.subdivisions = f.provenance->subdivisions;
  inst.target = *f.target;
  return inst;
}

std::string to_json(const BlownCubeSubgraph& g) {
  json edges = json::array();
  for (const auto& [u, v] : g.graph.edges()) edges.push_back({u, v});
  return dump({{"s", g.s},
               {"t", g.t},
               {"d", g.d},
               {"terminals", g.terminals},
               {"height", g.height},
               {"vertices", g.vertices},
               {"edges", edges},
               {"p", g.p},
               {"target", g.target}});
}

BlownCubeSubgraph cube_from_json(std::string_view text) {
  const json j = parse(text);
  BlownCubeSubgraph g;
  g.s = field<int>(j, "s");
  g.t = field<int>(j, "t");
  g.d = field<int>(j, "d");
  g.terminals = field<int>(j, "terminals");
  g.height = field<int>(j, "height");
  g.vertices = field<std::vector<Vertex>>(j, "vertices");
  g.p = field<int>(j, "p");
  g.target = field<int>(j, "target");
  const int n = static_cast<int>(g.vertices.size());
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : field<json>(j, "edges")) {
    const auto uv = e.get<std::vector<int>>();
    if (uv.size() != 2 || uv[0] < 0 || uv[1] < 0 || uv[0] >= n || uv[1] >= n || uv[0] == uv[1]) {
      throw FormatError("bad edge");
    }
    edges.emplace_back(uv[0], uv[1]);
  }
  for (const auto& v : g.vertices) {
    if (static_cast<int>(v.size()) != g.d + 1) throw FormatError("vertex needs d cell coordinates and an index");
  }
  g.graph = IntersectionGraph::from_edges(n, edges);
  return g;
}

BoxShape parse_shape(std::string_view name) {
  if (name == "unit") return BoxShape::Unit;
  if (name == "canonical") return BoxShape::Canonical;
  if (name == "mixed") return BoxShape::Mixed;
  throw FormatError("unknown shape \"" + std::string(name) + "\"");
}

const char* to_string(BoxShape s) {
  switch (s) {
    case BoxShape::Unit: return "unit";
    case BoxShape::Canonical: return "canonical";
    case BoxShape::Mixed: return "mixed";
  }
  return "?";
}

std::vector<AxisBox> gen_random_boxes(int n, int d, BoxShape shape, std::uint64_t seed, Coord L) {
  if (n < 1) throw FormatError("need at least one box");
  if (d < 1 || d > kMaxDim) throw FormatError("dimension out of range");
  if (L < 1) throw FormatError("L must be positive");
  constexpr Coord den = 4;
  const double vol = shape == BoxShape::Unit ? 1.0 : shape == BoxShape::Canonical ? L : (1.0 + L) / 2;
  // Half of the region is covered in expectation.
  const Coord side = std::max<Coord>(2, static_cast<Coord>(std::ceil(std::pow(2.0 * n * vol, 1.0 / d))));
  Rng rng = make_stream(seed, "gen-boxes");
  std::uniform_int_distribution<Coord> pos(0, side * den - 1);
  std::uniform_int_distribution<int> axis(0, d - 1);
  std::vector<AxisBox> out;
  for (int k = 0; k < n; ++k) {
    const bool is_long = shape == BoxShape::Canonical || (shape == BoxShape::Mixed && rng() % 2 == 1);
    const int a = is_long ? axis(rng) : -1;
    std::vector<Coord> lo(d), hi(d);
    for (int t = 0; t < d; ++t) {
      lo[t] = pos(rng);
      hi[t] = lo[t] + (t == a ? L : 1) * den;
    }
    out.push_back(AxisBox::make(lo, hi, den));
  }
  return out;
}

SatReport end_to_end_sat(const CNF33& phi, int L, int d, int var_cap) {
  phi.validate();
  if (phi.num_vars > var_cap) throw SatError("formula exceeds the variable cap");
  SatReport r;
  r.satisfiable = phi.num_vars <= 20 ? sat_bruteforce(phi, 20) : sat_dpll(phi);
  const SatPipeline pipe = reduce_sat_to_blown_cube(phi, {(L / 8) * (L / 8), d});
  r.preprocessed = pipe.verdict;
  if (pipe.verdict != Verdict::Open) {
    r.verified = r.canonical = true;
    r.equivalent = (pipe.verdict == Verdict::Sat) == r.satisfiable;
    return r;
  }
  r.gadget_vertices = pipe.gadget.graph.size();
  r.cube_vertices = pipe.embedded.graph.size();
  const BoxInstance inst = build_instance(pipe.embedded, L);
  r.boxes = inst.boxes.size();
  r.target = inst.target;
  r.canonical = true;
  for (const auto& b : inst.boxes) r.canonical = r.canonical && is_canonical(b, L);
  r.verified = verify_even_subdivision(inst, pipe.embedded).ok;
  r.achieved = mis_sparse(build_intersection_graph(inst.boxes)).size;
  r.equivalent = (r.achieved == r.target) == r.satisfiable;
  return r;
}

}  // namespace stabpack

// stabpack command line: generate, solve, stab, reduce, verify, bench.
// Exit codes: 0 ok, 1 verification failed, 2 invalid input, 3 cap or timeout.
#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "stabpack/bench.hpp"
#include "stabpack/instance_io.hpp"
#include "stabpack/isgraph.hpp"
#include "stabpack/param.hpp"
#include "stabpack/separator.hpp"
#include "stabpack/stabbing.hpp"

using namespace stabpack;
using nlohmann::json;

namespace {

constexpr int kInvalid = 2;
constexpr int kCap = 3;

struct Exit {
  int code;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path);
  out << text;
}

std::vector<AxisBox> load_boxes(const std::string& path) { return instance_from_json(read_file(path)).boxes; }

std::string dump(const json& j) { return j.dump() + "\n"; }

json points_json(const StabSet& s) {
  json pts = json::array();
  for (const auto& p : s.points) pts.push_back(std::vector<Coord>(p.coords.begin(), p.coords.begin() + p.dim));
  return pts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Independent set and stabbing tools for axis-parallel boxes"};
  app.require_subcommand(1);
  std::uint64_t seed = 1;
  app.add_option("--seed", seed, "Seed for every random stream")->capture_default_str();

  std::string out;
  auto* gen = app.add_subcommand("gen", "Random box instance");
  int n = 16, d = 3;
  Coord L = 16;
  std::string shape = "mixed";
  gen->add_option("--n", n, "Number of boxes")->capture_default_str();
  gen->add_option("--d", d, "Dimension")->capture_default_str();
  gen->add_option("--L", L, "Long side of canonical boxes")->capture_default_str();
  gen->add_option("--shape", shape, "unit, canonical or mixed")->capture_default_str();
  gen->add_option("-o,--out", out, "Output file (default stdout)");

  auto* solve = app.add_subcommand("solve", "Maximum independent set of an instance");
  std::string algo = "sparse", input;
  int k = -1;
  solve->add_option("--algo", algo, "brute, sparse, separator or param")
      ->check(CLI::IsMember({"brute", "sparse", "separator", "param"}))
      ->capture_default_str();
  solve->add_option("--k", k, "Decision threshold (param only)");
  solve->add_option("instance", input, "Instance JSON")->required();
  solve->add_option("-o,--out", out, "Output file (default stdout)");

  auto* stab = app.add_subcommand("stab", "Stabbing points or a stabbing-number estimate");
  std::string method = "greedy";
  stab->add_option("--method", method, "greedy, exact or estimate")
      ->check(CLI::IsMember({"greedy", "exact", "estimate"}))
      ->capture_default_str();
  stab->add_option("instance", input, "Instance JSON")->required();
  stab->add_option("-o,--out", out, "Output file (default stdout)");

  auto* reduce = app.add_subcommand("reduce", "SAT to blown-up cube to boxes");
  reduce->require_subcommand(1);
  auto* sat2cube = reduce->add_subcommand("sat2cube", "DIMACS formula to a blown-up cube subgraph");
  auto* cube2boxes = reduce->add_subcommand("cube2boxes", "Blown-up cube subgraph to a box instance");
  auto* sat2boxes = reduce->add_subcommand("sat2boxes", "DIMACS formula to a box instance");
  int t = 4;
  bool report = false;
  sat2cube->add_option("formula", input, "DIMACS file")->required();
  sat2cube->add_option("--t", t, "Blow-up")->capture_default_str();
  sat2cube->add_option("--d", d, "Dimension")->capture_default_str();
  sat2cube->add_option("-o,--out", out, "Output file (default stdout)");
  cube2boxes->add_option("cube", input, "Cube JSON")->required();
  cube2boxes->add_option("-L", L, "Box length (blow-up must be (L/8)^2)")->capture_default_str();
  cube2boxes->add_option("-o,--out", out, "Output file (default stdout)");
  sat2boxes->add_option("formula", input, "DIMACS file")->required();
  sat2boxes->add_option("-L", L, "Box length")->capture_default_str();
  sat2boxes->add_flag("--report", report, "Solve the box instance and report the SAT equivalence instead");
  sat2boxes->add_option("-o,--out", out, "Output file (default stdout)");

  auto* verify = app.add_subcommand("verify", "Check a box instance against its blown-up cube subgraph");
  std::string cube;
  verify->add_option("instance", input, "Box instance JSON with provenance")->required();
  verify->add_option("--cube", cube, "Cube JSON")->required();

  auto* bench = app.add_subcommand("bench", "Solver sweep as CSV");
  BenchConfig cfg;
  std::string bench_shape = "mixed";
  bench->add_option("--n", cfg.ns, "Instance sizes")->delimiter(',');
  bench->add_option("--L", cfg.Ls, "Long sides")->delimiter(',');
  bench->add_option("--d", cfg.d, "Dimension")->capture_default_str();
  bench->add_option("--shape", bench_shape, "unit, canonical or mixed")->capture_default_str();
  bench->add_option("--reps", cfg.reps, "Instances per grid point")->capture_default_str();
  bench->add_option("--algos", cfg.algos, "Solvers")->delimiter(',');
  bench->add_option("--timeout", cfg.timeout_s, "Seconds per solver run")->capture_default_str();
  bench->add_option("-o,--out", out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInvalid;
  }

  bool abandoned_threads = false;
  int code = 0;
  try {
    if (*gen) {
      InstanceFile f;
      f.dim = d;
      f.denominator = 4;
      f.boxes = gen_random_boxes(n, d, parse_shape(shape), seed, L);
      write_out(out, to_json(f));
    } else if (*solve) {
      const auto objs = load_boxes(input);
      const auto g = build_intersection_graph(objs);
      json j = {{"algo", algo}};
      std::vector<int> witness;
      if (algo == "param") {
        if (k < 0) throw FormatError("param needs --k");
        const auto r = solve_mis_param(objs, k);
        j["k"] = k;
        j["accept"] = r.accept;
        witness = r.witness;
        if (!r.accept) j["decision_only"] = true;
      } else if (algo == "brute") {
        witness = mis_bruteforce(g).witness;
      } else if (algo == "sparse") {
        witness = mis_sparse(g).witness;
      } else {
        witness = solve_mis_separator(objs).witness;
      }
      std::sort(witness.begin(), witness.end());
      j["size"] = witness.size();
      j["witness"] = witness;
      j["verified"] = is_independent_set(g, witness);
      write_out(out, dump(j));
    } else if (*stab) {
      const auto objs = load_boxes(input);
      json j = {{"method", method}};
      if (method == "estimate") {
        j["alpha"] = estimate_stabbing_number(objs).alpha;
      } else {
        const StabSet s = method == "greedy" ? stab_greedy(objs) : stab_exact_min(objs);
        j["count"] = s.points.size();
        j["denominator"] = s.points.empty() ? 1 : s.points.front().den;
        j["points"] = points_json(s);
        j["verified"] = verify_stab(s.points, objs).ok;
      }
      write_out(out, dump(j));
    } else if (*sat2cube) {
      const auto pipe = reduce_sat_to_blown_cube(parse_dimacs(read_file(input)), {t, d});
      if (pipe.verdict != Verdict::Open) {
        write_out(out, dump({{"decided", pipe.verdict == Verdict::Sat ? "sat" : "unsat"}}));
      } else {
        write_out(out, to_json(pipe.embedded));
      }
    } else if (*cube2boxes) {
      const auto g = cube_from_json(read_file(input));
      write_out(out, to_json(to_instance_file(build_instance(g, static_cast<int>(L)))));
    } else if (*sat2boxes) {
      const CNF33 phi = parse_dimacs(read_file(input));
      if (report) {
        const SatReport r = end_to_end_sat(phi, static_cast<int>(L));
        write_out(out, dump({{"satisfiable", r.satisfiable},
                             {"decided_by_preprocessing", r.preprocessed != Verdict::Open},
                             {"gadget_vertices", r.gadget_vertices},
                             {"cube_vertices", r.cube_vertices},
                             {"boxes", r.boxes},
                             {"target", r.target},
                             {"achieved", r.achieved},
                             {"verified", r.verified},
                             {"canonical", r.canonical},
                             {"equivalent", r.equivalent}}));
        if (!r.equivalent || !r.verified || !r.canonical) code = 1;
      } else {
        const int bl = static_cast<int>(L);
        const auto pipe = reduce_sat_to_blown_cube(phi, {(bl / 8) * (bl / 8), 3});
        if (pipe.verdict != Verdict::Open) {
          write_out(out, dump({{"decided", pipe.verdict == Verdict::Sat ? "sat" : "unsat"}}));
        } else {
          write_out(out, to_json(to_instance_file(build_instance(pipe.embedded, bl))));
        }
      }
    } else if (*verify) {
      const auto inst = to_box_instance(instance_from_json(read_file(input)));
      const auto g = cube_from_json(read_file(cube));
      const auto chk = verify_even_subdivision(inst, g);
      std::cout << dump({{"ok", chk.ok}, {"reason", chk.reason}, {"box", chk.vertex}});
      if (!chk.ok) code = 1;
    } else if (*bench) {
      cfg.seed = seed;
      cfg.shape = parse_shape(bench_shape);
      const auto rows = run_benchmark(cfg);
      std::string csv = bench_csv_header();
      for (const auto& r : rows) {
        csv += to_csv(r);
        abandoned_threads = abandoned_threads || r.status == "timeout";
      }
      write_out(out, csv);
    }
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    code = kCap;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    code = kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    code = kInvalid;
  }
  if (abandoned_threads) {
    // Timed-out solver threads are still running; skip static destructors.
    std::cout.flush();
    std::_Exit(code);
  }
  return code;
}

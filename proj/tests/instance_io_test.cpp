#include "stabpack/instance_io.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "stabpack/bench.hpp"
#include "stabpack/stabbing.hpp"

namespace stabpack {
namespace {

TEST(InstanceFile, RoundTripIsByteIdentical) {
  InstanceFile f;
  f.dim = 3;
  f.denominator = 4;
  f.boxes = gen_random_boxes(20, 3, BoxShape::Mixed, 3);
  const std::string a = to_json(f);
  EXPECT_EQ(to_json(instance_from_json(a)), a);
  EXPECT_EQ(a.find(' '), std::string::npos);
  EXPECT_EQ(a.back(), '\n');
  EXPECT_LT(a.find("\"boxes\""), a.find("\"denominator\""));  // sorted keys
}

TEST(InstanceFile, ProvenanceSurvives) {
  CNF33 phi{3, {{1, -2, 3}}};
  const auto pipe = reduce_sat_to_blown_cube(phi, {4, 3});
  const auto inst = build_instance(pipe.embedded, 16);
  const std::string text = to_json(to_instance_file(inst));
  const BoxInstance back = to_box_instance(instance_from_json(text));
  EXPECT_EQ(back.boxes, inst.boxes);
  EXPECT_EQ(back.rep, inst.rep);
  EXPECT_EQ(back.edge_paths, inst.edge_paths);
  EXPECT_EQ(back.target, inst.target);

  const std::string cube = to_json(pipe.embedded);
  const auto g = cube_from_json(cube);
  EXPECT_EQ(to_json(g), cube);
  EXPECT_EQ(g.graph.edges(), pipe.embedded.graph.edges());
  EXPECT_TRUE(verify_even_subdivision(back, g).ok);
}

TEST(InstanceFile, RejectsMalformedInput) {
  EXPECT_THROW(instance_from_json("{"), FormatError);
  EXPECT_THROW(instance_from_json(R"({"dim":2,"boxes":[]})"), FormatError);
  EXPECT_THROW(instance_from_json(R"({"dim":2,"denominator":1,"boxes":[{"lo":[0],"hi":[1,1]}]})"), FormatError);
  EXPECT_THROW(instance_from_json(R"({"dim":2,"denominator":1,"boxes":[{"lo":[2,0],"hi":[1,1]}]})"), FormatError);
  EXPECT_THROW(to_box_instance(instance_from_json(R"({"dim":1,"denominator":1,"boxes":[]})")), FormatError);
  EXPECT_THROW(cube_from_json(R"({"s":1})"), FormatError);
}

TEST(Generator, DeterministicAndShaped) {
  EXPECT_EQ(gen_random_boxes(1, 3, BoxShape::Unit, 9).size(), 1u);
  EXPECT_EQ(gen_random_boxes(50, 3, BoxShape::Mixed, 9), gen_random_boxes(50, 3, BoxShape::Mixed, 9));
  EXPECT_NE(gen_random_boxes(50, 3, BoxShape::Mixed, 9), gen_random_boxes(50, 3, BoxShape::Mixed, 10));
  for (const auto& b : gen_random_boxes(100, 3, BoxShape::Canonical, 2, 16)) {
    std::vector<Coord> sides{b.side(0), b.side(1), b.side(2)};
    std::sort(sides.begin(), sides.end());
    EXPECT_EQ(sides, (std::vector<Coord>{b.den, b.den, 16 * b.den}));
  }
  for (const auto& b : gen_random_boxes(30, 2, BoxShape::Unit, 2)) EXPECT_EQ(b.side(0), b.den);
  EXPECT_THROW(parse_shape("blob"), FormatError);
  EXPECT_THROW(gen_random_boxes(0, 3, BoxShape::Unit, 1), FormatError);
}

TEST(Generator, CanonicalStabbingEstimate) {
  const auto boxes = gen_random_boxes(200, 3, BoxShape::Canonical, 4, 16);
  EXPECT_LE(estimate_stabbing_number(boxes).alpha, 8 * std::cbrt(16.0 * 16.0));
}

TEST(EndToEnd, SingleClauseFormula) {
  const auto r = end_to_end_sat(CNF33{3, {{1, -2, 3}}}, 16);
  EXPECT_TRUE(r.satisfiable);
  EXPECT_TRUE(r.verified);
  EXPECT_TRUE(r.canonical);
  EXPECT_EQ(r.achieved, r.target);
  EXPECT_TRUE(r.equivalent);
}

TEST(EndToEnd, PlantedUnsatFallsShort) {
  const auto r = end_to_end_sat(planted_unsat_cnf33(8, 5), 16);
  EXPECT_FALSE(r.satisfiable);
  EXPECT_TRUE(r.equivalent);
  if (r.preprocessed == Verdict::Open) EXPECT_LT(r.achieved, r.target);
}

TEST(EndToEnd, EmptyFormula) {
  const auto r = end_to_end_sat(CNF33{}, 16);
  EXPECT_TRUE(r.satisfiable);
  EXPECT_EQ(r.boxes, 0u);
  EXPECT_TRUE(r.equivalent);
  EXPECT_THROW(end_to_end_sat(CNF33{30, {}}, 16), SatError);
}

TEST(Bench, TinySweepAgrees) {
  BenchConfig cfg;
  cfg.ns = {8, 12, 16};
  cfg.reps = 2;
  cfg.algos = {"brute", "separator", "sparse", "param"};
  cfg.threads = 2;
  const auto rows = run_benchmark(cfg);
  ASSERT_EQ(rows.size(), 3u * 2 * 4);
  for (std::size_t r = 0; r < rows.size(); r += 4) {
    for (std::size_t a = 0; a < 4; ++a) {
      EXPECT_EQ(rows[r + a].status, "ok");
      EXPECT_TRUE(rows[r + a].verified);
      EXPECT_EQ(rows[r + a].size, rows[r].size) << rows[r + a].algo;
    }
  }
  EXPECT_EQ(bench_csv_header(), "n,d,L,shape,seed,alpha,algo,status,size,verified,wall_ms\n");
}

TEST(Bench, TimeoutIsRecorded) {
  BenchConfig cfg;
  cfg.ns = {200};
  cfg.shape = BoxShape::Canonical;
  cfg.algos = {"brute"};
  cfg.timeout_s = 0.01;
  const auto rows = run_benchmark(cfg);
  ASSERT_EQ(rows.size(), 1u);
  // Either the cap or the clock stops the exhaustive solver.
  EXPECT_TRUE(rows[0].status == "timeout" || rows[0].status == "cap") << rows[0].status;
  EXPECT_FALSE(rows[0].verified);
}

}  // namespace
}  // namespace stabpack

#include <gtest/gtest.h>

#include <random>

#include "stabpack/sat.hpp"

using namespace stabpack;

namespace {

CNF33 cnf(int nu, std::vector<std::vector<int>> c) { return CNF33{nu, std::move(c)}; }

}  // namespace

TEST(Dimacs, ParseAndRoundTrip) {
  auto phi = parse_dimacs("c comment\np cnf 3 2\n1 -2 3 0\n-1 2 0\n");
  EXPECT_EQ(phi.num_vars, 3);
  ASSERT_EQ(phi.clauses.size(), 2u);
  EXPECT_EQ(phi.clauses[0], (std::vector<int>{1, -2, 3}));
  EXPECT_EQ(parse_dimacs(to_dimacs(phi)).clauses, phi.clauses);
  EXPECT_THROW(parse_dimacs("1 2 0\n"), SatError);
  EXPECT_THROW(parse_dimacs("p cnf 1 4\n1 0\n1 0\n1 0\n1 0\n"), SatError);
  EXPECT_THROW(parse_dimacs("p cnf 2 1\n1 x 0\n"), SatError);
}

TEST(Preprocess, Examples) {
  auto open = cnf(2, {{1, 2}, {-1, -2}});
  auto r = preprocess(open);
  EXPECT_EQ(r.verdict, Verdict::Open);
  EXPECT_EQ(r.formula.clauses, open.clauses);
  EXPECT_EQ(preprocess(cnf(2, {{1}, {-1, 2}})).verdict, Verdict::Sat);
  EXPECT_EQ(preprocess(cnf(1, {{1}, {-1}})).verdict, Verdict::Unsat);
  auto mid = preprocess(cnf(3, {{1}, {-1, 2, 3}, {-2, -3}}));
  ASSERT_EQ(mid.verdict, Verdict::Open);
  for (const auto& c : mid.formula.clauses) EXPECT_GE(c.size(), 2u);
}

TEST(SatOracles, ExamplesAndAgreement) {
  EXPECT_TRUE(sat_bruteforce(cnf(1, {{1}})));
  EXPECT_FALSE(sat_bruteforce(cnf(1, {{1}, {-1}})));
  EXPECT_THROW(sat_bruteforce(cnf(25, {})), SatError);
  int unsat = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    auto phi = random_cnf33(8, seed, seed % 2 ? 0.5 : 0.0);
    EXPECT_NO_THROW(phi.validate());
    const bool b = sat_bruteforce(phi);
    EXPECT_EQ(b, sat_dpll(phi)) << seed;
    unsat += !b;
    auto pre = preprocess(phi);
    if (pre.verdict != Verdict::Open) EXPECT_EQ(pre.verdict == Verdict::Sat, b);
    else EXPECT_EQ(sat_bruteforce(pre.formula), b);
  }
  EXPECT_GT(unsat, 0);
}

TEST(SatOracles, PlantedCoreIsUnsatisfiable) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto phi = planted_unsat_cnf33(4 + static_cast<int>(seed % 5), seed);
    EXPECT_NO_THROW(phi.validate());
    EXPECT_FALSE(sat_bruteforce(phi));
    EXPECT_FALSE(sat_dpll(phi));
  }
  EXPECT_THROW(planted_unsat_cnf33(3, 0), SatError);
}

TEST(GadgetGraph, SingleClause) {
  auto gg = build_gadget_graph(cnf(3, {{1, -2, 3}}));
  EXPECT_EQ(gg.graph.size(), 21);
  EXPECT_EQ(gg.graph.edge_count(), 18u + 3u + 3u);
  EXPECT_EQ(gg.target(), 10);
  EXPECT_EQ(mis_bruteforce(gg.graph).size, 10);
  // Positive literals on even cycle positions (v2), negative on odd (v1).
  EXPECT_EQ(gg.connectors[0].cycle_pos, 1);
  EXPECT_EQ(gg.connectors[1].cycle_pos, 0);
}

TEST(GadgetGraph, TwoClauses) {
  auto gg = build_gadget_graph(cnf(2, {{1, 2}, {-1, -2}}));
  EXPECT_EQ(gg.target(), 8);
  EXPECT_EQ(mis_bruteforce(gg.graph).size, 8);
  // x or y, not x or y, y implies y', y' decides z both ways: unsatisfiable.
  auto un = build_gadget_graph(cnf(4, {{1, 2}, {-1, 2}, {-2, 3}, {-3, 4}, {-3, -4}}));
  EXPECT_FALSE(sat_bruteforce(cnf(4, {{1, 2}, {-1, 2}, {-2, 3}, {-3, 4}, {-3, -4}})));
  EXPECT_EQ(mis_sparse(un.graph).size, un.target() - 1);
  EXPECT_THROW(build_gadget_graph(cnf(1, {{1}})), SatError);
}

TEST(GadgetGraph, MisMatchesSatisfiability) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto pre = preprocess(random_cnf33(6, seed, 0.25));
    if (pre.verdict != Verdict::Open) continue;
    auto gg = build_gadget_graph(pre.formula);
    EXPECT_EQ(mis_sparse(gg.graph).size == gg.target(), sat_bruteforce(pre.formula)) << seed;
  }
}

TEST(Embed, EmptyFormula) {
  auto e = embed_in_blown_cube(build_gadget_graph(cnf(0, {})));
  EXPECT_EQ(e.graph.size(), 0);
  EXPECT_EQ(e.target, 0);
}

TEST(Embed, SingleClause) {
  auto gg = build_gadget_graph(cnf(3, {{1, -2, 3}}));
  auto e = embed_in_blown_cube(gg, {4, 3});
  auto cell = verify_cell_property(e);
  EXPECT_TRUE(cell.ok) << cell.reason;
  auto sub = verify_even_subdivision(e.graph, gg.graph, e.branch, e.paths);
  EXPECT_TRUE(sub.ok) << sub.reason;
  EXPECT_EQ(mis_sparse(e.graph).size, e.target);
  EXPECT_EQ(e.target, 10 + e.p);
}

TEST(Embed, RandomFormulasMatchSatisfiability) {
  int checked = 0, unsat = 0;
  for (std::uint64_t seed = 0; checked < 50; ++seed) {
    const int nu = 1 + static_cast<int>(seed % 8);
    auto phi = seed % 3 == 0 && nu >= 4 ? planted_unsat_cnf33(nu, seed) : random_cnf33(nu, 1000 + seed, 0.25);
    auto pipe = reduce_sat_to_blown_cube(phi, {2 + 2 * static_cast<int>(seed % 2), 3});
    if (pipe.verdict != Verdict::Open) continue;
    ++checked;
    const auto& e = pipe.embedded;
    ASSERT_TRUE(verify_cell_property(e).ok);
    ASSERT_TRUE(verify_even_subdivision(e.graph, pipe.gadget.graph, e.branch, e.paths).ok);
    const bool sat = sat_bruteforce(phi);
    unsat += !sat;
    EXPECT_EQ(mis_sparse(e.graph).size == e.target, sat) << seed;
  }
  EXPECT_GT(unsat, 0);
}

TEST(Embed, FourDimensions) {
  auto gg = build_gadget_graph(cnf(3, {{1, -2, 3}, {-1, 2}}));
  auto e = embed_in_blown_cube(gg, {2, 4});
  EXPECT_TRUE(verify_cell_property(e).ok);
  EXPECT_TRUE(verify_even_subdivision(e.graph, gg.graph, e.branch, e.paths).ok);
  EXPECT_EQ(mis_sparse(e.graph).size, e.target);
}

TEST(CellProperty, DetectsViolations) {
  BlownCubeSubgraph g;
  g.s = 3;
  g.t = 2;
  g.d = 3;
  g.vertices = {{0, 0, 0, 0}, {1, 0, 0, 0}, {1, 0, 0, 1}};
  g.graph = IntersectionGraph::from_edges(3, {{0, 1}, {0, 2}, {1, 2}});
  auto r = verify_cell_property(g);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.reason, "two neighbours share a cell");
  g.vertices = {{1, 1, 1, 0}, {0, 1, 1, 0}, {2, 1, 1, 0}, {1, 0, 1, 0}, {1, 2, 1, 0}};
  g.graph = IntersectionGraph::from_edges(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  EXPECT_EQ(verify_cell_property(g).reason, "degree above three");
}

TEST(EvenSubdivision, DetectsEvenPath) {
  auto small = IntersectionGraph::from_edges(2, {{0, 1}});
  auto big = IntersectionGraph::from_edges(3, {{0, 2}, {2, 1}});
  auto r = verify_even_subdivision(big, small, {0, 1}, {{0, 2, 1}});
  EXPECT_FALSE(r.ok);
  auto ok = IntersectionGraph::from_edges(4, {{0, 2}, {2, 3}, {3, 1}});
  EXPECT_TRUE(verify_even_subdivision(ok, small, {0, 1}, {{0, 2, 3, 1}}).ok);
}

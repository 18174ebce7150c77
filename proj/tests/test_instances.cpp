#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "dsp/dsp2.hpp"
#include "dsp/graph.hpp"
#include "dsp/instances.hpp"
#include "dsp/oracle.hpp"

using namespace dsp;

TEST_CASE("built-in example structure") {
  Instance inst = builtin_fig1();
  CHECK(inst.graph.num_vertices() == 14);
  CHECK(inst.graph.num_edges() == 18);
  CHECK(inst.k == 2);
  CHECK(inst.terminals == std::vector<std::pair<int, int>>{{0, 5}, {4, 11}});
}

TEST_CASE("random generator is deterministic and well-formed") {
  Instance a = gen_random(12, 0.3, 3, 99);
  Instance b = gen_random(12, 0.3, 3, 99);
  CHECK(a.graph.edges() == b.graph.edges());
  CHECK(a.terminals == b.terminals);
  Instance c = gen_random(12, 0.3, 3, 100);
  CHECK((a.graph.edges() != c.graph.edges() || a.terminals != c.terminals));

  for (int seed = 0; seed < 30; ++seed) {
    Instance inst = gen_random(10, 0.25, 2, seed);
    std::set<int> seen;
    for (auto [s, t] : inst.terminals) {
      CHECK(seen.insert(s).second);
      CHECK(seen.insert(t).second);
    }
    PositionTable pt = compute_positions(inst);
    for (int i = 0; i < inst.k; ++i)
      CHECK(pt.pos[inst.terminals[i].second][i] >= 0);  // target reachable
  }
}

TEST_CASE("mcc text round trip and validation") {
  std::string text =
      "c toy\np mcc 3 3 3\ne 0 1\ne 1 2\ne 0 2\nv 0 1\nv 1 2\nv 2 3\n";
  MccInstance mcc = parse_mcc_text(text);
  CHECK(mcc.k == 3);
  CHECK(mcc.graph.num_vertices() == 3);
  CHECK(mcc.coloring == std::vector<int>{0, 1, 2});
  MccInstance again = parse_mcc_text(format_mcc(mcc));
  CHECK(again.coloring == mcc.coloring);
  CHECK(again.graph.edges() == mcc.graph.edges());

  // color out of range (1-based colors in the file)
  CHECK_THROWS_AS(
      parse_mcc_text("p mcc 1 0 2\nv 0 3\n"), ParseError);
  // missing color line
  CHECK_THROWS_AS(parse_mcc_text("p mcc 2 1 1\ne 0 1\nv 0 1\n"), ParseError);
}

TEST_CASE("mcc brute force on hand instances") {
  // triangle, one vertex per color: the clique exists
  MccInstance tri = parse_mcc_text(
      "p mcc 3 3 3\ne 0 1\ne 1 2\ne 0 2\nv 0 1\nv 1 2\nv 2 3\n");
  CHECK(mcc_bruteforce(tri));

  // no edge between the two color classes
  MccInstance none = parse_mcc_text("p mcc 2 0 2\nv 0 1\nv 1 2\n");
  CHECK_FALSE(mcc_bruteforce(none));

  // single color class: a 1-clique always exists
  MccInstance single = parse_mcc_text("p mcc 1 0 1\nv 0 1\n");
  CHECK(mcc_bruteforce(single));

  // two choices per color, only one combination joined by an edge
  MccInstance pick = parse_mcc_text(
      "p mcc 4 1 2\ne 1 3\nv 0 1\nv 1 1\nv 2 2\nv 3 2\n");
  CHECK(mcc_bruteforce(pick));
}

TEST_CASE("random mcc generator respects shape") {
  MccInstance mcc = gen_random_mcc(3, 2, 0.5, 11);
  CHECK(mcc.k == 3);
  CHECK(mcc.graph.num_vertices() == 6);
  std::vector<int> counts(3, 0);
  for (int c : mcc.coloring) {
    REQUIRE(c >= 0);
    REQUIRE(c < 3);
    ++counts[c];
  }
  CHECK(counts == std::vector<int>{2, 2, 2});
  MccInstance again = gen_random_mcc(3, 2, 0.5, 11);
  CHECK(again.graph.edges() == mcc.graph.edges());
}

TEST_CASE("reduction output shape") {
  MccInstance mcc = gen_random_mcc(2, 2, 0.5, 5);
  MccReductionTrace trace;
  Instance red = gen_mcc_reduction(mcc, &trace);
  CHECK(red.k == 2 * mcc.k);
  CHECK((int)red.terminals.size() == red.k);
  CHECK((int)trace.names.size() == red.graph.num_vertices());
  std::set<int> seen;
  for (auto [s, t] : red.terminals) {
    CHECK(seen.insert(s).second);
    CHECK(seen.insert(t).second);
  }
}

TEST_CASE("reduction equivalence on small instances") {
  for (int seed = 0; seed < 8; ++seed) {
    MccInstance mcc = gen_random_mcc(2, 2, 0.5, 40 + seed);
    Instance red = gen_mcc_reduction(mcc);
    OracleResult res = oracle_solve(red);
    REQUIRE(res.status != OracleStatus::kLimit);
    CHECK(mcc_bruteforce(mcc) == (res.status == OracleStatus::kYes));
  }
}

TEST_CASE("grid cross instance") {
  Instance inst = gen_grid_cross(8);
  CHECK(inst.graph.num_vertices() == 64);
  CHECK(inst.graph.num_edges() == 2 * 8 * 7);
  CHECK(inst.k == 2);
  // crossing pairs on a planar grid can never be routed disjointly: the
  // two paths connect opposite sides of the square, so they must meet in
  // a vertex; the instance is a guaranteed-exhaustion benchmark
  CHECK_FALSE(solve_dsp2(inst).has_value());
  Instance small = gen_grid_cross(4);
  CHECK(oracle_solve(small).status == OracleStatus::kNo);
  CHECK_FALSE(solve_dsp2(small).has_value());
}

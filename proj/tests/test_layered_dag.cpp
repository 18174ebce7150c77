#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "dsp/graph.hpp"
#include "dsp/instances.hpp"
#include "dsp/layered_dag.hpp"
#include "dsp/oracle.hpp"
#include "helpers.hpp"

using namespace dsp;
using dsp::testing::all_dag_paths;
using dsp::testing::brute_disjoint_paths_dag;
using dsp::testing::fragment_valid;
using dsp::testing::random_dag;

TEST_CASE("chain graph builds a chain dag") {
  Instance inst;
  inst.graph = Graph(3, {{0, 1}, {1, 2}});
  inst.k = 1;
  inst.terminals = {{0, 2}};
  PositionTable pt = compute_positions(inst);
  LayeredDag ld = build_layered_dag(inst.graph, pt, 0);
  CHECK(ld.color == 0);
  CHECK(ld.dag.out[0] == std::vector<int>{1});
  CHECK(ld.dag.out[1] == std::vector<int>{2});
  CHECK(ld.dag.out[2].empty());
  CHECK(ld.dag.topo_pos[0] < ld.dag.topo_pos[1]);
  CHECK(ld.dag.topo_pos[1] < ld.dag.topo_pos[2]);
}

TEST_CASE("edges between equal layers contribute no arc") {
  Instance inst;
  inst.graph = Graph(3, {{0, 1}, {0, 2}, {1, 2}});
  inst.k = 1;
  inst.terminals = {{0, 1}};
  PositionTable pt = compute_positions(inst);
  LayeredDag ld = build_layered_dag(inst.graph, pt, 0);
  CHECK(ld.dag.out[0] == std::vector<int>{1, 2});
  CHECK(ld.dag.out[1].empty());  // 1 and 2 share layer 1
  CHECK(ld.dag.out[2].empty());
}

TEST_CASE("dag paths are exactly the shortest paths of the layer color") {
  Instance inst = builtin_fig1();
  PositionTable pt = compute_positions(inst);
  for (int c = 0; c < 2; ++c) {
    auto [s, t] = inst.terminals[c];
    LayeredDag ld = build_layered_dag(inst.graph, pt, c);
    auto dag_paths = all_dag_paths(ld.dag, s, t);
    auto shortest = enumerate_shortest_paths(inst.graph, s, t, 100000);
    std::set<Path> a(dag_paths.begin(), dag_paths.end());
    std::set<Path> b(shortest.begin(), shortest.end());
    CHECK(a == b);
  }
}

TEST_CASE("Dag::make rejects cycles") {
  CHECK_FALSE(Dag::make(2, {{0, 1}, {1, 0}}).has_value());
  CHECK(Dag::make(2, {{0, 1}}).has_value());
}

TEST_CASE("single pair on a chain") {
  Dag dag = *Dag::make(3, {{0, 1}, {1, 2}});
  auto sol = disjoint_paths_dag(dag, {{0, 2}});
  REQUIRE(sol.has_value());
  CHECK((*sol)[0] == Path{0, 1, 2});
}

TEST_CASE("diamond dag carries two internally disjoint copies") {
  Dag dag = *Dag::make(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  auto sol = disjoint_paths_dag(dag, {{0, 3}, {0, 3}});
  REQUIRE(sol.has_value());
  CHECK(fragment_valid(dag, {{0, 3}, {0, 3}}, *sol));

  auto fast = two_disjoint_paths_dag_fast(dag, {0, 3}, {0, 3});
  REQUIRE(fast.has_value());
  CHECK(fragment_valid(dag, {{0, 3}, {0, 3}}, {(*fast)[0], (*fast)[1]}));
}

TEST_CASE("a shared interior cut vertex forces none") {
  Dag dag = *Dag::make(3, {{0, 1}, {1, 2}});
  CHECK_FALSE(disjoint_paths_dag(dag, {{0, 2}, {0, 2}}).has_value());
  CHECK_FALSE(two_disjoint_paths_dag_fast(dag, {0, 2}, {0, 2}).has_value());
}

TEST_CASE("dp agrees with exhaustive tuple enumeration") {
  std::mt19937_64 rng(42);
  int yes = 0, no = 0;
  for (int it = 0; it < 200; ++it) {
    int n = 4 + (int)(rng() % 7);  // up to 10
    Dag dag = random_dag(n, 0.35, rng);
    int p = 1 + (int)(rng() % 3);
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < p; ++i) {
      int s = (int)(rng() % n), t = (int)(rng() % n);
      if (s == t) t = (t + 1) % n;
      pairs.emplace_back(s, t);
    }
    bool truth = brute_disjoint_paths_dag(dag, pairs);
    auto got = disjoint_paths_dag(dag, pairs);
    CHECK(got.has_value() == truth);
    if (truth) {
      ++yes;
      CHECK(fragment_valid(dag, pairs, *got));
    } else {
      ++no;
    }
  }
  CHECK(yes > 0);
  CHECK(no > 0);
}

TEST_CASE("fast two-pair routine agrees with the general dp") {
  std::mt19937_64 rng(4242);
  for (int it = 0; it < 300; ++it) {
    int n = 4 + (int)(rng() % 9);  // up to 12
    Dag dag = random_dag(n, 0.3, rng);
    std::pair<int, int> p1{(int)(rng() % n), (int)(rng() % n)};
    std::pair<int, int> p2{(int)(rng() % n), (int)(rng() % n)};
    if (p1.first == p1.second) p1.second = (p1.second + 1) % n;
    if (p2.first == p2.second) p2.second = (p2.second + 1) % n;
    auto general = disjoint_paths_dag(dag, {p1, p2});
    auto fast = two_disjoint_paths_dag_fast(dag, p1, p2);
    CHECK(general.has_value() == fast.has_value());
    if (fast.has_value())
      CHECK(fragment_valid(dag, {p1, p2}, {(*fast)[0], (*fast)[1]}));
  }
}

TEST_CASE("dp handles layered dags from the built-in example") {
  Instance inst = builtin_fig1();
  PositionTable pt = compute_positions(inst);
  LayeredDag ld = build_layered_dag(inst.graph, pt, 0);
  auto [s, t] = inst.terminals[0];
  auto sol = disjoint_paths_dag(ld.dag, {{s, t}});
  REQUIRE(sol.has_value());
  CHECK((*sol)[0].front() == s);
  CHECK((*sol)[0].back() == t);
  CHECK((int)(*sol)[0].size() == pt.pos[t][0] + 1);
}

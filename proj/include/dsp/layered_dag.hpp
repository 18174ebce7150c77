#ifndef DSP_LAYERED_DAG_HPP
#define DSP_LAYERED_DAG_HPP

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "dsp/graph.hpp"

namespace dsp {

struct Dag {
  int n = 0;
  std::vector<std::vector<int>> out;  // sorted arc targets
  std::vector<int> topo_pos;          // rank of each vertex in a topo order

  // Kahn's algorithm; nullopt when the arc set has a cycle.
  static std::optional<Dag> make(int n,
                                 const std::vector<std::pair<int, int>>& arcs);
};

struct LayeredDag {
  Dag dag;
  int color = 0;
};

// Arcs (u,v) with {u,v} in E and pos[v][c] - pos[u][c] = 1; topological
// order by (pos[.][c], id).
LayeredDag build_layered_dag(const Graph& g, const PositionTable& positions,
                             int c);

struct DagDisjointInstance {
  Dag dag;
  std::vector<std::pair<int, int>> pairs;
};

// p pairwise internally disjoint s_i-t_i paths on a DAG, or nullopt.
// Interior vertices avoid all terminals and are used at most once.
std::optional<std::vector<Path>> disjoint_paths_dag(
    const Dag& dag, const std::vector<std::pair<int, int>>& pairs);

// O(n*m) special case for two pairs; agrees with disjoint_paths_dag.
std::optional<std::array<Path, 2>> two_disjoint_paths_dag_fast(
    const Dag& dag, std::pair<int, int> pair1, std::pair<int, int> pair2);

}  // namespace dsp

#endif

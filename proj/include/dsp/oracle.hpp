#ifndef DSP_ORACLE_HPP
#define DSP_ORACLE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "dsp/graph.hpp"

namespace dsp {

struct EnumLimits {
  int max_paths_per_pair = 100000;
  std::uint64_t max_nodes = 50'000'000;  // search tree node budget
};

enum class OracleStatus { kYes, kNo, kLimit };

struct OracleResult {
  OracleStatus status = OracleStatus::kLimit;
  std::optional<Solution> solution;
};

// All shortest s-t paths (as source-to-sink paths of the distance-layered
// DAG restricted to vertices between s and t), cut off after limit+1 so
// callers can detect truncation.
std::vector<Path> enumerate_shortest_paths(const Graph& g, int s, int t,
                                           int limit);

// Independent counting DP over the same layered DAG (test oracle for the
// enumeration; saturates at uint64 max).
std::uint64_t count_shortest_paths(const Graph& g, int s, int t);

// Exhaustive ground truth: backtracking over per-pair shortest-path
// choices, pairs ordered by ascending path count, incremental
// vertex-conflict pruning. kNo only on full exhaustion within limits.
OracleResult oracle_solve(const Instance& inst, const EnumLimits& limits = {});

// Second, deliberately naive strategy (plain tuple product, no pruning)
// used to countercheck oracle_solve on tiny instances.
OracleResult oracle_solve_product(const Instance& inst,
                                  const EnumLimits& limits = {});

}  // namespace dsp

#endif

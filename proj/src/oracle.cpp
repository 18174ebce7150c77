#include "dsp/oracle.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace dsp {

std::vector<Path> enumerate_shortest_paths(const Graph& g, int s, int t,
                                           int limit) {
  std::vector<Path> out;
  auto ds = bfs_distances(g, s);
  auto dt = bfs_distances(g, t);
  int d = ds[t];
  if (d == kUnreachable) return out;
  Path cur{s};
  // DFS over the layered DAG restricted to vertices on shortest s-t paths
  auto dfs = [&](auto&& self, int v) -> bool {
    if (v == t) {
      out.push_back(cur);
      return static_cast<int>(out.size()) <= limit;
    }
    for (int w : g.neighbors(v)) {
      if (ds[w] != ds[v] + 1) continue;
      if (dt[w] == kUnreachable || ds[w] + dt[w] != d) continue;
      cur.push_back(w);
      bool go_on = self(self, w);
      cur.pop_back();
      if (!go_on) return false;
    }
    return true;
  };
  dfs(dfs, s);
  return out;
}

std::uint64_t count_shortest_paths(const Graph& g, int s, int t) {
  auto ds = bfs_distances(g, s);
  int d = ds[t];
  if (d == kUnreachable) return 0;
  // layer-by-layer DP with saturating addition
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint64_t> ways(g.num_vertices(), 0);
  ways[s] = 1;
  std::vector<int> order(g.num_vertices());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return ds[a] < ds[b]; });
  for (int v : order) {
    if (ds[v] == kUnreachable || ways[v] == 0 || v == t) continue;
    for (int w : g.neighbors(v)) {
      if (ds[w] != ds[v] + 1) continue;
      std::uint64_t& acc = ways[w];
      acc = (kMax - acc < ways[v]) ? kMax : acc + ways[v];
    }
  }
  return ways[t];
}

namespace {

struct PairPaths {
  int pair_index;
  std::vector<Path> paths;
};

std::optional<std::vector<PairPaths>> list_pair_paths(
    const Instance& inst, const EnumLimits& limits, bool& trivially_no) {
  std::vector<PairPaths> lists(inst.k);
  for (int i = 0; i < inst.k; ++i) {
    auto [s, t] = inst.terminals[i];
    lists[i].pair_index = i;
    lists[i].paths = enumerate_shortest_paths(inst.graph, s, t,
                                              limits.max_paths_per_pair);
    if (static_cast<int>(lists[i].paths.size()) > limits.max_paths_per_pair)
      return std::nullopt;  // truncated: refuse to certify anything
    if (lists[i].paths.empty()) {
      trivially_no = true;
      return std::nullopt;
    }
  }
  return lists;
}

OracleResult finish(const std::vector<PairPaths>& lists,
                    const std::vector<const Path*>& chosen) {
  OracleResult res;
  Solution sol;
  sol.paths.resize(lists.size());
  for (size_t d = 0; d < lists.size(); ++d)
    sol.paths[lists[d].pair_index] = *chosen[d];
  res.status = OracleStatus::kYes;
  res.solution = std::move(sol);
  return res;
}

}  // namespace

OracleResult oracle_solve(const Instance& inst, const EnumLimits& limits) {
  OracleResult res;
  bool trivially_no = false;
  auto lists_opt = list_pair_paths(inst, limits, trivially_no);
  if (!lists_opt) {
    if (trivially_no) res.status = OracleStatus::kNo;
    return res;
  }
  auto lists = std::move(*lists_opt);
  std::stable_sort(lists.begin(), lists.end(),
                   [](const PairPaths& a, const PairPaths& b) {
                     return a.paths.size() < b.paths.size();
                   });

  std::vector<char> used(inst.graph.num_vertices(), 0);
  std::vector<const Path*> chosen(inst.k, nullptr);
  std::uint64_t nodes = 0;
  bool out_of_budget = false;
  auto dfs = [&](auto&& self, int depth) -> bool {
    if (depth == inst.k) return true;
    for (const Path& p : lists[depth].paths) {
      if (++nodes > limits.max_nodes) {
        out_of_budget = true;
        return false;
      }
      bool clash = false;
      for (int v : p)
        if (used[v]) {
          clash = true;
          break;
        }
      if (clash) continue;
      for (int v : p) used[v] = 1;
      chosen[depth] = &p;
      if (self(self, depth + 1)) return true;
      for (int v : p) used[v] = 0;
      if (out_of_budget) return false;
    }
    return false;
  };
  if (dfs(dfs, 0)) return finish(lists, chosen);
  if (out_of_budget) return res;
  res.status = OracleStatus::kNo;
  return res;
}

OracleResult oracle_solve_product(const Instance& inst,
                                  const EnumLimits& limits) {
  OracleResult res;
  bool trivially_no = false;
  auto lists_opt = list_pair_paths(inst, limits, trivially_no);
  if (!lists_opt) {
    if (trivially_no) res.status = OracleStatus::kNo;
    return res;
  }
  const auto& lists = *lists_opt;
  std::vector<size_t> pick(inst.k, 0);
  std::uint64_t nodes = 0;
  while (true) {
    if (++nodes > limits.max_nodes) return res;
    // leaf check only: no pruning by construction
    std::vector<char> used(inst.graph.num_vertices(), 0);
    bool clash = false;
    for (int i = 0; i < inst.k && !clash; ++i)
      for (int v : lists[i].paths[pick[i]]) {
        if (used[v]) {
          clash = true;
          break;
        }
        used[v] = 1;
      }
    if (!clash) {
      std::vector<const Path*> chosen(inst.k);
      for (int i = 0; i < inst.k; ++i) chosen[i] = &lists[i].paths[pick[i]];
      return finish(lists, chosen);
    }
    int j = inst.k - 1;
    while (j >= 0 && ++pick[j] == lists[j].paths.size()) pick[j--] = 0;
    if (j < 0) break;
  }
  res.status = OracleStatus::kNo;
  return res;
}

}  // namespace dsp

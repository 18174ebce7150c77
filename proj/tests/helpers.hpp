#ifndef DSP_TESTS_HELPERS_HPP
#define DSP_TESTS_HELPERS_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "dsp/graph.hpp"
#include "dsp/layered_dag.hpp"

namespace dsp::testing {

// Distance oracle for synthetic plane scenarios: positions are authored
// directly and the metric is the Chebyshev distance they induce.
class TableOracle : public DistanceOracle {
 public:
  explicit TableOracle(const PositionTable& pt) : pt_(&pt) {}
  int dist(int u, int v) const override {
    int best = 0;
    for (int c = 0; c < pt_->k; ++c)
      best = std::max(best, std::abs(pt_->pos[u][c] - pt_->pos[v][c]));
    return best;
  }

 private:
  const PositionTable* pt_;
};

// Position table from explicit 2-coordinate points, one vertex per point.
inline PositionTable make_plane(const std::vector<std::array<int, 2>>& pts) {
  PositionTable pt;
  pt.k = 2;
  for (const auto& p : pts) pt.pos.push_back({p[0], p[1]});
  return pt;
}

inline Path iota_path(int from, int count) {
  Path p(count);
  for (int i = 0; i < count; ++i) p[i] = from + i;
  return p;
}

// Seeded random DAG: arcs only forward along a shuffled vertex order.
inline Dag random_dag(int n, double arc_prob, std::mt19937_64& rng) {
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::bernoulli_distribution keep(arc_prob);
  std::vector<std::pair<int, int>> arcs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (keep(rng)) arcs.emplace_back(order[i], order[j]);
  auto dag = Dag::make(n, arcs);
  return *dag;  // forward arcs cannot cycle
}

inline std::vector<Path> all_dag_paths(const Dag& dag, int s, int t,
                                       int cap = 100000) {
  std::vector<Path> out;
  Path cur{s};
  std::function<void()> rec = [&] {
    if ((int)out.size() >= cap) return;
    int v = cur.back();
    if (v == t) {
      out.push_back(cur);
      return;
    }
    for (int w : dag.out[v]) {
      cur.push_back(w);
      rec();
      cur.pop_back();
    }
  };
  rec();
  return out;
}

// Exhaustive reference for disjoint_paths_dag: pick one s_i-t_i path per
// pair such that interiors avoid every terminal and are used at most once.
inline bool brute_disjoint_paths_dag(
    const Dag& dag, const std::vector<std::pair<int, int>>& pairs) {
  std::set<int> vend;
  for (auto [s, t] : pairs) {
    vend.insert(s);
    vend.insert(t);
  }
  std::vector<std::vector<Path>> options;
  for (auto [s, t] : pairs) {
    auto paths = all_dag_paths(dag, s, t, 20000);
    std::vector<Path> ok;
    for (auto& p : paths) {
      bool good = true;
      for (std::size_t i = 1; i + 1 < p.size(); ++i)
        if (vend.count(p[i])) good = false;
      if (good) ok.push_back(std::move(p));
    }
    if (ok.empty()) return false;
    options.push_back(std::move(ok));
  }
  std::vector<int> used(dag.n, 0);
  std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
    if (i == options.size()) return true;
    for (const auto& p : options[i]) {
      bool good = true;
      for (std::size_t j = 1; j + 1 < p.size(); ++j)
        if (used[p[j]]) good = false;
      if (!good) continue;
      for (std::size_t j = 1; j + 1 < p.size(); ++j) used[p[j]] = 1;
      if (rec(i + 1)) return true;
      for (std::size_t j = 1; j + 1 < p.size(); ++j) used[p[j]] = 0;
    }
    return false;
  };
  return rec(0);
}

// Structural check shared by the DP tests: endpoints, arc existence,
// interior distinctness, interiors off the terminal set.
inline bool fragment_valid(const Dag& dag,
                           const std::vector<std::pair<int, int>>& pairs,
                           const std::vector<Path>& paths) {
  if (paths.size() != pairs.size()) return false;
  std::set<int> vend;
  for (auto [s, t] : pairs) {
    vend.insert(s);
    vend.insert(t);
  }
  std::set<int> interior;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const Path& p = paths[i];
    if (p.empty() || p.front() != pairs[i].first || p.back() != pairs[i].second)
      return false;
    for (std::size_t j = 0; j + 1 < p.size(); ++j) {
      const auto& out = dag.out[p[j]];
      if (!std::binary_search(out.begin(), out.end(), p[j + 1])) return false;
    }
    for (std::size_t j = 1; j + 1 < p.size(); ++j) {
      if (vend.count(p[j])) return false;
      if (!interior.insert(p[j]).second) return false;
    }
  }
  return true;
}

}  // namespace dsp::testing

#endif

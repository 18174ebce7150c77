#include "dsp/layered_dag.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace dsp {

std::optional<Dag> Dag::make(int n,
                             const std::vector<std::pair<int, int>>& arcs) {
  Dag dag;
  dag.n = n;
  dag.out.assign(n, {});
  std::vector<int> indeg(n, 0);
  for (auto [u, v] : arcs) {
    dag.out[u].push_back(v);
    ++indeg[v];
  }
  for (auto& a : dag.out) std::sort(a.begin(), a.end());
  // Kahn's algorithm, smallest id first for a deterministic order
  std::vector<int> order;
  order.reserve(n);
  std::vector<int> ready;
  for (int v = 0; v < n; ++v)
    if (indeg[v] == 0) ready.push_back(v);
  std::make_heap(ready.begin(), ready.end(), std::greater<>());
  while (!ready.empty()) {
    std::pop_heap(ready.begin(), ready.end(), std::greater<>());
    int v = ready.back();
    ready.pop_back();
    order.push_back(v);
    for (int w : dag.out[v])
      if (--indeg[w] == 0) {
        ready.push_back(w);
        std::push_heap(ready.begin(), ready.end(), std::greater<>());
      }
  }
  if (static_cast<int>(order.size()) != n) return std::nullopt;  // cycle
  dag.topo_pos.assign(n, 0);
  for (int r = 0; r < n; ++r) dag.topo_pos[order[r]] = r;
  return dag;
}

LayeredDag build_layered_dag(const Graph& g, const PositionTable& positions,
                             int c) {
  LayeredDag ld;
  ld.color = c;
  int n = g.num_vertices();
  ld.dag.n = n;
  ld.dag.out.assign(n, {});
  for (auto [u, v] : g.edges()) {
    int pu = positions.pos[u][c], pv = positions.pos[v][c];
    if (pu == kUnreachable || pv == kUnreachable) continue;
    if (pv - pu == 1)
      ld.dag.out[u].push_back(v);
    else if (pu - pv == 1)
      ld.dag.out[v].push_back(u);
  }
  for (auto& a : ld.dag.out) std::sort(a.begin(), a.end());
  // topological order by (pos[.][c], id); arcs increase the coordinate
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    return std::pair(positions.pos[x][c], x) < std::pair(positions.pos[y][c], y);
  });
  ld.dag.topo_pos.assign(n, 0);
  for (int r = 0; r < n; ++r) ld.dag.topo_pos[order[r]] = r;
  return ld;
}

namespace {

struct VecHash {
  size_t operator()(const std::vector<int>& v) const {
    std::uint64_t h = 14695981039346656037ull;
    for (int x : v) {
      h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return static_cast<size_t>(h);
  }
};

}  // namespace

std::optional<std::vector<Path>> disjoint_paths_dag(
    const Dag& dag, const std::vector<std::pair<int, int>>& pairs) {
  int p_all = static_cast<int>(pairs.size());
  std::unordered_set<int> vend;
  for (auto [s, t] : pairs) {
    vend.insert(s);
    vend.insert(t);
  }
  auto is_end = [&](int v) { return vend.count(v) != 0; };

  // preprocessing: fix trivial pairs, keep their terminals in V^end
  std::vector<int> active;  // indices into pairs
  std::vector<Path> result(p_all);
  for (int i = 0; i < p_all; ++i) {
    auto [s, t] = pairs[i];
    if (s == t) {
      result[i] = {s};
    } else if (std::binary_search(dag.out[s].begin(), dag.out[s].end(), t)) {
      result[i] = {s, t};
    } else {
      if (dag.topo_pos[s] > dag.topo_pos[t]) return std::nullopt;
      active.push_back(i);
    }
  }
  int p = static_cast<int>(active.size());
  if (p >= dag.n) return std::nullopt;
  if (p == 0) return result;

  std::vector<int> src(p), dst(p);
  for (int j = 0; j < p; ++j) {
    src[j] = pairs[active[j]].first;
    dst[j] = pairs[active[j]].second;
  }

  // forward sparse exploration of the reachable true table entries;
  // parents[state] = (moved index, previous head) for reconstruction
  std::unordered_map<std::vector<int>, std::pair<int, int>, VecHash> parents;
  std::deque<std::vector<int>> queue;
  parents.emplace(src, std::pair{-1, -1});
  queue.push_back(src);
  std::vector<int> next;
  bool found = false;
  while (!queue.empty() && !found) {
    std::vector<int> state = queue.front();
    queue.pop_front();
    for (int l = 0; l < p && !found; ++l) {
      int x = state[l];
      if (x == dst[l]) continue;
      // the old head becomes an interior vertex unless it is the source;
      // heads can only coincide on terminals, which stay shareable
      if (x != src[l] && is_end(x)) continue;
      for (int w : dag.out[x]) {
        if (is_end(w) && w != src[l] && w != dst[l]) continue;
        if (dag.topo_pos[w] > dag.topo_pos[dst[l]]) continue;
        // advance only to a new topological maximum over the moved heads
        bool ok = true;
        for (int i = 0; i < p && ok; ++i) {
          if (i == l) continue;
          if (state[i] == w && !is_end(w)) ok = false;
          if (state[i] != src[i] && dag.topo_pos[state[i]] > dag.topo_pos[w])
            ok = false;
        }
        if (!ok) continue;
        next = state;
        next[l] = w;
        auto [it, inserted] = parents.emplace(next, std::pair{l, x});
        if (!inserted) continue;
        if (next == dst) {
          found = true;
          break;
        }
        queue.push_back(next);
      }
    }
  }
  if (!found && parents.find(dst) == parents.end()) return std::nullopt;

  // walk parent pointers back from the full target state
  std::vector<Path> rev(p);
  std::vector<int> state = dst;
  while (true) {
    auto [l, prev] = parents.at(state);
    if (l < 0) break;
    rev[l].push_back(state[l]);
    state[l] = prev;
  }
  for (int j = 0; j < p; ++j) {
    rev[j].push_back(src[j]);
    std::reverse(rev[j].begin(), rev[j].end());
    result[active[j]] = std::move(rev[j]);
  }
  return result;
}

std::optional<std::array<Path, 2>> two_disjoint_paths_dag_fast(
    const Dag& dag, std::pair<int, int> pair1, std::pair<int, int> pair2) {
  int n = dag.n;
  std::array<int, 2> src{pair1.first, pair2.first};
  std::array<int, 2> dst{pair1.second, pair2.second};
  std::array<int, 4> ends{src[0], dst[0], src[1], dst[1]};
  auto is_end = [&](int v) {
    return v == ends[0] || v == ends[1] || v == ends[2] || v == ends[3];
  };

  // fixed trivial pairs mirror the general preprocessing
  std::array<Path, 2> result;
  std::array<bool, 2> fixed{false, false};
  for (int i = 0; i < 2; ++i) {
    if (src[i] == dst[i]) {
      result[i] = {src[i]};
      fixed[i] = true;
    } else if (std::binary_search(dag.out[src[i]].begin(),
                                  dag.out[src[i]].end(), dst[i])) {
      result[i] = {src[i], dst[i]};
      fixed[i] = true;
    } else if (dag.topo_pos[src[i]] > dag.topo_pos[dst[i]]) {
      return std::nullopt;
    }
  }
  if (fixed[0] || fixed[1]) {
    // at most one nontrivial pair left: a plain reachability search with
    // interiors outside the terminal set
    for (int i = 0; i < 2; ++i) {
      if (fixed[i]) continue;
      std::vector<int> par(n, -2);
      std::deque<int> q{src[i]};
      par[src[i]] = -1;
      while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        if (u == dst[i]) break;
        if (u != src[i] && is_end(u)) continue;
        for (int w : dag.out[u])
          if (par[w] == -2 && (!is_end(w) || w == dst[i])) {
            par[w] = u;
            q.push_back(w);
          }
      }
      if (par[dst[i]] == -2) return std::nullopt;
      for (int v = dst[i]; v != -1; v = par[v]) result[i].push_back(v);
      std::reverse(result[i].begin(), result[i].end());
    }
    return result;
  }

  // dense pair-state BFS; parent packs (moved head, previous vertex)
  auto id = [n](int u, int v) { return static_cast<size_t>(u) * n + v; };
  std::vector<std::int32_t> par(static_cast<size_t>(n) * n, -2);
  std::deque<std::pair<int, int>> q;
  par[id(src[0], src[1])] = -1;
  q.emplace_back(src[0], src[1]);
  while (!q.empty()) {
    auto [u, v] = q.front();
    q.pop_front();
    if (u == dst[0] && v == dst[1]) break;
    std::array<int, 2> head{u, v};
    for (int l = 0; l < 2; ++l) {
      int x = head[l], other = head[1 - l];
      if (x == dst[l]) continue;
      if (x != src[l] && is_end(x)) continue;
      for (int w : dag.out[x]) {
        if (is_end(w) && w != src[l] && w != dst[l]) continue;
        if (dag.topo_pos[w] > dag.topo_pos[dst[l]]) continue;
        if (w == other && !is_end(w)) continue;
        if (other != src[1 - l] && dag.topo_pos[other] > dag.topo_pos[w])
          continue;
        int nu = l == 0 ? w : u, nv = l == 0 ? v : w;
        if (par[id(nu, nv)] != -2) continue;
        par[id(nu, nv)] = static_cast<std::int32_t>(l * n + x);
        q.emplace_back(nu, nv);
      }
    }
  }
  if (par[id(dst[0], dst[1])] == -2) return std::nullopt;
  std::array<int, 2> state = dst;
  std::array<Path, 2> rev;
  while (true) {
    std::int32_t code = par[id(state[0], state[1])];
    if (code == -1) break;
    int l = code / n, prev = code % n;
    rev[l].push_back(state[l]);
    state[l] = prev;
  }
  for (int i = 0; i < 2; ++i) {
    rev[i].push_back(src[i]);
    std::reverse(rev[i].begin(), rev[i].end());
    result[i] = std::move(rev[i]);
  }
  return result;
}

}  // namespace dsp

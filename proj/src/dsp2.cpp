#include "dsp/dsp2.hpp"

#include <algorithm>
#include <climits>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "dsp/geometry.hpp"

namespace dsp {

const char* dsp2_tag_name(Dsp2Tag tag) {
  switch (tag) {
    case Dsp2Tag::kAvoiding:
      return "avoiding";
    case Dsp2Tag::kNonCrossing:
      return "noncrossing";
    case Dsp2Tag::kFractional:
      return "fractional";
    case Dsp2Tag::kInteger:
      return "integer";
  }
  return "?";
}

namespace {

using P2 = std::array<int, 2>;

int linf(P2 a, P2 b) {
  return std::max(std::abs(a[0] - b[0]), std::abs(a[1] - b[1]));
}

bool in_rect(P2 x, P2 y, P2 z) { return linf(x, z) + linf(z, y) == linf(x, y); }

std::uint64_t pkey(P2 p) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(p[0])) << 32) |
         static_cast<std::uint32_t>(p[1]);
}

// Dense pair-state search as in two_disjoint_paths_dag_fast, but each pair
// advances only along its own area-restricted arc list.
std::optional<std::array<Path, 2>> two_disjoint_restricted(
    const Dag& dag, const std::array<std::vector<std::vector<int>>, 2>& outs,
    std::pair<int, int> pair1, std::pair<int, int> pair2) {
  int n = dag.n;
  std::array<int, 2> src{pair1.first, pair2.first};
  std::array<int, 2> dst{pair1.second, pair2.second};
  std::array<int, 4> ends{src[0], dst[0], src[1], dst[1]};
  auto is_end = [&](int v) {
    return v == ends[0] || v == ends[1] || v == ends[2] || v == ends[3];
  };

  std::array<Path, 2> result;
  std::array<bool, 2> fixed{false, false};
  for (int i = 0; i < 2; ++i) {
    const auto& out = outs[i][src[i]];
    if (src[i] == dst[i]) {
      result[i] = {src[i]};
      fixed[i] = true;
    } else if (std::binary_search(out.begin(), out.end(), dst[i])) {
      result[i] = {src[i], dst[i]};
      fixed[i] = true;
    } else if (dag.topo_pos[src[i]] > dag.topo_pos[dst[i]]) {
      return std::nullopt;
    }
  }
  if (fixed[0] || fixed[1]) {
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
        for (int w : outs[i][u])
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
      if (x == other) continue;
      for (int w : outs[l][x]) {
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

}  // namespace

std::optional<OrientedDag> oriented_crossing_dag(const Instance& inst,
                                                 const PositionTable& positions,
                                                 const Dsp2Case& guess) {
  if (guess.tag != Dsp2Tag::kFractional && guess.tag != Dsp2Tag::kInteger)
    throw std::invalid_argument(
        "oriented_crossing_dag: case has no DAG construction");
  const Graph& g = inst.graph;
  int n = g.num_vertices();

  std::vector<P2> pr(n);
  std::vector<char> has(n, 0);
  for (int v = 0; v < n; ++v) {
    int a = positions.pos[v][0], b = positions.pos[v][1];
    if (a == kUnreachable || b == kUnreachable) continue;
    pr[v] = {a, b};
    has[v] = 1;
  }
  P2 ps[2], pt[2];
  for (int i = 0; i < 2; ++i) {
    auto [s, t] = inst.terminals[i];
    if (!has[s] || !has[t]) return std::nullopt;
    ps[i] = pr[s];
    pt[i] = pr[t];
  }

  std::array<std::vector<std::pair<int, int>>, 2> arcs;
  if (guess.tag == Dsp2Tag::kFractional) {
    // corners of the unit square, assigned to the two diagonals
    P2 c = guess.corner;
    P2 cs[2], ct[2];
    if (!guess.flip) {
      cs[0] = {c[0], c[1]};
      ct[0] = {c[0] + 1, c[1] + 1};
      cs[1] = {c[0] + 1, c[1]};
      ct[1] = {c[0], c[1] + 1};
    } else {
      cs[0] = {c[0], c[1] + 1};
      ct[0] = {c[0] + 1, c[1]};
      cs[1] = {c[0], c[1]};
      ct[1] = {c[0] + 1, c[1] + 1};
    }
    for (auto [u, v] : g.edges()) {
      if (!has[u] || !has[v]) continue;
      for (int i = 0; i < 2; ++i) {
        int tail, head;
        if (pr[v][i] - pr[u][i] == 1)
          tail = u, head = v;
        else if (pr[u][i] - pr[v][i] == 1)
          tail = v, head = u;
        else
          continue;
        auto in_area = [&](P2 z) {
          return in_rect(ps[i], cs[i], z) || in_rect(ct[i], pt[i], z);
        };
        if (in_area(pr[tail]) && in_area(pr[head]))
          arcs[i].emplace_back(tail, head);
      }
    }
  } else {
    P2 p = guess.point;
    auto in_a = [&](int i, P2 z) { return in_rect(ps[i], p, z); };
    auto in_b = [&](int i, P2 z) { return in_rect(p, pt[i], z); };
    std::array<int, 2> owner{guess.owner_12, guess.owner_21};
    for (auto [u, v] : g.edges()) {
      if (!has[u] || !has[v]) continue;
      // edges inside a shared diagonal region A_i ∩ B_j belong to the
      // branch's chosen pair; everything else follows the area rule
      int region = -1;
      if (in_a(0, pr[u]) && in_b(1, pr[u]) && in_a(0, pr[v]) && in_b(1, pr[v]))
        region = 0;
      else if (in_a(1, pr[u]) && in_b(0, pr[u]) && in_a(1, pr[v]) &&
               in_b(0, pr[v]))
        region = 1;
      for (int i = 0; i < 2; ++i) {
        if (region >= 0 && owner[region] != i) continue;
        int tail, head;
        if (pr[v][i] - pr[u][i] == 1)
          tail = u, head = v;
        else if (pr[u][i] - pr[v][i] == 1)
          tail = v, head = u;
        else
          continue;
        if (region >= 0) {
          arcs[i].emplace_back(tail, head);
          continue;
        }
        P2 zt = pr[tail], zh = pr[head];
        bool fwd = in_a(i, zt) && !in_b(i, zt) && in_a(i, zh);
        bool bwd = in_b(i, zt) && in_b(i, zh) && !in_a(i, zh);
        if (fwd || bwd) arcs[i].emplace_back(tail, head);
      }
    }
  }

  std::vector<std::pair<int, int>> uni = arcs[0];
  uni.insert(uni.end(), arcs[1].begin(), arcs[1].end());
  std::sort(uni.begin(), uni.end());
  uni.erase(std::unique(uni.begin(), uni.end()), uni.end());
  auto dag = Dag::make(n, uni);
  if (!dag) return std::nullopt;

  OrientedDag od;
  od.dag = std::move(*dag);
  for (int i = 0; i < 2; ++i) {
    od.out[i].assign(n, {});
    for (auto [tail, head] : arcs[i]) od.out[i][tail].push_back(head);
    for (auto& lst : od.out[i]) std::sort(lst.begin(), lst.end());
  }
  return od;
}

namespace {

class Attempt {
 public:
  Attempt(const Instance& cur, Dsp2Trace* tr) : cur_(cur), tr_(tr) {}

  std::optional<Solution> run() {
    positions_ = compute_positions(cur_);
    int n = cur_.graph.num_vertices();
    for (int i = 0; i < 2; ++i) {
      auto [s, t] = cur_.terminals[i];
      if (positions_.pos[t][i] == kUnreachable) return std::nullopt;
      (void)s;
    }
    pr_.resize(n);
    has_.assign(n, 0);
    for (int v = 0; v < n; ++v) {
      int a = positions_.pos[v][0], b = positions_.pos[v][1];
      if (a == kUnreachable || b == kUnreachable) continue;
      pr_[v] = {a, b};
      has_[v] = 1;
      ++at_pos_[pkey(pr_[v])];
    }
    oracle_.emplace(cur_.graph);

    if (auto s = avoiding()) return s;
    if (auto s = noncrossing()) return s;
    if (auto s = fractional()) return s;
    if (auto s = integer()) return s;
    if (auto s = sweep()) return s;
    return std::nullopt;
  }

 private:
  std::optional<Path> bfs_path(int s, int t) const {
    const Graph& g = cur_.graph;
    std::vector<int> par(g.num_vertices(), -2);
    std::deque<int> q{s};
    par[s] = -1;
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      if (u == t) break;
      for (int w : g.neighbors(u))
        if (par[w] == -2) {
          par[w] = u;
          q.push_back(w);
        }
    }
    if (par[t] == -2) return std::nullopt;
    Path p;
    for (int v = t; v != -1; v = par[v]) p.push_back(v);
    std::reverse(p.begin(), p.end());
    return p;
  }

  static std::optional<Path> arc_bfs(const std::vector<std::vector<int>>& out,
                                     int s, int t) {
    int n = static_cast<int>(out.size());
    std::vector<int> par(n, -2);
    std::deque<int> q{s};
    par[s] = -1;
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      if (u == t) break;
      for (int w : out[u])
        if (par[w] == -2) {
          par[w] = u;
          q.push_back(w);
        }
    }
    if (par[t] == -2) return std::nullopt;
    Path p;
    for (int v = t; v != -1; v = par[v]) p.push_back(v);
    std::reverse(p.begin(), p.end());
    return p;
  }

  std::optional<Solution> accept(Solution sol, const Dsp2Case& c) {
    if (!verify_solution(cur_, positions_, sol).ok) return std::nullopt;
    tr_->found = c;
    return sol;
  }

  std::optional<Solution> avoiding() {
    ++tr_->guesses;
    if (!pairs_avoiding(cur_.terminals[0], cur_.terminals[1], {0, 1},
                        positions_, *oracle_))
      return std::nullopt;
    Solution sol;
    for (int i = 0; i < 2; ++i) {
      auto p = bfs_path(cur_.terminals[i].first, cur_.terminals[i].second);
      if (!p) return std::nullopt;
      sol.paths.push_back(std::move(*p));
    }
    Dsp2Case c;
    c.tag = Dsp2Tag::kAvoiding;
    return accept(std::move(sol), c);
  }

  std::optional<Solution> noncrossing() {
    int n = cur_.graph.num_vertices();
    for (int host = 0; host < 2; ++host) {
      int a = host, b = 1 - host;
      auto [sh, th] = cur_.terminals[host];
      auto [qs, qt] = cur_.terminals[1 - host];
      if (positions_.pos[qs][b] > positions_.pos[qt][b]) std::swap(qs, qt);
      if (!has_[qs] || !has_[qt]) continue;
      for (int v = 0; v < n; ++v) {
        if (!has_[v]) continue;
        bool aligned =
            (pr_[v][a] == pr_[qs][a] && pr_[v][b] < pr_[qs][b]) ||
            (pr_[v][a] == pr_[qt][a] && pr_[v][b] > pr_[qt][b]);
        if (!aligned) continue;
        if (!between(*oracle_, sh, v, th)) continue;
        ++tr_->guesses;
        auto front = bfs_path(sh, v);
        auto back = bfs_path(v, th);
        auto other = bfs_path(cur_.terminals[1 - host].first,
                              cur_.terminals[1 - host].second);
        if (!front || !back || !other) continue;
        Path split = std::move(*front);
        split.insert(split.end(), back->begin() + 1, back->end());
        Solution sol;
        sol.paths.resize(2);
        sol.paths[host] = std::move(split);
        sol.paths[1 - host] = std::move(*other);
        Dsp2Case c;
        c.tag = Dsp2Tag::kNonCrossing;
        c.delta = v;
        c.host = host;
        if (auto res = accept(std::move(sol), c)) return res;
      }
    }
    return std::nullopt;
  }

  bool corner_exists(P2 p) const { return at_pos_.count(pkey(p)) != 0; }

  std::optional<Solution> fractional() {
    int n = cur_.graph.num_vertices();
    for (int v = 0; v < n; ++v) {
      if (!has_[v]) continue;
      P2 c = pr_[v];
      // all four corners of the unit square must be realized positions
      if (!corner_exists(c) || !corner_exists({c[0] + 1, c[1]}) ||
          !corner_exists({c[0], c[1] + 1}) ||
          !corner_exists({c[0] + 1, c[1] + 1}))
        continue;
      for (int flip = 0; flip < 2; ++flip) {
        ++tr_->guesses;
        Dsp2Case g;
        g.tag = Dsp2Tag::kFractional;
        g.corner = c;
        g.flip = flip != 0;
        auto od = oriented_crossing_dag(cur_, positions_, g);
        if (!od) continue;
        auto p0 = arc_bfs(od->out[0], cur_.terminals[0].first,
                          cur_.terminals[0].second);
        auto p1 = arc_bfs(od->out[1], cur_.terminals[1].first,
                          cur_.terminals[1].second);
        if (!p0 || !p1) continue;
        Solution sol;
        sol.paths = {std::move(*p0), std::move(*p1)};
        if (auto res = accept(std::move(sol), g)) return res;
      }
    }
    return std::nullopt;
  }

  std::optional<Solution> integer() {
    int n = cur_.graph.num_vertices();
    P2 ps[2], pt[2];
    for (int i = 0; i < 2; ++i) {
      ps[i] = pr_[cur_.terminals[i].first];
      pt[i] = pr_[cur_.terminals[i].second];
    }
    std::unordered_set<std::uint64_t> seen;
    for (int v = 0; v < n; ++v) {
      if (!has_[v]) continue;
      P2 p = pr_[v];
      if (!seen.insert(pkey(p)).second) continue;
      // both solution paths carry a vertex at the crossing position, so a
      // single-vertex position cannot host an integer crossing
      if (at_pos_.at(pkey(p)) < 2) continue;
      if (!in_rect(ps[0], pt[0], p) || !in_rect(ps[1], pt[1], p)) continue;
      for (int br = 0; br < 4; ++br) {
        ++tr_->guesses;
        Dsp2Case g;
        g.tag = Dsp2Tag::kInteger;
        g.point = p;
        g.owner_12 = br & 1;
        g.owner_21 = (br >> 1) & 1;
        auto od = oriented_crossing_dag(cur_, positions_, g);
        if (!od) continue;
        if (auto two = two_disjoint_paths_dag_fast(od->dag, cur_.terminals[0],
                                                   cur_.terminals[1])) {
          Solution sol;
          sol.paths = {std::move((*two)[0]), std::move((*two)[1])};
          if (auto res = accept(std::move(sol), g)) return res;
        }
        if (auto two = two_disjoint_restricted(od->dag, od->out,
                                               cur_.terminals[0],
                                               cur_.terminals[1])) {
          Solution sol;
          sol.paths = {std::move((*two)[0]), std::move((*two)[1])};
          if (auto res = accept(std::move(sol), g)) return res;
        }
      }
    }
    return std::nullopt;
  }

  // ---- completeness backstop: level-synchronized joint search ----
  //
  // Both solution paths are monotone in the level L(v) = pos0(v) + pos1(v)
  // (every step adds +1 to the own coordinate and at least -1 to the other),
  // and two vertices can only coincide when level and 0-coordinate agree.
  // Within one level a pair-1 path moves strictly right along the
  // anti-diagonal and a pair-2 path strictly left, each in one contiguous
  // run, so resolving the two runs of every level jointly, bottom-up,
  // catches every possible collision. The case guesses above are fast
  // paths; this search covers solutions they cannot express, e.g. two
  // paths traversing a shared crossing diagonal in opposite directions,
  // where no single-owner orientation of the diagonal edges works.

  int level_of(int v) const { return pr_[v][0] + pr_[v][1]; }

  std::vector<int> run_closure(
      int start, const std::vector<std::vector<int>>& within) const {
    std::vector<int> out{start};
    std::vector<char> seen(cur_.graph.num_vertices(), 0);
    seen[start] = 1;
    for (std::size_t i = 0; i < out.size(); ++i)
      for (int w : within[out[i]])
        if (!seen[w]) {
          seen[w] = 1;
          out.push_back(w);
        }
    return out;
  }

  Path run_chain(int start, int goal,
                 const std::vector<std::vector<int>>& within) const {
    std::vector<int> par(cur_.graph.num_vertices(), -2);
    par[start] = -1;
    std::deque<int> q{start};
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      if (u == goal) break;
      for (int w : within[u])
        if (par[w] == -2) {
          par[w] = u;
          q.push_back(w);
        }
    }
    Path p;
    for (int v = goal; v != -1; v = par[v]) p.push_back(v);
    std::reverse(p.begin(), p.end());
    return p;
  }

  // Feasible run endpoints (f1, f2) at level lam for the entering heads a
  // (pair 1) and b (pair 2); -1 marks a side that does not enter this level
  // and -2 in the result a side that did not run. With fix1/fix2 set, only
  // that endpoint pair is admitted and the runs are emitted in path order.
  std::vector<std::pair<int, int>> level_runs(int lam, int a, int b, int fix1,
                                              int fix2, Path* run1,
                                              Path* run2) {
    const int n = cur_.graph.num_vertices();
    if (b < 0) {
      if (fix1 >= 0) {
        *run1 = run_chain(a, fix1, lvl_within_[0]);
        return {{fix1, -2}};
      }
      std::vector<std::pair<int, int>> out;
      for (int f1 : run_closure(a, lvl_within_[0])) out.emplace_back(f1, -2);
      return out;
    }
    if (a < 0) {
      if (fix2 >= 0) {
        *run2 = run_chain(b, fix2, lvl_within_[1]);
        return {{-2, fix2}};
      }
      std::vector<std::pair<int, int>> out;
      for (int f2 : run_closure(b, lvl_within_[1])) out.emplace_back(-2, f2);
      return out;
    }
    if (lvl_single_[lam]) {
      // one vertex per column: overlapping runs always clash, disjoint
      // column intervals admit any pair of chains
      if (fix1 >= 0) {
        *run1 = run_chain(a, fix1, lvl_within_[0]);
        *run2 = run_chain(b, fix2, lvl_within_[1]);
        return {{fix1, fix2}};
      }
      std::vector<std::pair<int, int>> out;
      for (int f1 : run_closure(a, lvl_within_[0]))
        for (int f2 : run_closure(b, lvl_within_[1]))
          if (pr_[f1][0] < pr_[f2][0] || pr_[b][0] < pr_[a][0])
            out.emplace_back(f1, f2);
      return out;
    }

    // joint sweep over the columns of the level; the pair-2 run is built
    // against the sweep (its path order is right to left), so the state
    // carries its sweep-side start, which is the vertex that exits upward
    const auto& verts = lvl_bucket_[lam];
    int cmin = pr_[a][0], cmax = pr_[a][0];
    for (int v : verts) {
      cmin = std::min(cmin, pr_[v][0]);
      cmax = std::max(cmax, pr_[v][0]);
    }
    const int cols = cmax - cmin + 1;
    std::vector<std::vector<int>> colv(cols);
    for (int v : verts) colv[pr_[v][0] - cmin].push_back(v);
    const int ca = pr_[a][0], cb = pr_[b][0];
    const std::int64_t n2 = static_cast<std::int64_t>(n) * n;
    const std::int64_t span = n2 + n + 1;
    // side-1 code: -1 waiting, v running, n+f closed; side-2 code: -1 not
    // started, f2*n+v running, n*n+f2 finished
    auto pack = [span](std::int64_t c1, std::int64_t c2) {
      return (c1 + 1) * span + (c2 + 1);
    };
    std::vector<std::unordered_map<std::int64_t, std::int64_t>> layer(cols +
                                                                      2);
    layer[0].emplace(pack(-1, -1), -99);
    for (int step = 1; step <= cols + 1; ++step) {
      int x = cmin + step - 1;
      const std::vector<int>* here = step <= cols ? &colv[step - 1] : nullptr;
      for (const auto& [key, ignore] : layer[step - 1]) {
        (void)ignore;
        std::int64_t c1 = key / span - 1, c2 = key % span - 1;
        std::vector<std::int64_t> o1;
        if (c1 < 0) {
          if (x == ca)
            o1.push_back(a);
          else if (x < ca)
            o1.push_back(-1);
        } else if (c1 < n) {
          for (int w : lvl_within_[0][static_cast<int>(c1)]) o1.push_back(w);
          if (fix1 < 0 || c1 == fix1) o1.push_back(n + c1);
        } else {
          o1.push_back(c1);
        }
        std::vector<std::int64_t> o2;
        if (c2 < 0) {
          if (x < cb) {
            o2.push_back(-1);
            if (here)
              for (int w : *here)
                if (lvl_on_[1][w] && (fix2 < 0 || w == fix2))
                  o2.push_back(static_cast<std::int64_t>(w) * n + w);
          } else if (x == cb) {
            if (fix2 < 0 || b == fix2)
              o2.push_back(static_cast<std::int64_t>(b) * n + b);
          }
        } else if (c2 < n2) {
          int f2v = static_cast<int>(c2 / n), v = static_cast<int>(c2 % n);
          if (v == b) {
            o2.push_back(n2 + f2v);
          } else if (here) {
            for (int w : *here) {
              if (!lvl_on_[1][w]) continue;
              for (int z : lvl_within_[1][w])
                if (z == v)
                  o2.push_back(static_cast<std::int64_t>(f2v) * n + w);
            }
          }
        } else {
          o2.push_back(c2);
        }
        for (std::int64_t d1 : o1)
          for (std::int64_t d2 : o2) {
            int occ1 = d1 >= 0 && d1 < n ? static_cast<int>(d1) : -1;
            int occ2 =
                d2 >= 0 && d2 < n2 ? static_cast<int>(d2 % n) : -1;
            if (occ1 >= 0 && occ1 == occ2) continue;
            layer[step].emplace(pack(d1, d2), key);
          }
      }
    }
    if (fix1 >= 0) {
      std::int64_t goal = pack(n + fix1, n2 + fix2);
      if (!layer[cols + 1].count(goal)) return {};
      std::vector<int> occ1s, occ2s;
      std::int64_t key = goal;
      for (int step = cols + 1; step >= 1; --step) {
        std::int64_t c1 = key / span - 1, c2 = key % span - 1;
        if (c1 >= 0 && c1 < n) occ1s.push_back(static_cast<int>(c1));
        if (c2 >= 0 && c2 < n2) occ2s.push_back(static_cast<int>(c2 % n));
        key = layer[step].at(key);
      }
      std::reverse(occ1s.begin(), occ1s.end());
      *run1 = Path(occ1s.begin(), occ1s.end());
      *run2 = Path(occ2s.begin(), occ2s.end());
      return {{fix1, fix2}};
    }
    std::set<std::pair<int, int>> uniq;
    for (const auto& [key, ignore] : layer[cols + 1]) {
      (void)ignore;
      std::int64_t c1 = key / span - 1, c2 = key % span - 1;
      if (c1 < n || c2 < n2) continue;
      uniq.emplace(static_cast<int>(c1 - n), static_cast<int>(c2 - n2));
    }
    return {uniq.begin(), uniq.end()};
  }

  Dsp2Case classify(const Solution& sol) const {
    Dsp2Case c;
    CrossingRecord rec = crossing_vertices(sol.paths[0], sol.paths[1], 0, 1,
                                           positions_, *oracle_);
    if (rec.crossing && rec.alpha_p) {
      c.tag = Dsp2Tag::kInteger;
      c.point = {pr_[*rec.alpha_p][0], pr_[*rec.alpha_p][1]};
    } else if (rec.crossing) {
      c.tag = Dsp2Tag::kFractional;
      c.corner = {static_cast<int>(rec.seg_lo[0] / 2),
                  static_cast<int>(rec.seg_lo[1] / 2)};
    } else if (rec.delta_p || rec.delta_q) {
      c.tag = Dsp2Tag::kNonCrossing;
      c.delta = rec.delta_p ? *rec.delta_p : *rec.delta_q;
      c.host = rec.delta_p ? 0 : 1;
    } else {
      c.tag = Dsp2Tag::kAvoiding;
    }
    return c;
  }

  std::optional<Solution> sweep() {
    const int n = cur_.graph.num_vertices();
    ++tr_->guesses;
    std::array<int, 2> src{cur_.terminals[0].first, cur_.terminals[1].first};
    std::array<int, 2> dst{cur_.terminals[0].second,
                           cur_.terminals[1].second};
    for (int i = 0; i < 2; ++i) {
      lvl_on_[i].assign(n, 0);
      lvl_within_[i].assign(n, {});
      lvl_up_[i].assign(n, {});
      for (int v = 0; v < n; ++v)
        lvl_on_[i][v] = has_[v] && between(*oracle_, src[i], v, dst[i]);
      if (!lvl_on_[i][dst[i]]) return std::nullopt;
    }
    for (auto [u, v] : cur_.graph.edges()) {
      if (!has_[u] || !has_[v]) continue;
      for (int i = 0; i < 2; ++i) {
        int tail, head;
        if (pr_[v][i] - pr_[u][i] == 1)
          tail = u, head = v;
        else if (pr_[u][i] - pr_[v][i] == 1)
          tail = v, head = u;
        else
          continue;
        if (!lvl_on_[i][tail] || !lvl_on_[i][head]) continue;
        (level_of(head) == level_of(tail) ? lvl_within_ : lvl_up_)[i][tail]
            .push_back(head);
      }
    }
    int top = 0;
    for (int v = 0; v < n; ++v)
      if (lvl_on_[0][v] || lvl_on_[1][v]) top = std::max(top, level_of(v));
    lvl_bucket_.assign(top + 1, {});
    for (int v = 0; v < n; ++v)
      if (lvl_on_[0][v] || lvl_on_[1][v])
        lvl_bucket_[level_of(v)].push_back(v);
    lvl_single_.assign(top + 1, 1);
    for (int lam = 0; lam <= top; ++lam) {
      std::unordered_set<int> cols;
      for (int v : lvl_bucket_[lam])
        if (!cols.insert(pr_[v][0]).second) {
          lvl_single_[lam] = 0;
          break;
        }
    }

    constexpr int kDoneV = -1;
    struct Rec {
      int pa, pb, f1, f2;
    };
    std::map<std::pair<int, int>, Rec> par;
    std::deque<std::pair<int, int>> q;
    const std::pair<int, int> root{src[0], src[1]};
    par.emplace(root, Rec{-9, -9, -9, -9});
    q.push_back(root);
    bool found = false;
    auto heads = [&](int a, int b) {
      long long la = a == kDoneV ? LLONG_MAX : level_of(a);
      long long lb = b == kDoneV ? LLONG_MAX : level_of(b);
      int lam = static_cast<int>(std::min(la, lb));
      return std::array<int, 3>{lam, la == lam ? a : -1, lb == lam ? b : -1};
    };
    while (!q.empty()) {
      auto [a, b] = q.front();
      q.pop_front();
      if (a == kDoneV && b == kDoneV) {
        found = true;
        break;
      }
      auto [lam, ea, eb] = heads(a, b);
      auto exit_list = [&](int side, int f, int entry) {
        std::vector<int> out;
        if (f == -2) {
          out.push_back(entry);
          return out;
        }
        if (f == dst[side]) out.push_back(kDoneV);
        for (int w : lvl_up_[side][f]) out.push_back(w);
        return out;
      };
      for (auto [f1, f2] :
           level_runs(lam, ea, eb, -1, -1, nullptr, nullptr)) {
        for (int w1 : exit_list(0, f1, a))
          for (int w2 : exit_list(1, f2, b)) {
            if (w1 == w2 && w1 != kDoneV) continue;
            std::pair<int, int> key{w1, w2};
            if (par.count(key)) continue;
            par.emplace(key, Rec{a, b, f1, f2});
            q.push_back(key);
          }
      }
    }
    if (!found) return std::nullopt;

    std::vector<Rec> steps;
    std::pair<int, int> cur{kDoneV, kDoneV};
    while (cur != root) {
      const Rec& r = par.at(cur);
      steps.push_back(r);
      cur = {r.pa, r.pb};
    }
    std::reverse(steps.begin(), steps.end());
    Solution sol;
    sol.paths.resize(2);
    for (const Rec& r : steps) {
      auto [lam, ea, eb] = heads(r.pa, r.pb);
      Path run1, run2;
      level_runs(lam, r.f1 == -2 ? -1 : ea, r.f2 == -2 ? -1 : eb, r.f1, r.f2,
                 &run1, &run2);
      sol.paths[0].insert(sol.paths[0].end(), run1.begin(), run1.end());
      sol.paths[1].insert(sol.paths[1].end(), run2.begin(), run2.end());
    }
    Dsp2Case c = classify(sol);
    return accept(std::move(sol), c);
  }

  const Instance& cur_;
  Dsp2Trace* tr_;
  PositionTable positions_;
  std::vector<P2> pr_;
  std::vector<char> has_;
  std::unordered_map<std::uint64_t, int> at_pos_;
  std::optional<BfsDistanceOracle> oracle_;
  std::array<std::vector<char>, 2> lvl_on_;
  std::array<std::vector<std::vector<int>>, 2> lvl_within_, lvl_up_;
  std::vector<std::vector<int>> lvl_bucket_;
  std::vector<char> lvl_single_;
};

}  // namespace

std::optional<Solution> solve_dsp2(const Instance& inst, Dsp2Trace* trace) {
  if (inst.k != 2) throw std::invalid_argument("solve_dsp2: k must be 2");
  Dsp2Trace local;
  Dsp2Trace* tr = trace ? trace : &local;
  *tr = {};
  PositionTable pos0 = compute_positions(inst);
  for (int sw = 0; sw < 2; ++sw) {
    Instance cur = inst;
    if (sw) std::swap(cur.terminals[1].first, cur.terminals[1].second);
    Attempt attempt(cur, tr);
    auto sol = attempt.run();
    if (!sol) continue;
    if (sw) std::reverse(sol->paths[1].begin(), sol->paths[1].end());
    if (!verify_solution(inst, pos0, *sol).ok) continue;
    tr->swapped = sw != 0;
    return sol;
  }
  return std::nullopt;
}

}  // namespace dsp

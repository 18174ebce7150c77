#include "dsp/kdsp.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cassert>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "dsp/geometry.hpp"

namespace dsp {

namespace {

struct VecHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (int x : v) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};

// Lazy DFS over the guess components: one joint decision per unordered pair
// of colors (the 2D crossing shape seen from both sides), then one decision
// per longer permutation whose prerequisite entries are defined. Candidate
// vertices are pruned by colored-pair and betweenness constraints; every
// marble must stay pairwise colored with the rest of its path's marbles.
struct Enumerator {
  const Instance& inst;
  const PositionTable& pt;
  const DistanceOracle& d;
  const std::function<bool(const CrossingGuess&)>& visit;
  long long budget;
  int k, n;

  std::vector<std::set<int>> T;
  std::map<PermKey, std::pair<int, int>> ends;
  std::vector<std::pair<int, int>> pairlist;  // unordered color pairs, i < j
  std::vector<PermKey> deep;                  // permutations of length >= 3
  long long leaves = 0;
  long long emitted = 0;
  bool stopped = false;
  bool truncated = false;
  std::set<std::string> seen;
  static constexpr std::size_t kSeenCap = 300000;

  Enumerator(const Instance& inst_, const PositionTable& pt_,
             const DistanceOracle& d_, long long budget_,
             const std::function<bool(const CrossingGuess&)>& visit_)
      : inst(inst_), pt(pt_), d(d_), visit(visit_), budget(budget_),
        k(inst_.k), n(inst_.graph.num_vertices()), T(k) {
    for (int i = 0; i < k; ++i) {
      T[i] = {inst.terminals[i].first, inst.terminals[i].second};
      ends[{i}] = inst.terminals[i];
    }
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) pairlist.push_back({i, j});
    for (const PermKey& sig : all_perm_keys(k))
      if (sig.size() >= 3) deep.push_back(sig);
  }

  int p(int v, int c) const { return pt.pos[v][c]; }

  bool colored_in(int u, int v, const std::vector<int>& colors) const {
    int dd = d.dist(u, v);
    if (dd == kUnreachable) return false;
    for (int c : colors) {
      int pu = p(u, c), pv = p(v, c);
      if (pu == kUnreachable || pv == kUnreachable) return false;
      if (std::abs(pu - pv) != dd) return false;
    }
    return true;
  }

  struct Mod {
    std::vector<std::pair<int, int>> added;  // (host, vertex)
  };

  void undo(Mod& m) {
    for (auto& [h, v] : m.added) T[h].erase(v);
    m.added.clear();
  }

  // Insert a marble on the given path, restricted to the interval [lo, hi];
  // rejects vertices breaking the marble-path coloring property.
  bool add(Mod& m, int host, int v, int lo, int hi) {
    if (v < 0 || v >= n) return false;
    if (p(v, host) == kUnreachable) return false;
    if (!between(d, lo, v, hi)) return false;
    for (int u : T[host])
      if (!colored_in(u, v, {host})) return false;
    if (T[host].insert(v).second) m.added.push_back({host, v});
    return true;
  }

  // Everything needed to enumerate one 2D crossing shape: the hosting paths,
  // the plane coordinates (a is always hostp's own color), the marble
  // intervals on both paths, the colors the endpoint pair must carry, and
  // the permutation keys receiving the endpoints.
  struct Ctx {
    int hostp, hostq;
    int a, b;
    int plo, phi;  // ordered by pos^a
    int qlo, qhi;  // ordered by pos^{hostq}
    std::vector<int> phic;
    PermKey key;
    PermKey rev;  // set for pair decisions only
  };

  void run() { rec(0); }

  void rec(std::size_t di) {
    if (stopped || truncated) return;
    std::size_t np = pairlist.size();
    if (di == np + deep.size()) {
      emit();
      return;
    }
    if (di < np) {
      auto [i, j] = pairlist[di];
      Ctx c;
      c.hostp = j;
      c.hostq = i;
      c.a = j;
      c.b = i;
      c.plo = inst.terminals[j].first;
      c.phi = inst.terminals[j].second;
      c.qlo = inst.terminals[i].first;
      c.qhi = inst.terminals[i].second;
      c.phic = {i, j};
      c.key = {i, j};
      c.rev = {j, i};
      shapes(c, di);
      return;
    }
    const PermKey& sig = deep[di - np];
    int h = static_cast<int>(sig.size());
    int lh = sig[h - 1], lh1 = sig[h - 2], l1 = sig[0];
    PermKey start(sig.begin(), sig.end() - 1);
    PermKey tail(sig.begin() + 1, sig.end());
    PermKey last2{lh, lh1};
    auto is = ends.find(start), ie = ends.find(tail), il = ends.find(last2);
    if (is == ends.end() || ie == ends.end() || il == ends.end()) {
      rec(di + 1);
      return;
    }
    auto [u1, w1] = is->second;
    auto [u2, w2] = il->second;
    int qlo = (p(u1, lh1) >= p(u2, lh1)) ? u1 : u2;
    int qhi = (p(w1, lh1) <= p(w2, lh1)) ? w1 : w2;
    if (p(qlo, lh1) > p(qhi, lh1)) {
      rec(di + 1);
      return;
    }
    Ctx c;
    c.hostp = lh;
    c.hostq = lh1;
    c.a = lh;
    c.b = l1;
    c.plo = ie->second.first;
    c.phi = ie->second.second;
    c.qlo = qlo;
    c.qhi = qhi;
    c.phic = sig;
    std::sort(c.phic.begin(), c.phic.end());
    c.key = sig;
    shapes(c, di);
  }

  void shapes(const Ctx& c, std::size_t di) {
    none_shapes(c, di);
    if (stopped || truncated) return;
    lattice_shapes(c, di);
    if (stopped || truncated) return;
    fractional_shapes(c, di);
  }

  // No crossing: optionally a split vertex on either path, aligned with an
  // interval endpoint of the other in the plane. The all-undefined choice
  // comes first, so the trivial guess leads the stream.
  void none_shapes(const Ctx& c, std::size_t di) {
    std::vector<int> dps{-1}, dqs{-1};
    int qs = c.qlo, qt = c.qhi;
    if (p(qs, c.b) > p(qt, c.b)) std::swap(qs, qt);
    for (int v = 0; v < n; ++v) {
      if (p(v, c.a) == kUnreachable || p(v, c.b) == kUnreachable) continue;
      if ((p(v, c.a) == p(qs, c.a) && p(v, c.b) < p(qs, c.b)) ||
          (p(v, c.a) == p(qt, c.a) && p(v, c.b) > p(qt, c.b)))
        dps.push_back(v);
    }
    for (int v = 0; v < n; ++v) {
      if (p(v, c.a) == kUnreachable || p(v, c.b) == kUnreachable) continue;
      if ((p(v, c.b) == p(c.plo, c.b) && p(v, c.a) < p(c.plo, c.a)) ||
          (p(v, c.b) == p(c.phi, c.b) && p(v, c.a) > p(c.phi, c.a)))
        dqs.push_back(v);
    }
    for (int dp : dps) {
      Mod m1;
      bool ok1 = dp == -1 || add(m1, c.hostp, dp, c.plo, c.phi);
      if (ok1) {
        for (int dq : dqs) {
          Mod m2;
          bool ok2 = dq == -1 || add(m2, c.hostq, dq, c.qlo, c.qhi);
          if (ok2) rec(di + 1);
          undo(m2);
          if (stopped || truncated) break;
        }
      }
      undo(m1);
      if (stopped || truncated) return;
    }
  }

  // Predecessor/successor options next to a crossing endpoint: undefined
  // when the endpoint is the interval boundary, otherwise the graph
  // neighbors one step away along the path's own coordinate.
  std::vector<int> side_opts(int vert, int boundary, int axis, int dir) const {
    if (vert == boundary) return {-1};
    std::vector<int> out;
    for (int u : inst.graph.neighbors(vert))
      if (p(u, axis) != kUnreachable && p(u, axis) == p(vert, axis) + dir)
        out.push_back(u);
    return out;
  }

  // Crossing along lattice points: first/last crossing vertices on both
  // paths with matching plane projections, plus their path neighbors.
  void lattice_shapes(const Ctx& c, std::size_t di) {
    for (int va = 0; va < n; ++va) {
      if (p(va, c.a) == kUnreachable || p(va, c.b) == kUnreachable) continue;
      for (int vo = 0; vo < n; ++vo) {
        if (p(vo, c.a) == kUnreachable || p(vo, c.b) == kUnreachable) continue;
        if (p(va, c.a) > p(vo, c.a)) continue;
        if (!colored_in(va, vo, c.phic)) continue;
        Mod mp;
        if (add(mp, c.hostp, va, c.plo, c.phi) &&
            add(mp, c.hostp, vo, c.plo, c.phi))
          lattice_q_side(c, di, va, vo);
        undo(mp);
        if (stopped || truncated) return;
      }
    }
  }

  void lattice_q_side(const Ctx& c, std::size_t di, int va, int vo) {
    std::array<int, 2> A{p(va, c.a), p(va, c.b)};
    std::array<int, 2> O{p(vo, c.a), p(vo, c.b)};
    std::vector<std::pair<int, int>> qpairs;
    if (A == O) {
      for (int v = 0; v < n; ++v)
        if (p(v, c.a) == A[0] && p(v, c.b) == A[1]) qpairs.push_back({v, v});
    } else {
      for (int x = 0; x < n; ++x) {
        if (p(x, c.a) != A[0] || p(x, c.b) != A[1]) continue;
        for (int y = 0; y < n; ++y) {
          if (p(y, c.a) != O[0] || p(y, c.b) != O[1]) continue;
          if (p(x, c.hostq) == p(y, c.hostq)) continue;
          qpairs.push_back(p(x, c.hostq) < p(y, c.hostq)
                               ? std::make_pair(x, y)
                               : std::make_pair(y, x));
        }
      }
    }
    for (auto [qa, qo] : qpairs) {
      if (!colored_in(qa, qo, {c.a, c.b})) continue;
      Mod mq;
      if (add(mq, c.hostq, qa, c.qlo, c.qhi) &&
          add(mq, c.hostq, qo, c.qlo, c.qhi)) {
        auto Pp = side_opts(va, c.plo, c.a, -1);
        auto Vp = side_opts(vo, c.phi, c.a, +1);
        auto Pq = side_opts(qa, c.qlo, c.hostq, -1);
        auto Vq = side_opts(qo, c.qhi, c.hostq, +1);
        for (int pp : Pp) {
          Mod m1;
          if (pp != -1 && !add(m1, c.hostp, pp, c.plo, c.phi)) {
            undo(m1);
            continue;
          }
          for (int vp : Vp) {
            Mod m2;
            if (vp != -1 && !add(m2, c.hostp, vp, c.plo, c.phi)) {
              undo(m2);
              continue;
            }
            for (int pq : Pq) {
              Mod m3;
              if (pq != -1 && !add(m3, c.hostq, pq, c.qlo, c.qhi)) {
                undo(m3);
                continue;
              }
              for (int vq : Vq) {
                Mod m4;
                if (vq != -1 && !add(m4, c.hostq, vq, c.qlo, c.qhi)) {
                  undo(m4);
                  continue;
                }
                ends[c.key] = {va, vo};
                if (!c.rev.empty()) ends[c.rev] = {qa, qo};
                rec(di + 1);
                ends.erase(c.key);
                if (!c.rev.empty()) ends.erase(c.rev);
                undo(m4);
                if (stopped || truncated) break;
              }
              undo(m3);
              if (stopped || truncated) break;
            }
            undo(m2);
            if (stopped || truncated) break;
          }
          undo(m1);
          if (stopped || truncated) break;
        }
      }
      undo(mq);
      if (stopped || truncated) return;
    }
  }

  // Crossing at a single half-integer point, interior to one diagonal edge
  // of each path; the four edge endpoints become marbles, no endpoints.
  void fractional_shapes(const Ctx& c, std::size_t di) {
    const auto& edges = inst.graph.edges();
    for (auto [x1, y1] : edges) {
      int u = x1, w = y1;
      if (p(u, c.a) == kUnreachable || p(w, c.a) == kUnreachable ||
          p(u, c.b) == kUnreachable || p(w, c.b) == kUnreachable)
        continue;
      if (p(u, c.a) > p(w, c.a)) std::swap(u, w);
      if (p(w, c.a) - p(u, c.a) != 1) continue;
      if (std::abs(p(w, c.b) - p(u, c.b)) != 1) continue;
      Mod mp;
      if (add(mp, c.hostp, u, c.plo, c.phi) &&
          add(mp, c.hostp, w, c.plo, c.phi)) {
        Pt2 a0{2 * p(u, c.a), 2 * p(u, c.b)}, a1{2 * p(w, c.a), 2 * p(w, c.b)};
        for (auto [x2, y2] : edges) {
          int uq = x2, wq = y2;
          if (p(uq, c.a) == kUnreachable || p(wq, c.a) == kUnreachable ||
              p(uq, c.b) == kUnreachable || p(wq, c.b) == kUnreachable ||
              p(uq, c.hostq) == kUnreachable || p(wq, c.hostq) == kUnreachable)
            continue;
          if (p(uq, c.hostq) > p(wq, c.hostq)) std::swap(uq, wq);
          if (p(wq, c.hostq) - p(uq, c.hostq) != 1) continue;
          if (std::abs(p(wq, c.b) - p(uq, c.b)) != 1) continue;
          if (std::abs(p(wq, c.a) - p(uq, c.a)) != 1) continue;
          Pt2 b0{2 * p(uq, c.a), 2 * p(uq, c.b)};
          Pt2 b1{2 * p(wq, c.a), 2 * p(wq, c.b)};
          auto hits = segment_intersection(a0, a1, b0, b1);
          if (hits.size() != 1 || hits[0][0] % 2 == 0 || hits[0][1] % 2 == 0)
            continue;
          Mod mq;
          if (add(mq, c.hostq, uq, c.qlo, c.qhi) &&
              add(mq, c.hostq, wq, c.qlo, c.qhi))
            rec(di + 1);
          undo(mq);
          if (stopped || truncated) break;
        }
      }
      undo(mp);
      if (stopped || truncated) return;
    }
  }

  void emit() {
    if (stopped || truncated) return;
    if (++leaves > budget) {
      truncated = true;
      return;
    }
    CrossingGuess g;
    g.marbles.resize(k);
    for (int i = 0; i < k; ++i) g.marbles[i].assign(T[i].begin(), T[i].end());
    g.ends = ends;
    if (seen.size() < kSeenCap && !seen.insert(crossing_guess_text(g)).second)
      return;
    ++emitted;
    if (!visit(g)) stopped = true;
  }
};

}  // namespace

std::vector<PermKey> all_perm_keys(int k) {
  std::vector<PermKey> out;
  PermKey cur;
  std::vector<char> used(k, 0);
  std::function<void(int)> gen = [&](int len) {
    if (static_cast<int>(cur.size()) == len) {
      out.push_back(cur);
      return;
    }
    for (int c = 0; c < k; ++c) {
      if (used[c]) continue;
      used[c] = 1;
      cur.push_back(c);
      gen(len);
      cur.pop_back();
      used[c] = 0;
    }
  };
  for (int len = 1; len <= k; ++len) gen(len);
  return out;
}

std::string crossing_guess_text(const CrossingGuess& g) {
  std::ostringstream out;
  out << "{\"marbles\": [";
  for (std::size_t i = 0; i < g.marbles.size(); ++i) {
    if (i) out << ", ";
    out << "[";
    for (std::size_t j = 0; j < g.marbles[i].size(); ++j) {
      if (j) out << ", ";
      out << g.marbles[i][j];
    }
    out << "]";
  }
  out << "], \"ends\": {";
  bool first = true;
  for (const auto& [sig, ep] : g.ends) {
    if (!first) out << ", ";
    first = false;
    out << "\"";
    for (std::size_t j = 0; j < sig.size(); ++j) {
      if (j) out << ",";
      out << sig[j];
    }
    out << "\": [" << ep.first << ", " << ep.second << "]";
  }
  out << "}}";
  return out.str();
}

bool enumerate_crossing_guesses_cb(
    const Instance& inst, const PositionTable& positions,
    const DistanceOracle& d, long long budget,
    const std::function<bool(const CrossingGuess&)>& visit) {
  if (inst.k < 1) throw std::invalid_argument("instance needs at least one pair");
  Enumerator e(inst, positions, d, budget, visit);
  e.run();
  return !e.truncated && !e.stopped;
}

std::vector<CrossingGuess> enumerate_crossing_guesses(const Instance& inst,
                                                      long long budget,
                                                      bool* complete) {
  PositionTable positions = compute_positions(inst);
  BfsDistanceOracle d(inst.graph);
  std::vector<CrossingGuess> out;
  bool full = enumerate_crossing_guesses_cb(
      inst, positions, d, budget, [&](const CrossingGuess& g) {
        out.push_back(g);
        return true;
      });
  if (complete) *complete = full;
  return out;
}

CrossingGuess induced_guess(const Instance& inst,
                            const PositionTable& positions,
                            const DistanceOracle& d,
                            const std::vector<Path>& paths) {
  int k = inst.k;
  if (static_cast<int>(paths.size()) != k)
    throw std::invalid_argument("induced_guess: wrong number of paths");
  std::vector<std::set<int>> T(k);
  std::map<PermKey, std::pair<int, int>> ends;
  for (int i = 0; i < k; ++i) {
    if (paths[i].empty()) throw std::invalid_argument("induced_guess: empty path");
    T[i] = {paths[i].front(), paths[i].back()};
    ends[{i}] = {paths[i].front(), paths[i].back()};
  }
  auto index_of = [&](const Path& P, int v) {
    auto it = std::find(P.begin(), P.end(), v);
    if (it == P.end())
      throw std::logic_error("induced_guess: endpoint not on its path");
    return static_cast<long>(it - P.begin());
  };
  for (const PermKey& sig : all_perm_keys(k)) {
    if (sig.size() < 2) continue;
    int h = static_cast<int>(sig.size());
    int lh = sig[h - 1];
    if (h == 2) {
      int i = sig[0], j = sig[1];
      CrossingRecord rec =
          crossing_vertices(paths[j], paths[i], j, i, positions, d);
      for (const auto& f :
           {rec.alpha_p, rec.omega_p, rec.partial_p, rec.varpi_p, rec.delta_p})
        if (f) T[j].insert(*f);
      if (rec.alpha_p) ends[sig] = {*rec.alpha_p, *rec.omega_p};
      continue;
    }
    int lh1 = sig[h - 2], l1 = sig[0];
    PermKey start(sig.begin(), sig.end() - 1);
    PermKey tail(sig.begin() + 1, sig.end());
    PermKey last2{lh, lh1};
    auto is = ends.find(start), ie = ends.find(tail), il = ends.find(last2);
    if (is == ends.end() || ie == ends.end() || il == ends.end()) continue;
    const Path& W = paths[lh1];
    long lo = std::max(index_of(W, is->second.first),
                       index_of(W, il->second.first));
    long hi = std::min(index_of(W, is->second.second),
                       index_of(W, il->second.second));
    if (lo > hi) continue;
    Path Qs(W.begin() + lo, W.begin() + hi + 1);
    const Path& H = paths[lh];
    long plo = index_of(H, ie->second.first);
    long phi = index_of(H, ie->second.second);
    Path Ps(H.begin() + plo, H.begin() + phi + 1);
    CrossingRecord rec = crossing_vertices(Ps, Qs, lh, l1, positions, d);
    for (const auto& f :
         {rec.alpha_p, rec.omega_p, rec.partial_p, rec.varpi_p, rec.delta_p})
      if (f) T[lh].insert(*f);
    for (const auto& f :
         {rec.alpha_q, rec.omega_q, rec.partial_q, rec.varpi_q, rec.delta_q})
      if (f) T[lh1].insert(*f);
    if (rec.alpha_p) ends[sig] = {*rec.alpha_p, *rec.omega_p};
  }
  CrossingGuess g;
  g.marbles.resize(k);
  for (int i = 0; i < k; ++i) g.marbles[i].assign(T[i].begin(), T[i].end());
  g.ends = std::move(ends);
  return g;
}

std::vector<Segment> derive_segments_and_marks(const Instance& inst,
                                               const PositionTable& positions,
                                               const DistanceOracle& d,
                                               const CrossingGuess& guess) {
  int k = inst.k;
  int n = inst.graph.num_vertices();
  if (static_cast<int>(guess.marbles.size()) != k)
    throw std::invalid_argument("guess arity does not match the instance");
  auto p = [&](int v, int c) { return positions.pos[v][c]; };

  std::vector<std::vector<int>> seq(k);
  for (int i = 0; i < k; ++i) {
    seq[i] = guess.marbles[i];
    std::sort(seq[i].begin(), seq[i].end());
    seq[i].erase(std::unique(seq[i].begin(), seq[i].end()), seq[i].end());
    for (int v : seq[i]) {
      if (v < 0 || v >= n) throw std::invalid_argument("marble out of range");
      if (p(v, i) == kUnreachable)
        throw std::invalid_argument("marble unreachable in its own color");
    }
    auto has = [&](int v) {
      return std::binary_search(seq[i].begin(), seq[i].end(), v);
    };
    if (!has(inst.terminals[i].first) || !has(inst.terminals[i].second))
      throw std::invalid_argument("marble path must contain its terminals");
    for (std::size_t x = 0; x < seq[i].size(); ++x)
      for (std::size_t y = x + 1; y < seq[i].size(); ++y) {
        int dd = d.dist(seq[i][x], seq[i][y]);
        if (dd == kUnreachable ||
            std::abs(p(seq[i][x], i) - p(seq[i][y], i)) != dd)
          throw std::invalid_argument("marble path is not colored");
      }
    std::sort(seq[i].begin(), seq[i].end(),
              [&](int u, int w) { return p(u, i) < p(w, i); });
  }
  for (const auto& [sig, ep] : guess.ends) {
    if (sig.empty()) throw std::invalid_argument("empty permutation key");
    for (int c : sig)
      if (c < 0 || c >= k) throw std::invalid_argument("permutation color out of range");
    int i = sig.back();
    auto on_path = [&](int v) {
      return std::find(seq[i].begin(), seq[i].end(), v) != seq[i].end();
    };
    if (!on_path(ep.first) || !on_path(ep.second))
      throw std::invalid_argument("segment endpoints must be marbles");
  }

  std::vector<Segment> out;
  for (int i = 0; i < k; ++i) {
    for (std::size_t t = 0; t + 1 < seq[i].size(); ++t) {
      int u = seq[i][t], w = seq[i][t + 1];
      int gap = p(w, i) - p(u, i);
      if (gap < 2) continue;
      Segment s;
      s.host = i;
      s.start = u;
      s.end = w;
      s.marks.push_back(i);
      for (const auto& [sig, ep] : guess.ends) {
        if (sig.back() != i) continue;
        int lo = std::min(p(ep.first, i), p(ep.second, i));
        int hi = std::max(p(ep.first, i), p(ep.second, i));
        if (p(u, i) >= lo && p(w, i) <= hi)
          s.marks.insert(s.marks.end(), sig.begin(), sig.end());
      }
      std::sort(s.marks.begin(), s.marks.end());
      s.marks.erase(std::unique(s.marks.begin(), s.marks.end()), s.marks.end());
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<std::pair<int, DagDisjointInstance>> assemble_color_instances(
    const Instance& inst, const PositionTable& positions,
    const std::vector<Segment>& segments) {
  int k = inst.k;
  std::vector<std::vector<std::pair<int, int>>> plist(k);
  for (const Segment& s : segments) {
    int j = s.marks.empty() ? s.host : s.marks.front();
    int x = s.start, y = s.end;
    if (positions.pos[x][j] > positions.pos[y][j]) std::swap(x, y);
    plist[j].push_back({x, y});
  }
  std::vector<std::pair<int, DagDisjointInstance>> out;
  for (int j = 0; j < k; ++j) {
    if (plist[j].empty()) continue;
    std::sort(plist[j].begin(), plist[j].end(),
              [&](const std::pair<int, int>& l, const std::pair<int, int>& r) {
                int pl = positions.pos[l.first][j], pr = positions.pos[r.first][j];
                return std::tie(pl, l) < std::tie(pr, r);
              });
    out.push_back(
        {j, {build_layered_dag(inst.graph, positions, j).dag, plist[j]}});
  }
  return out;
}

namespace {

// Per-solve evaluation state shared by worker threads: read-only graph data
// plus a mutex-guarded DP memo keyed by (color, sorted pair list).
struct Evaluator {
  const Instance& inst;
  const PositionTable& positions;
  const DistanceOracle& d;
  const std::vector<Dag>& dags;
  std::unordered_map<std::vector<int>, std::optional<std::vector<Path>>,
                     VecHash>
      memo;
  std::mutex mu;

  std::optional<std::vector<Path>> solve_color(
      int j, const std::vector<std::pair<int, int>>& pairs) {
    std::vector<int> key{j};
    for (auto [x, y] : pairs) {
      key.push_back(x);
      key.push_back(y);
    }
    {
      std::lock_guard<std::mutex> lk(mu);
      auto it = memo.find(key);
      if (it != memo.end()) return it->second;
    }
    auto res = disjoint_paths_dag(dags[j], pairs);
    std::lock_guard<std::mutex> lk(mu);
    memo.emplace(std::move(key), res);
    return res;
  }

  std::optional<Solution> evaluate(const CrossingGuess& g) {
    std::vector<Segment> segs;
    try {
      segs = derive_segments_and_marks(inst, positions, d, g);
    } catch (const std::exception&) {
      return std::nullopt;
    }
    int k = inst.k;
    auto p = [&](int v, int c) { return positions.pos[v][c]; };
    std::vector<std::vector<int>> seq(k);
    for (int i = 0; i < k; ++i) {
      seq[i] = g.marbles[i];
      std::sort(seq[i].begin(), seq[i].end(),
                [&](int u, int w) { return p(u, i) < p(w, i); });
      for (std::size_t t = 0; t + 1 < seq[i].size(); ++t) {
        int u = seq[i][t], w = seq[i][t + 1];
        if (p(w, i) - p(u, i) == 1 && !inst.graph.has_edge(u, w))
          return std::nullopt;
      }
    }

    struct Item {
      std::pair<int, int> pr;
      int host, u, w;
    };
    std::vector<std::vector<Item>> items(k);
    for (const Segment& s : segs) {
      int j = s.marks.front();
      int x = s.start, y = s.end;
      if (p(x, j) == kUnreachable || p(y, j) == kUnreachable)
        return std::nullopt;
      if (p(x, j) > p(y, j)) std::swap(x, y);
      items[j].push_back({{x, y}, s.host, s.start, s.end});
    }
    std::map<std::array<int, 3>, std::pair<int, int>> slot;
    std::vector<std::vector<Path>> solved(k);
    for (int j = 0; j < k; ++j) {
      if (items[j].empty()) continue;
      std::sort(items[j].begin(), items[j].end(),
                [&](const Item& l, const Item& r) {
                  int pl = p(l.pr.first, j), pr2 = p(r.pr.first, j);
                  return std::tie(pl, l.pr) < std::tie(pr2, r.pr);
                });
      std::vector<std::pair<int, int>> pairs;
      for (const Item& it : items[j]) pairs.push_back(it.pr);
      auto res = solve_color(j, pairs);
      if (!res) return std::nullopt;
      solved[j] = *res;
      for (std::size_t idx = 0; idx < items[j].size(); ++idx)
        slot[{items[j][idx].host, items[j][idx].u, items[j][idx].w}] = {
            j, static_cast<int>(idx)};
    }

    Solution sol;
    sol.paths.resize(k);
    for (int i = 0; i < k; ++i) {
      Path path{seq[i].front()};
      for (std::size_t t = 0; t + 1 < seq[i].size(); ++t) {
        int u = seq[i][t], w = seq[i][t + 1];
        if (p(w, i) - p(u, i) == 1) {
          path.push_back(w);
          continue;
        }
        auto it = slot.find({i, u, w});
        if (it == slot.end()) return std::nullopt;
        const Path& sp = solved[it->second.first][it->second.second];
        if (!sp.empty() && sp.front() == u) {
          path.insert(path.end(), sp.begin() + 1, sp.end());
        } else if (!sp.empty() && sp.back() == u) {
          path.insert(path.end(), sp.rbegin() + 1, sp.rend());
        } else {
          return std::nullopt;
        }
      }
      sol.paths[i] = std::move(path);
    }
    if (!verify_solution(inst, positions, sol).ok) return std::nullopt;
    return sol;
  }
};

}  // namespace

KdspResult solve_kdsp(const Instance& inst, const KdspConfig& config) {
  if (inst.k < 1) throw std::invalid_argument("solve_kdsp: k must be positive");
  KdspResult res;
  PositionTable positions = compute_positions(inst);
  for (int i = 0; i < inst.k; ++i)
    if (positions.pos[inst.terminals[i].second][i] == kUnreachable) {
      res.status = KdspStatus::kNo;
      res.complete = true;
      return res;
    }
  BfsDistanceOracle d(inst.graph);
  int n = inst.graph.num_vertices();
  std::vector<Dag> dags;
  dags.reserve(inst.k);
  for (int c = 0; c < inst.k; ++c)
    dags.push_back(build_layered_dag(inst.graph, positions, c).dag);
  Evaluator ev{inst, positions, d, dags, {}, {}};

  long long budget = config.require_complete
                         ? std::numeric_limits<long long>::max()
                         : config.guess_budget;
  int threads = std::max(1, config.threads);
  if (threads > 1)
    for (int v = 0; v < n; ++v) d.dist(v, v);  // freeze the distance memo

  bool complete = false;
  if (threads == 1) {
    complete = enumerate_crossing_guesses_cb(
        inst, positions, d, budget, [&](const CrossingGuess& g) {
          ++res.guesses;
          auto sol = ev.evaluate(g);
          if (!sol) return true;
          res.status = KdspStatus::kYes;
          res.solution = std::move(sol);
          res.winning = g;
          return false;
        });
  } else {
    std::vector<CrossingGuess> batch;
    const std::size_t kBatch = 16u * static_cast<std::size_t>(threads);
    auto flush = [&]() -> bool {  // true once a solution is found
      if (batch.empty()) return false;
      std::vector<std::optional<Solution>> outs(batch.size());
      std::atomic<std::size_t> next{0};
      std::vector<std::thread> pool;
      int tn = static_cast<int>(std::min<std::size_t>(
          static_cast<std::size_t>(threads), batch.size()));
      for (int t = 0; t < tn; ++t)
        pool.emplace_back([&] {
          for (std::size_t idx; (idx = next++) < batch.size();)
            outs[idx] = ev.evaluate(batch[idx]);
        });
      for (auto& th : pool) th.join();
      for (std::size_t idx = 0; idx < batch.size(); ++idx)
        if (outs[idx]) {
          res.status = KdspStatus::kYes;
          res.solution = std::move(outs[idx]);
          res.winning = batch[idx];
          batch.clear();
          return true;
        }
      batch.clear();
      return false;
    };
    complete = enumerate_crossing_guesses_cb(
        inst, positions, d, budget, [&](const CrossingGuess& g) {
          ++res.guesses;
          batch.push_back(g);
          if (batch.size() >= kBatch) return !flush();
          return true;
        });
    if (res.status != KdspStatus::kYes) flush();
  }

  res.complete = complete;
  if (res.status != KdspStatus::kYes)
    res.status = complete ? KdspStatus::kNo : KdspStatus::kUnknown;
  return res;
}

}  // namespace dsp

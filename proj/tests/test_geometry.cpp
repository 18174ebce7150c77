#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <set>
#include <vector>

#include "doctest.h"
#include "dsp/geometry.hpp"
#include "dsp/graph.hpp"
#include "dsp/instances.hpp"
#include "dsp/oracle.hpp"
#include "helpers.hpp"

using namespace dsp;
using dsp::testing::TableOracle;
using dsp::testing::iota_path;
using dsp::testing::make_plane;

namespace {

// The three worked plane scenarios: an a-colored path P (coordinate 0)
// against a b-colored path Q (coordinate 1), authored as raw projections.

// Lattice crossing: P and Q share the diagonal edge (4,5)-(5,6).
const std::vector<std::array<int, 2>> kLatticeP = {
    {0, 5}, {1, 6}, {2, 6}, {3, 5}, {4, 5}, {5, 6},
    {6, 6}, {7, 5}, {8, 5}, {9, 5}, {10, 5}};
const std::vector<std::array<int, 2>> kLatticeQ = {
    {5, 10}, {5, 9}, {6, 8}, {6, 7}, {5, 6}, {4, 5},
    {4, 4},  {4, 3}, {5, 2}, {5, 1}, {5, 0}};

// Fractional crossing: the drawings cross at (4.5, 5.5), which is no
// vertex of either path.
const std::vector<std::array<int, 2>> kFracP = {
    {0, 5}, {1, 5}, {2, 5}, {3, 5}, {4, 5}, {5, 6},
    {6, 6}, {7, 5}, {8, 5}, {9, 5}, {10, 5}};
const std::vector<std::array<int, 2>> kFracQ = {
    {5, 10}, {5, 9}, {5, 8}, {4, 7}, {4, 6}, {5, 5},
    {5, 4},  {5, 3}, {5, 2}, {5, 1}, {5, 0}};

// Noncrossing with a delta vertex on Q at (8,6).
const std::vector<std::array<int, 2>> kDeltaP = {
    {0, 6}, {1, 6}, {2, 5}, {3, 5}, {4, 6}, {5, 6}};
const std::vector<std::array<int, 2>> kDeltaQ = {
    {5, 10}, {6, 9}, {6, 8}, {7, 7}, {8, 6}, {7, 5}, {7, 4}, {6, 3}, {6, 2}};

struct Plane {
  PositionTable pt;
  Path P, Q;
};

Plane make_scene(const std::vector<std::array<int, 2>>& p,
                 const std::vector<std::array<int, 2>>& q) {
  std::vector<std::array<int, 2>> all = p;
  all.insert(all.end(), q.begin(), q.end());
  Plane s;
  s.pt = make_plane(all);
  s.P = iota_path(0, (int)p.size());
  s.Q = iota_path((int)p.size(), (int)q.size());
  return s;
}

// Naive reference for rect_intersect_2d: enumerate the half-integer grid
// in doubled coordinates.
std::int64_t cheb(std::array<std::int64_t, 2> u, std::array<std::int64_t, 2> v) {
  return std::max(std::abs(u[0] - v[0]), std::abs(u[1] - v[1]));
}

bool naive_intersect(const std::array<int, 2>& x, const std::array<int, 2>& y,
                     const std::array<int, 2>& xh,
                     const std::array<int, 2>& yh) {
  auto dbl = [](const std::array<int, 2>& v) {
    return std::array<std::int64_t, 2>{2 * v[0], 2 * v[1]};
  };
  auto X = dbl(x), Y = dbl(y), XH = dbl(xh), YH = dbl(yh);
  std::int64_t lo0 = std::min({X[0], Y[0], XH[0], YH[0]});
  std::int64_t hi0 = std::max({X[0], Y[0], XH[0], YH[0]});
  std::int64_t lo1 = std::min({X[1], Y[1], XH[1], YH[1]});
  std::int64_t hi1 = std::max({X[1], Y[1], XH[1], YH[1]});
  for (std::int64_t z0 = lo0; z0 <= hi0; ++z0)
    for (std::int64_t z1 = lo1; z1 <= hi1; ++z1) {
      std::array<std::int64_t, 2> z{z0, z1};
      if (cheb(X, z) + cheb(z, Y) == cheb(X, Y) &&
          cheb(XH, z) + cheb(z, YH) == cheb(XH, YH))
        return true;
    }
  return false;
}

std::array<int, 2> proj2(const PositionTable& pt, int v) {
  return {pt.pos[v][0], pt.pos[v][1]};
}

}  // namespace

TEST_CASE("color_set basics") {
  Instance inst = builtin_fig1();
  PositionTable pt = compute_positions(inst);
  BfsDistanceOracle d(inst.graph);

  ColorSet same = color_set(pt, d, 3, 3);
  CHECK(same.is_colored);
  CHECK(same.colors == std::vector<int>{0, 1});

  ColorSet pair1 = color_set(pt, d, 0, 5);  // dist 5 = |5-0| in coordinate 0
  CHECK(pair1.is_colored);
  CHECK(pair1.colors == std::vector<int>{0});

  ColorSet pair2 = color_set(pt, d, 4, 11);
  CHECK(pair2.is_colored);
  CHECK(pair2.colors == std::vector<int>{1});
}

TEST_CASE("color_set agrees with the definition on random instances") {
  for (int seed = 0; seed < 10; ++seed) {
    Instance inst = gen_random(9, 0.3, 2, 100 + seed);
    PositionTable pt = compute_positions(inst);
    BfsDistanceOracle d(inst.graph);
    int n = inst.graph.num_vertices();
    for (int u = 0; u < n; ++u)
      for (int w = 0; w < n; ++w) {
        if (d.dist(u, w) < 0) continue;
        int norm = 0;
        bool skipped = false;
        for (int i = 0; i < inst.k; ++i) {
          if (pt.pos[u][i] == kUnreachable || pt.pos[w][i] == kUnreachable) {
            skipped = true;
            continue;
          }
          norm = std::max(norm, std::abs(pt.pos[u][i] - pt.pos[w][i]));
        }
        ColorSet cs = color_set(pt, d, u, w);
        CHECK(cs.is_colored == (norm == d.dist(u, w)));
        CHECK(cs.had_unreachable == skipped);
        if (cs.is_colored)
          for (int c : cs.colors)
            CHECK(std::abs(pt.pos[u][c] - pt.pos[w][c]) == norm);
      }
  }
}

TEST_CASE("rect_membership examples") {
  CHECK(rect_membership({0, 0}, {4, 0}, {0, 0}));
  CHECK(rect_membership({0, 0}, {4, 0}, {2, 1}));
  CHECK_FALSE(rect_membership({0, 0}, {4, 0}, {2, 3}));
  // symmetric in the corners
  CHECK(rect_membership({4, 0}, {0, 0}, {2, 1}));
  // projection restricts the coordinates consulted
  CHECK(rect_membership({0, 0}, {4, 0}, {2, 9}, {0}));
}

TEST_CASE("rect_membership satisfies the monotone diamond condition") {
  // corners with the max-norm attained in coordinate 0
  std::array<int, 2> x{1, 3}, y{7, 5};
  for (int z0 = 0; z0 <= 8; ++z0)
    for (int z1 = 0; z1 <= 8; ++z1)
      if (rect_membership({x[0], x[1]}, {y[0], y[1]}, {z0, z1})) {
        CHECK(z0 - x[0] >= std::abs(z1 - x[1]));
        CHECK(y[0] - z0 >= std::abs(y[1] - z1));
      }
}

TEST_CASE("rect_intersect_2d frozen examples") {
  CHECK(rect_intersect_2d({0, 0}, {2, 2}, {0, 0}, {2, 2}));
  CHECK_FALSE(rect_intersect_2d({0, 0}, {1, 1}, {3, 0}, {4, 1}));
  CHECK_FALSE(rect_intersect_2d({0, 5}, {4, 5}, {5, 10}, {4, 6}));
}

TEST_CASE("rect_intersect_2d equals half-integer enumeration") {
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<int> coord(0, 8);
  for (int it = 0; it < 4000; ++it) {
    std::array<int, 2> x{coord(rng), coord(rng)}, y{coord(rng), coord(rng)},
        xh{coord(rng), coord(rng)}, yh{coord(rng), coord(rng)};
    CHECK(rect_intersect_2d(x, y, xh, yh) == naive_intersect(x, y, xh, yh));
  }
}

TEST_CASE("segment_intersection basics") {
  using V = std::vector<Pt2>;
  // proper crossing of two diagonals
  CHECK(segment_intersection({0, 0}, {2, 2}, {0, 2}, {2, 0}) == V{{1, 1}});
  // collinear overlap reports the two overlap endpoints
  CHECK(segment_intersection({0, 0}, {4, 4}, {2, 2}, {6, 6}) ==
        V{{2, 2}, {4, 4}});
  // disjoint parallel segments
  CHECK(segment_intersection({0, 0}, {2, 2}, {0, 1}, {2, 3}).empty());
  // degenerate point on a segment
  CHECK(segment_intersection({1, 1}, {1, 1}, {0, 0}, {2, 2}) == V{{1, 1}});
  CHECK(segment_intersection({3, 1}, {3, 1}, {0, 0}, {2, 2}).empty());
}

TEST_CASE("lattice crossing scene") {
  Plane s = make_scene(kLatticeP, kLatticeQ);
  TableOracle d(s.pt);
  CrossingRecord rec = crossing_vertices(s.P, s.Q, 0, 1, s.pt, d);
  CHECK(rec.crossing);
  CHECK(rec.seg_lo == Pt2{8, 10});
  CHECK(rec.seg_hi == Pt2{10, 12});
  CHECK(rec.alpha_p == 4);    // (4,5)
  CHECK(rec.omega_p == 5);    // (5,6)
  CHECK(rec.partial_p == 3);  // (3,5)
  CHECK(rec.varpi_p == 6);    // (6,6)
  CHECK(rec.alpha_q == 15);   // (5,6)
  CHECK(rec.omega_q == 16);   // (4,5)
  CHECK(rec.partial_q == 14); // (6,7)
  CHECK(rec.varpi_q == 17);   // (4,4)
  CHECK_FALSE(rec.delta_p.has_value());
  CHECK_FALSE(rec.delta_q.has_value());

  std::vector<int> cs = crossing_set_2d(s.P, s.Q, 0, 1, s.pt, d);
  CHECK(cs == std::vector<int>{0, 3, 4, 5, 6, 10});

  // four-rectangle disjointness around the crossing
  auto sp = proj2(s.pt, s.P.front()), tp = proj2(s.pt, s.P.back());
  auto sq = proj2(s.pt, s.Q.front()), tq = proj2(s.pt, s.Q.back());
  auto pp = proj2(s.pt, *rec.partial_p), vp = proj2(s.pt, *rec.varpi_p);
  auto pq = proj2(s.pt, *rec.partial_q), vq = proj2(s.pt, *rec.varpi_q);
  std::vector<std::pair<std::array<int, 2>, std::array<int, 2>>> rects = {
      {sp, pp}, {vp, tp}, {sq, pq}, {vq, tq}};
  for (std::size_t i = 0; i < rects.size(); ++i)
    for (std::size_t j = i + 1; j < rects.size(); ++j)
      CHECK_FALSE(rect_intersect_2d(rects[i].first, rects[i].second,
                                    rects[j].first, rects[j].second));
}

TEST_CASE("fractional crossing scene") {
  Plane s = make_scene(kFracP, kFracQ);
  TableOracle d(s.pt);
  CrossingRecord rec = crossing_vertices(s.P, s.Q, 0, 1, s.pt, d);
  CHECK(rec.crossing);
  CHECK(rec.seg_lo == Pt2{9, 11});
  CHECK(rec.seg_hi == Pt2{9, 11});
  CHECK_FALSE(rec.alpha_p.has_value());
  CHECK_FALSE(rec.omega_p.has_value());
  CHECK_FALSE(rec.alpha_q.has_value());
  CHECK_FALSE(rec.omega_q.has_value());
  CHECK(rec.partial_p == 4);   // (4,5)
  CHECK(rec.varpi_p == 5);     // (5,6)
  CHECK(rec.partial_q == 15);  // (4,6)
  CHECK(rec.varpi_q == 16);    // (5,5)
}

TEST_CASE("noncrossing scene with a delta vertex") {
  Plane s = make_scene(kDeltaP, kDeltaQ);
  TableOracle d(s.pt);
  CrossingRecord rec = crossing_vertices(s.P, s.Q, 0, 1, s.pt, d);
  CHECK_FALSE(rec.crossing);
  CHECK_FALSE(rec.alpha_p.has_value());
  CHECK_FALSE(rec.partial_p.has_value());
  CHECK_FALSE(rec.varpi_q.has_value());
  CHECK_FALSE(rec.delta_p.has_value());
  CHECK(rec.delta_q == 10);  // (8,6)

  // same value through the standalone lookup, either endpoint order
  CHECK(delta_vertex(s.Q, {s.P.front(), s.P.back()}, 1, 0, s.pt) == 10);
  CHECK(delta_vertex(s.Q, {s.P.back(), s.P.front()}, 1, 0, s.pt) == 10);

  // P carries no crossing vertices, so its set is just the endpoints
  CHECK(crossing_set_2d(s.P, s.Q, 0, 1, s.pt, d) == std::vector<int>{0, 5});
  std::vector<int> cq = crossing_set_2d(s.Q, s.P, 1, 0, s.pt, d);
  CHECK(cq == std::vector<int>{6, 10, 14});

  // delta split: the split rectangles stay clear of the other pair's area
  auto sp = proj2(s.pt, 0), tp = proj2(s.pt, 5);
  auto sq = proj2(s.pt, 6), tq = proj2(s.pt, 14);
  auto dq = proj2(s.pt, 10);
  CHECK_FALSE(rect_intersect_2d(sp, tp, sq, dq));
  CHECK_FALSE(rect_intersect_2d(sp, tp, dq, tq));
}

TEST_CASE("identical single-edge paths cross along themselves") {
  PositionTable pt = make_plane({{0, 0}, {1, 1}});
  TableOracle d(pt);
  Path p{0, 1};
  CrossingRecord rec = crossing_vertices(p, p, 0, 1, pt, d);
  CHECK(rec.crossing);
  CHECK(rec.alpha_p == 0);
  CHECK(rec.omega_p == 1);
  CHECK_FALSE(rec.partial_p.has_value());
  CHECK_FALSE(rec.varpi_p.has_value());
}

TEST_CASE("crossing vertices on the built-in example") {
  Instance inst = builtin_fig1();
  PositionTable pt = compute_positions(inst);
  BfsDistanceOracle d(inst.graph);
  Path p1{0, 1, 2, 7, 6, 5}, p2{4, 3, 8, 9, 10, 11};
  CrossingRecord rec = crossing_vertices(p1, p2, 0, 1, pt, d);
  CHECK(rec.crossing);
  CHECK(rec.seg_lo == Pt2{4, 4});
  CHECK(rec.seg_hi == Pt2{6, 6});
  CHECK(rec.alpha_p == 2);
  CHECK(rec.omega_p == 7);
  CHECK(rec.partial_p == 1);
  CHECK(rec.varpi_p == 6);
  CHECK(rec.alpha_q == 8);
  CHECK(rec.omega_q == 9);
  CHECK(rec.partial_q == 3);
  CHECK(rec.varpi_q == 10);
}

TEST_CASE("pairs_avoiding basics") {
  // two pairs in different components
  Instance inst;
  inst.graph = Graph(4, {{0, 1}, {2, 3}});
  inst.k = 2;
  inst.terminals = {{0, 1}, {2, 3}};
  PositionTable pt = compute_positions(inst);
  BfsDistanceOracle d(inst.graph);
  CHECK(pairs_avoiding({0, 1}, {2, 3}, {0, 1}, pt, d));

  // identical pairs over a single edge: the shared rectangle is the whole
  // diagonal segment, so the pair form rejects, while the single-edge
  // paths have no internal vertices and the path form accepts
  Instance one;
  one.graph = Graph(2, {{0, 1}});
  one.k = 2;
  one.terminals = {{0, 1}, {0, 1}};
  PositionTable pt1 = compute_positions(one);
  BfsDistanceOracle d1(one.graph);
  CHECK_FALSE(pairs_avoiding({0, 1}, {0, 1}, {0, 1}, pt1, d1));
  CHECK(paths_avoiding({0, 1}, {0, 1}, pt1, d1));
}

TEST_CASE("avoiding pairs have internally disjoint shortest paths") {
  int avoiding_seen = 0;
  for (int seed = 0; seed < 40; ++seed) {
    Instance inst = gen_random(9, 0.3, 2, 500 + seed);
    PositionTable pt = compute_positions(inst);
    BfsDistanceOracle d(inst.graph);
    auto [s1, t1] = inst.terminals[0];
    auto [s2, t2] = inst.terminals[1];
    if (!pairs_avoiding({s1, t1}, {s2, t2}, {0, 1}, pt, d)) continue;
    ++avoiding_seen;
    auto ps = enumerate_shortest_paths(inst.graph, s1, t1, 500);
    auto qs = enumerate_shortest_paths(inst.graph, s2, t2, 500);
    for (const auto& p : ps)
      for (const auto& q : qs) {
        std::set<int> inner(p.begin() + 1, p.end() - 1);
        bool disjoint = true;
        for (std::size_t i = 1; i + 1 < q.size(); ++i)
          if (inner.count(q[i])) disjoint = false;
        CHECK(disjoint);
        CHECK(paths_avoiding(p, q, pt, d));
      }
  }
  CHECK(avoiding_seen > 0);
}

TEST_CASE("noncrossing pairs with common area expose a delta vertex") {
  int interesting = 0;
  for (int seed = 0; seed < 60; ++seed) {
    Instance inst = gen_random(9, 0.35, 2, 900 + seed);
    OracleResult truth = oracle_solve(inst);
    if (truth.status != OracleStatus::kYes) continue;
    PositionTable pt = compute_positions(inst);
    BfsDistanceOracle d(inst.graph);
    const Path& p = truth.solution->paths[0];
    const Path& q = truth.solution->paths[1];
    CrossingRecord rec = crossing_vertices(p, q, 0, 1, pt, d);
    if (rec.crossing) continue;
    auto sp = proj2(pt, p.front()), tp = proj2(pt, p.back());
    auto sq = proj2(pt, q.front()), tq = proj2(pt, q.back());
    if (!rect_intersect_2d(sp, tp, sq, tq)) continue;
    ++interesting;
    CHECK((rec.delta_p.has_value() || rec.delta_q.has_value()));
  }
  CHECK(interesting > 0);
}

TEST_CASE("crossing sets replay on alternative shortest paths") {
  int replayed = 0;
  for (int seed = 0; seed < 40; ++seed) {
    Instance inst = gen_random(9, 0.35, 2, 1300 + seed);
    OracleResult truth = oracle_solve(inst);
    if (truth.status != OracleStatus::kYes) continue;
    PositionTable pt = compute_positions(inst);
    BfsDistanceOracle d(inst.graph);
    const Path& p = truth.solution->paths[0];
    const Path& q = truth.solution->paths[1];
    CrossingRecord rec = crossing_vertices(p, q, 0, 1, pt, d);
    std::vector<int> cp = crossing_set_2d(p, q, 0, 1, pt, d);
    std::vector<int> cq = crossing_set_2d(q, p, 1, 0, pt, d);
    auto [s1, t1] = inst.terminals[0];
    auto [s2, t2] = inst.terminals[1];
    auto ps = enumerate_shortest_paths(inst.graph, s1, t1, 200);
    auto qs = enumerate_shortest_paths(inst.graph, s2, t2, 200);
    auto contains_all = [](const Path& path, const std::vector<int>& req) {
      std::set<int> have(path.begin(), path.end());
      for (int v : req)
        if (!have.count(v)) return false;
      return true;
    };
    for (const auto& pp : ps) {
      if (!contains_all(pp, cp)) continue;
      for (const auto& qq : qs) {
        if (!contains_all(qq, cq)) continue;
        CrossingRecord rr = crossing_vertices(pp, qq, 0, 1, pt, d);
        CHECK(rr.crossing == rec.crossing);
        if (rec.crossing) {
          CHECK(rr.seg_lo == rec.seg_lo);
          CHECK(rr.seg_hi == rec.seg_hi);
        }
        ++replayed;
      }
    }
  }
  CHECK(replayed > 0);
}

TEST_CASE("colored paths project onto straight segments") {
  for (int seed = 0; seed < 20; ++seed) {
    Instance inst = gen_random(10, 0.3, 2, 1700 + seed);
    PositionTable pt = compute_positions(inst);
    auto [s1, t1] = inst.terminals[0];
    for (const auto& p : enumerate_shortest_paths(inst.graph, s1, t1, 100)) {
      // pair 1 paths are 0-colored by construction: every step moves the
      // first coordinate by exactly +1
      for (std::size_t i = 0; i + 1 < p.size(); ++i)
        CHECK(pt.pos[p[i + 1]][0] - pt.pos[p[i]][0] == 1);
    }
  }
}

TEST_CASE("crossing record renders as one json line") {
  Plane s = make_scene(kDeltaP, kDeltaQ);
  TableOracle d(s.pt);
  CrossingRecord rec = crossing_vertices(s.P, s.Q, 0, 1, s.pt, d);
  std::string text = crossing_record_json(rec);
  CHECK(text.find("\"crossing\": false") != std::string::npos);
  CHECK(text.find("\"delta_q\": 10") != std::string::npos);
  CHECK(text.find("\"alpha_p\": null") != std::string::npos);
}

#ifndef DSP_GEOMETRY_HPP
#define DSP_GEOMETRY_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dsp/graph.hpp"

namespace dsp {

// All plane geometry works on the (a,b)-projection of positions with every
// coordinate doubled, so 45-degree segment intersections (denominator 2)
// stay in exact integer arithmetic.
using Pt2 = std::array<std::int64_t, 2>;

struct ColorSet {
  std::vector<int> colors;          // coordinates attaining the max difference
  bool is_colored = false;          // dist(u,w) == max_i |pos u^i - pos w^i|
  bool had_unreachable = false;     // some coordinate was skipped
};

ColorSet color_set(const PositionTable& positions, const DistanceOracle& d,
                   int u, int w);

// z in [[x,y]] restricted to coordinate subset proj (empty = all coordinates).
bool rect_membership(const std::vector<int>& x, const std::vector<int>& y,
                     const std::vector<int>& z,
                     const std::vector<int>& proj = {});

// Exact intersection test for the 45-degree rectangles [[x,y]] and
// [[xh,yh]] in the plane, via the rotated-coordinate characterization.
bool rect_intersect_2d(const std::array<int, 2>& x, const std::array<int, 2>& y,
                       const std::array<int, 2>& xh,
                       const std::array<int, 2>& yh);

// Crossing structure of an a-colored path P against a b-colored path Q in
// the (a,b)-plane. Suffix _p refers to vertices of P, _q to vertices of Q.
struct CrossingRecord {
  bool crossing = false;
  std::optional<int> alpha_p, omega_p, partial_p, varpi_p, delta_p;
  std::optional<int> alpha_q, omega_q, partial_q, varpi_q, delta_q;
  Pt2 seg_lo{}, seg_hi{};  // doubled endpoints of the segment X, if crossing
};

CrossingRecord crossing_vertices(const Path& P, const Path& Q, int a, int b,
                                 const PositionTable& positions,
                                 const DistanceOracle& d);

// The unique vertex of the a-colored path P aligned with an endpoint of the
// b-colored pair q_ends in coordinate a but strictly outside it in b.
std::optional<int> delta_vertex(const Path& P, std::pair<int, int> q_ends,
                                int a, int b, const PositionTable& positions);

// Pair form of avoidance: the projected rectangles of the two colored pairs
// meet at most in shared endpoint projections, witnessed on a 2-subset of
// proj containing a color of each pair (1-D interval test when |proj| = 1).
bool pairs_avoiding(std::pair<int, int> pair1, std::pair<int, int> pair2,
                    const std::vector<int>& proj,
                    const PositionTable& positions, const DistanceOracle& d);

// Path form of avoidance: internal vertices of each path stay off the other
// path's rectangle (used only by tests; the solver consumes the pair form).
bool paths_avoiding(const Path& P, const Path& Q,
                    const PositionTable& positions, const DistanceOracle& d);

// {s_P, t_P} plus the defined crossing vertices of P w.r.t. Q.
std::vector<int> crossing_set_2d(const Path& P, const Path& Q, int a, int b,
                                 const PositionTable& positions,
                                 const DistanceOracle& d);

std::string crossing_record_json(const CrossingRecord& rec);

// Exact intersection of integer segments a0-a1 and b0-b1 (degenerate
// segments allowed): empty, one point, or the two endpoints of an overlap.
std::vector<Pt2> segment_intersection(Pt2 a0, Pt2 a1, Pt2 b0, Pt2 b1);

}  // namespace dsp

#endif

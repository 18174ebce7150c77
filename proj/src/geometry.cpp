#include "dsp/geometry.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dsp {

namespace {

void check(bool cond, const char* what) {
  if (!cond) throw std::logic_error(what);
}

std::int64_t cross(const Pt2& o, const Pt2& p, const Pt2& q) {
  return (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0]);
}

bool on_segment(const Pt2& a, const Pt2& b, const Pt2& z) {
  if (cross(a, b, z) != 0) return false;
  return std::min(a[0], b[0]) <= z[0] && z[0] <= std::max(a[0], b[0]) &&
         std::min(a[1], b[1]) <= z[1] && z[1] <= std::max(a[1], b[1]);
}

}  // namespace

std::vector<Pt2> segment_intersection(Pt2 a0, Pt2 a1, Pt2 b0, Pt2 b1) {
  std::int64_t d1 = cross(b0, b1, a0);
  std::int64_t d2 = cross(b0, b1, a1);
  std::int64_t d3 = cross(a0, a1, b0);
  std::int64_t d4 = cross(a0, a1, b1);

  if (d1 == 0 && d2 == 0 && d3 == 0 && d4 == 0) {
    // collinear (or degenerate): intersect the 1-D spans along the axis
    // where the carrier line actually extends
    int ax = (std::max({a0[0], a1[0], b0[0], b1[0]}) ==
              std::min({a0[0], a1[0], b0[0], b1[0]}))
                 ? 1
                 : 0;
    if (a0[ax] > a1[ax]) std::swap(a0, a1);
    if (b0[ax] > b1[ax]) std::swap(b0, b1);
    Pt2 lo = (a0[ax] >= b0[ax]) ? a0 : b0;
    Pt2 hi = (a1[ax] <= b1[ax]) ? a1 : b1;
    if (lo[ax] > hi[ax]) return {};
    if (lo == hi) return {lo};
    return {lo, hi};
  }

  bool straddle_a = (d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0) || d1 == 0 || d2 == 0;
  bool straddle_b = (d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0) || d3 == 0 || d4 == 0;
  if (!straddle_a || !straddle_b) return {};
  if (d1 == 0) return on_segment(b0, b1, a0) ? std::vector<Pt2>{a0} : std::vector<Pt2>{};
  if (d2 == 0) return on_segment(b0, b1, a1) ? std::vector<Pt2>{a1} : std::vector<Pt2>{};
  if (d3 == 0) return on_segment(a0, a1, b0) ? std::vector<Pt2>{b0} : std::vector<Pt2>{};
  if (d4 == 0) return on_segment(a0, a1, b1) ? std::vector<Pt2>{b1} : std::vector<Pt2>{};
  // proper crossing at parameter t = d1/(d1-d2) along a0->a1; with doubled
  // 45-degree grid coordinates the point is integral
  std::int64_t num = d1, den = d1 - d2;
  Pt2 p;
  for (int c = 0; c < 2; ++c) {
    std::int64_t val = a0[c] * den + (a1[c] - a0[c]) * num;
    check(val % den == 0, "segment intersection off the half-integer grid");
    p[c] = val / den;
  }
  return {p};
}

ColorSet color_set(const PositionTable& positions, const DistanceOracle& d,
                   int u, int w) {
  ColorSet cs;
  int maxdiff = 0;
  for (int i = 0; i < positions.k; ++i) {
    int pu = positions.pos[u][i], pw = positions.pos[w][i];
    if (pu == kUnreachable || pw == kUnreachable) {
      cs.had_unreachable = true;
      continue;
    }
    maxdiff = std::max(maxdiff, std::abs(pu - pw));
  }
  int duw = d.dist(u, w);
  if (duw == kUnreachable || duw != maxdiff) return cs;
  cs.is_colored = true;
  for (int i = 0; i < positions.k; ++i) {
    int pu = positions.pos[u][i], pw = positions.pos[w][i];
    if (pu == kUnreachable || pw == kUnreachable) continue;
    if (std::abs(pu - pw) == maxdiff) cs.colors.push_back(i);
  }
  return cs;
}

bool rect_membership(const std::vector<int>& x, const std::vector<int>& y,
                     const std::vector<int>& z, const std::vector<int>& proj) {
  check(x.size() == y.size() && y.size() == z.size(),
        "rect_membership: dimension mismatch");
  std::vector<int> all;
  const std::vector<int>* idx = &proj;
  if (proj.empty()) {
    all.resize(x.size());
    for (size_t i = 0; i < x.size(); ++i) all[i] = static_cast<int>(i);
    idx = &all;
  }
  int xz = 0, zy = 0, xy = 0;
  for (int i : *idx) {
    xz = std::max(xz, std::abs(x[i] - z[i]));
    zy = std::max(zy, std::abs(z[i] - y[i]));
    xy = std::max(xy, std::abs(x[i] - y[i]));
  }
  return xz + zy == xy;
}

bool rect_intersect_2d(const std::array<int, 2>& x, const std::array<int, 2>& y,
                       const std::array<int, 2>& xh,
                       const std::array<int, 2>& yh) {
  auto diff = [](const std::array<int, 2>& p) { return p[0] - p[1]; };
  auto sum = [](const std::array<int, 2>& p) { return p[0] + p[1]; };
  return std::min(diff(x), diff(y)) <= std::max(diff(xh), diff(yh)) &&
         std::min(diff(xh), diff(yh)) <= std::max(diff(x), diff(y)) &&
         std::min(sum(x), sum(y)) <= std::max(sum(xh), sum(yh)) &&
         std::min(sum(xh), sum(yh)) <= std::max(sum(x), sum(y));
}

std::optional<int> delta_vertex(const Path& P, std::pair<int, int> q_ends,
                                int a, int b,
                                const PositionTable& positions) {
  auto pa = [&](int v) { return positions.pos[v][a]; };
  auto pb = [&](int v) { return positions.pos[v][b]; };
  auto [qs, qt] = q_ends;
  if (pb(qs) > pb(qt)) std::swap(qs, qt);
  std::optional<int> found;
  for (int v : P) {
    bool in_b = (pa(v) == pa(qs) && pb(v) < pb(qs)) ||
                (pa(v) == pa(qt) && pb(v) > pb(qt));
    if (!in_b) continue;
    check(!found.has_value(), "delta vertex not unique");
    found = v;
  }
  return found;
}

CrossingRecord crossing_vertices(const Path& P, const Path& Q, int a, int b,
                                 const PositionTable& positions,
                                 const DistanceOracle& d) {
  auto require_color = [&](const Path& path, int c, const char* name) {
    ColorSet cs = color_set(positions, d, path.front(), path.back());
    if (!cs.is_colored ||
        !std::binary_search(cs.colors.begin(), cs.colors.end(), c))
      throw std::invalid_argument(std::string("crossing_vertices: path ") +
                                  name + " is not colored in the coordinate");
  };
  require_color(P, a, "P");
  require_color(Q, b, "Q");

  auto project = [&](const Path& path) {
    std::vector<Pt2> pts;
    pts.reserve(path.size());
    for (int v : path)
      pts.push_back(Pt2{2 * static_cast<std::int64_t>(positions.pos[v][a]),
                        2 * static_cast<std::int64_t>(positions.pos[v][b])});
    return pts;
  };
  std::vector<Pt2> zp = project(P), zq = project(Q);

  std::vector<Pt2> hits;
  size_t np = std::max<size_t>(zp.size() - 1, 1);
  size_t nq = std::max<size_t>(zq.size() - 1, 1);
  for (size_t i = 0; i < np; ++i) {
    Pt2 a0 = zp[i], a1 = zp[std::min(i + 1, zp.size() - 1)];
    for (size_t j = 0; j < nq; ++j) {
      Pt2 b0 = zq[j], b1 = zq[std::min(j + 1, zq.size() - 1)];
      for (const Pt2& p : segment_intersection(a0, a1, b0, b1))
        hits.push_back(p);
    }
  }

  CrossingRecord rec;
  if (!hits.empty()) {
    rec.crossing = true;
    rec.seg_lo = *std::min_element(hits.begin(), hits.end());
    rec.seg_hi = *std::max_element(hits.begin(), hits.end());
    std::int64_t dx = rec.seg_hi[0] - rec.seg_lo[0];
    std::int64_t dy = rec.seg_hi[1] - rec.seg_lo[1];
    check(dx == std::abs(dy), "crossing is not a 45-degree segment");
    for (const Pt2& p : hits)
      check(on_segment(rec.seg_lo, rec.seg_hi, p),
            "crossing is not a single segment");

    auto fill_side = [&](const Path& path, const std::vector<Pt2>& zeta,
                         int axis, std::optional<int>& alpha,
                         std::optional<int>& omega, std::optional<int>& before,
                         std::optional<int>& after) {
      for (size_t i = 0; i < path.size(); ++i)
        if (on_segment(rec.seg_lo, rec.seg_hi, zeta[i])) {
          if (!alpha) alpha = path[i];
          omega = path[i];
        }
      // the path is strictly monotone in its color axis; measure progress
      // there to find the last vertex before / first after the crossing
      std::int64_t dir = zeta.back()[axis] >= zeta.front()[axis] ? 1 : -1;
      std::int64_t lo = std::min(dir * rec.seg_lo[axis], dir * rec.seg_hi[axis]);
      std::int64_t hi = std::max(dir * rec.seg_lo[axis], dir * rec.seg_hi[axis]);
      for (size_t i = 0; i < path.size(); ++i) {
        std::int64_t s = dir * zeta[i][axis];
        if (s < lo) before = path[i];
        if (s > hi && !after) after = path[i];
      }
    };
    fill_side(P, zp, 0, rec.alpha_p, rec.omega_p, rec.partial_p, rec.varpi_p);
    fill_side(Q, zq, 1, rec.alpha_q, rec.omega_q, rec.partial_q, rec.varpi_q);
    check(rec.alpha_p.has_value() == rec.alpha_q.has_value(),
          "lattice crossing vertex present on only one path");
    if (rec.alpha_p) {
      // both crossing subpaths must be colored in both coordinates
      ColorSet cs = color_set(positions, d, *rec.alpha_p, *rec.omega_p);
      check(cs.is_colored &&
                std::binary_search(cs.colors.begin(), cs.colors.end(), a) &&
                std::binary_search(cs.colors.begin(), cs.colors.end(), b),
            "crossing subpath of P is not colored in both coordinates");
    }
  } else {
    rec.delta_p = delta_vertex(P, {Q.front(), Q.back()}, a, b, positions);
    rec.delta_q = delta_vertex(Q, {P.front(), P.back()}, b, a, positions);
  }
  return rec;
}

bool pairs_avoiding(std::pair<int, int> pair1, std::pair<int, int> pair2,
                    const std::vector<int>& proj,
                    const PositionTable& positions, const DistanceOracle& d) {
  check(!proj.empty(), "pairs_avoiding: empty projection");
  ColorSet c1 = color_set(positions, d, pair1.first, pair1.second);
  ColorSet c2 = color_set(positions, d, pair2.first, pair2.second);
  if (!c1.is_colored || !c2.is_colored)
    throw std::invalid_argument("pairs_avoiding: pair is not colored");
  auto has = [](const std::vector<int>& set, int c) {
    return std::binary_search(set.begin(), set.end(), c);
  };
  auto p = [&](int v, int c) { return positions.pos[v][c]; };

  if (proj.size() == 1) {
    int c = proj[0];
    int lo1 = std::min(p(pair1.first, c), p(pair1.second, c));
    int hi1 = std::max(p(pair1.first, c), p(pair1.second, c));
    int lo2 = std::min(p(pair2.first, c), p(pair2.second, c));
    int hi2 = std::max(p(pair2.first, c), p(pair2.second, c));
    int lo = std::max(lo1, lo2), hi = std::min(hi1, hi2);
    if (lo > hi) return true;
    if (lo < hi) return false;
    bool shared = (lo == p(pair1.first, c) || lo == p(pair1.second, c)) &&
                  (lo == p(pair2.first, c) || lo == p(pair2.second, c));
    return shared;
  }

  // witness 2-subset {a,b} of proj covering a color of each pair
  for (size_t ia = 0; ia < proj.size(); ++ia)
    for (size_t ib = ia + 1; ib < proj.size(); ++ib) {
      int a = proj[ia], b = proj[ib];
      bool covers1 = has(c1.colors, a) || has(c1.colors, b);
      bool covers2 = has(c2.colors, a) || has(c2.colors, b);
      if (!covers1 || !covers2) continue;
      // rotate by 45 degrees: [[x,y]] becomes the axis-parallel box spanned
      // by (x0+x1, x0-x1) and (y0+y1, y0-y1)
      auto rot = [&](int v) {
        return std::array<int, 2>{p(v, a) + p(v, b), p(v, a) - p(v, b)};
      };
      auto r1s = rot(pair1.first), r1t = rot(pair1.second);
      auto r2s = rot(pair2.first), r2t = rot(pair2.second);
      std::array<int, 2> lo, hi;
      bool empty = false;
      for (int cc = 0; cc < 2; ++cc) {
        lo[cc] = std::max(std::min(r1s[cc], r1t[cc]), std::min(r2s[cc], r2t[cc]));
        hi[cc] = std::min(std::max(r1s[cc], r1t[cc]), std::max(r2s[cc], r2t[cc]));
        if (lo[cc] > hi[cc]) empty = true;
      }
      if (empty) return true;
      if (lo == hi) {
        bool shared1 = lo == r1s || lo == r1t;
        bool shared2 = lo == r2s || lo == r2t;
        if (shared1 && shared2) return true;
      }
    }
  return false;
}

bool paths_avoiding(const Path& P, const Path& Q,
                    const PositionTable& positions, const DistanceOracle&) {
  auto same_pos = [&](int u, int v) {
    return positions.pos[u] == positions.pos[v];
  };
  for (size_t i = 1; i + 1 < P.size(); ++i)
    for (int q : Q)
      if (same_pos(P[i], q)) return false;
  for (size_t i = 1; i + 1 < Q.size(); ++i)
    for (int v : P)
      if (same_pos(Q[i], v)) return false;
  return true;
}

std::vector<int> crossing_set_2d(const Path& P, const Path& Q, int a, int b,
                                 const PositionTable& positions,
                                 const DistanceOracle& d) {
  CrossingRecord rec = crossing_vertices(P, Q, a, b, positions, d);
  std::vector<int> out{P.front(), P.back()};
  for (const auto& f :
       {rec.alpha_p, rec.omega_p, rec.partial_p, rec.varpi_p, rec.delta_p})
    if (f) out.push_back(*f);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string crossing_record_json(const CrossingRecord& rec) {
  std::ostringstream out;
  auto field = [&](const char* name, const std::optional<int>& v) {
    out << ", \"" << name << "\": ";
    if (v)
      out << *v;
    else
      out << "null";
  };
  out << "{\"crossing\": " << (rec.crossing ? "true" : "false");
  field("alpha_p", rec.alpha_p);
  field("omega_p", rec.omega_p);
  field("partial_p", rec.partial_p);
  field("varpi_p", rec.varpi_p);
  field("delta_p", rec.delta_p);
  field("alpha_q", rec.alpha_q);
  field("omega_q", rec.omega_q);
  field("partial_q", rec.partial_q);
  field("varpi_q", rec.varpi_q);
  field("delta_q", rec.delta_q);
  out << "}";
  return out.str();
}

}  // namespace dsp

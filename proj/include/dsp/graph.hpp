#ifndef DSP_GRAPH_HPP
#define DSP_GRAPH_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dsp {

// Distances and positions use -1 as the explicit "unreachable" sentinel.
constexpr int kUnreachable = -1;

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Undirected simple graph over dense 0-based vertex ids.
// Immutable after construction; adjacency lists are sorted.
class Graph {
 public:
  Graph() : n_(0) {}
  // Validates: ids in range, no self-loops, no duplicate edges.
  Graph(int n, const std::vector<std::pair<int, int>>& edges);

  int num_vertices() const { return n_; }
  int num_edges() const { return m_; }
  const std::vector<int>& neighbors(int v) const { return adj_[v]; }
  bool has_edge(int u, int v) const;
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

 private:
  int n_;
  int m_ = 0;
  std::vector<std::vector<int>> adj_;
  std::vector<std::pair<int, int>> edges_;  // u < v, sorted
};

struct Instance {
  Graph graph;
  int k = 0;
  std::vector<std::pair<int, int>> terminals;  // (s_i, t_i), 0-based
};

// pos[v][i] = dist(s_i, v), kUnreachable when disconnected.
struct PositionTable {
  int k = 0;
  std::vector<std::vector<int>> pos;  // n rows, k columns

  const std::vector<int>& at(int v) const { return pos[v]; }
};

using Path = std::vector<int>;

struct Solution {
  std::vector<Path> paths;
};

struct Verdict {
  bool ok = false;
  std::string violation;  // empty when ok

  static Verdict pass() { return Verdict{true, {}}; }
  static Verdict fail(std::string why) { return Verdict{false, std::move(why)}; }
};

std::vector<int> bfs_distances(const Graph& g, int source);

PositionTable compute_positions(const Instance& inst);

// Memoizing all-sources BFS distance oracle. Tests may substitute a
// table-backed implementation.
class DistanceOracle {
 public:
  virtual ~DistanceOracle() = default;
  virtual int dist(int u, int v) const = 0;
};

class BfsDistanceOracle : public DistanceOracle {
 public:
  explicit BfsDistanceOracle(const Graph& g) : g_(&g), memo_(g.num_vertices()) {}
  int dist(int u, int v) const override;

 private:
  const Graph* g_;
  mutable std::vector<std::vector<int>> memo_;  // lazily filled per source
};

// true iff v lies on a shortest u-w path, i.e. dist(u,v)+dist(v,w)=dist(u,w).
bool between(const DistanceOracle& d, int u, int v, int w);

// Instance file format:
//   c <comment>
//   p dsp <n> <m> <k>
//   e <u> <v>          (m lines)
//   t <s> <t>          (k lines)
Instance parse_instance(std::istream& in);
Instance parse_instance_text(const std::string& text);
std::string format_instance(const Instance& inst);

// Solution text: "yes" + k lines "path <i>: v0 v1 ... vL", or "no".
std::string format_solution(const Solution& sol);
std::optional<Solution> parse_solution(std::istream& in, int k);

Verdict verify_solution(const Instance& inst, const PositionTable& positions,
                        const Solution& candidate);

}  // namespace dsp

#endif

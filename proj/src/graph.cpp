#include "dsp/graph.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <sstream>
#include <unordered_set>

namespace dsp {

Graph::Graph(int n, const std::vector<std::pair<int, int>>& edges) : n_(n) {
  if (n < 0) throw std::invalid_argument("negative vertex count");
  adj_.resize(n);
  std::unordered_set<std::int64_t> seen;
  edges_.reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw std::invalid_argument("edge endpoint out of range");
    if (u == v) throw std::invalid_argument("self-loop");
    int a = std::min(u, v), b = std::max(u, v);
    if (!seen.insert(static_cast<std::int64_t>(a) * n + b).second)
      throw std::invalid_argument("duplicate edge");
    adj_[a].push_back(b);
    adj_[b].push_back(a);
    edges_.emplace_back(a, b);
  }
  for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
  std::sort(edges_.begin(), edges_.end());
  m_ = static_cast<int>(edges_.size());
}

bool Graph::has_edge(int u, int v) const {
  if (u < 0 || u >= n_ || v < 0 || v >= n_) return false;
  const auto& nb = adj_[u];
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<int> bfs_distances(const Graph& g, int source) {
  std::vector<int> dist(g.num_vertices(), kUnreachable);
  std::deque<int> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int w : g.neighbors(u)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

PositionTable compute_positions(const Instance& inst) {
  PositionTable table;
  table.k = inst.k;
  int n = inst.graph.num_vertices();
  table.pos.assign(n, std::vector<int>(inst.k, kUnreachable));
  for (int i = 0; i < inst.k; ++i) {
    auto dist = bfs_distances(inst.graph, inst.terminals[i].first);
    for (int v = 0; v < n; ++v) table.pos[v][i] = dist[v];
  }
  return table;
}

int BfsDistanceOracle::dist(int u, int v) const {
  if (memo_[u].empty() && memo_[v].empty()) memo_[u] = bfs_distances(*g_, u);
  if (!memo_[u].empty()) return memo_[u][v];
  return memo_[v][u];
}

bool between(const DistanceOracle& d, int u, int v, int w) {
  int duv = d.dist(u, v), dvw = d.dist(v, w), duw = d.dist(u, w);
  if (duv == kUnreachable || dvw == kUnreachable || duw == kUnreachable)
    return false;
  return duv + dvw == duw;
}

namespace {

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

int parse_int(const std::string& tok, int lineno, const char* what) {
  try {
    size_t used = 0;
    int value = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return value;
  } catch (const std::exception&) {
    throw ParseError(lineno, std::string("bad ") + what + " '" + tok + "'");
  }
}

}  // namespace

Instance parse_instance(std::istream& in) {
  std::string line;
  int lineno = 0;
  int n = -1, m = -1, k = -1;
  std::vector<std::pair<int, int>> edges, terminals;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = tokens(line);
    if (toks.empty() || toks[0] == "c") continue;
    if (toks[0] == "p") {
      if (n >= 0) throw ParseError(lineno, "duplicate problem line");
      if (toks.size() != 5 || toks[1] != "dsp")
        throw ParseError(lineno, "expected 'p dsp <n> <m> <k>'");
      n = parse_int(toks[2], lineno, "vertex count");
      m = parse_int(toks[3], lineno, "edge count");
      k = parse_int(toks[4], lineno, "pair count");
      if (n < 0 || m < 0 || k < 1) throw ParseError(lineno, "bad problem sizes");
    } else if (toks[0] == "e") {
      if (n < 0) throw ParseError(lineno, "edge before problem line");
      if (toks.size() != 3) throw ParseError(lineno, "expected 'e <u> <v>'");
      edges.emplace_back(parse_int(toks[1], lineno, "vertex"),
                         parse_int(toks[2], lineno, "vertex"));
    } else if (toks[0] == "t") {
      if (n < 0) throw ParseError(lineno, "terminal before problem line");
      if (toks.size() != 3) throw ParseError(lineno, "expected 't <s> <t>'");
      terminals.emplace_back(parse_int(toks[1], lineno, "vertex"),
                             parse_int(toks[2], lineno, "vertex"));
    } else {
      throw ParseError(lineno, "unknown line type '" + toks[0] + "'");
    }
  }
  if (n < 0) throw ParseError(lineno, "missing problem line");
  if (static_cast<int>(edges.size()) != m)
    throw ParseError(lineno, "edge count mismatch");
  if (static_cast<int>(terminals.size()) != k)
    throw ParseError(lineno, "terminal pair count mismatch");
  Instance inst;
  try {
    inst.graph = Graph(n, edges);
  } catch (const std::exception& e) {
    throw ParseError(lineno, e.what());
  }
  inst.k = k;
  inst.terminals = terminals;
  std::unordered_set<int> used;
  for (auto [s, t] : terminals) {
    if (s < 0 || s >= n || t < 0 || t >= n)
      throw ParseError(lineno, "terminal out of range");
    if (s == t)
      throw ParseError(lineno, "terminals within a pair must be distinct");
    if (!used.insert(s).second || !used.insert(t).second)
      throw ParseError(lineno, "terminal vertices must be pairwise distinct");
  }
  return inst;
}

Instance parse_instance_text(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

std::string format_instance(const Instance& inst) {
  std::ostringstream out;
  out << "p dsp " << inst.graph.num_vertices() << ' ' << inst.graph.num_edges()
      << ' ' << inst.k << '\n';
  for (auto [u, v] : inst.graph.edges()) out << "e " << u << ' ' << v << '\n';
  for (auto [s, t] : inst.terminals) out << "t " << s << ' ' << t << '\n';
  return out.str();
}

std::string format_solution(const Solution& sol) {
  std::ostringstream out;
  out << "yes\n";
  for (size_t i = 0; i < sol.paths.size(); ++i) {
    out << "path " << i + 1 << ':';
    for (int v : sol.paths[i]) out << ' ' << v;
    out << '\n';
  }
  return out.str();
}

std::optional<Solution> parse_solution(std::istream& in, int k) {
  std::string line;
  if (!std::getline(in, line)) return std::nullopt;
  auto first = tokens(line);
  if (first.size() == 1 && first[0] == "no") return std::nullopt;
  if (first.size() != 1 || first[0] != "yes")
    throw ParseError(1, "expected 'yes' or 'no'");
  Solution sol;
  for (int i = 0; i < k; ++i) {
    if (!std::getline(in, line)) throw ParseError(i + 2, "missing path line");
    auto toks = tokens(line);
    if (toks.size() < 3 || toks[0] != "path" ||
        toks[1] != std::to_string(i + 1) + ":")
      throw ParseError(i + 2, "expected 'path " + std::to_string(i + 1) +
                                  ": v0 v1 ...'");
    Path p;
    for (size_t j = 2; j < toks.size(); ++j)
      p.push_back(parse_int(toks[j], i + 2, "vertex"));
    sol.paths.push_back(std::move(p));
  }
  return sol;
}

Verdict verify_solution(const Instance& inst, const PositionTable& positions,
                        const Solution& candidate) {
  int n = inst.graph.num_vertices();
  if (static_cast<int>(candidate.paths.size()) != inst.k)
    return Verdict::fail("expected " + std::to_string(inst.k) + " paths, got " +
                         std::to_string(candidate.paths.size()));
  std::vector<int> owner(n, -1);
  for (int i = 0; i < inst.k; ++i) {
    const Path& p = candidate.paths[i];
    auto tag = [&](const std::string& why) {
      return Verdict::fail("path " + std::to_string(i + 1) + ": " + why);
    };
    if (p.empty()) return tag("empty");
    auto [s, t] = inst.terminals[i];
    if (p.front() != s) return tag("does not start at its source");
    if (p.back() != t) return tag("does not end at its target");
    int d = positions.pos[t][i];
    if (d == kUnreachable) return tag("target unreachable from source");
    if (static_cast<int>(p.size()) != d + 1)
      return tag("length " + std::to_string(p.size() - 1) +
                 " but shortest distance is " + std::to_string(d));
    for (size_t j = 0; j < p.size(); ++j) {
      int v = p[j];
      if (v < 0 || v >= n) return tag("vertex id out of range");
      if (j > 0 && !inst.graph.has_edge(p[j - 1], v))
        return tag("missing edge " + std::to_string(p[j - 1]) + "-" +
                   std::to_string(v));
      if (positions.pos[v][i] != static_cast<int>(j))
        return tag("vertex " + std::to_string(v) + " off the distance layer");
      if (owner[v] != -1)
        return tag("vertex " + std::to_string(v) + " shared with path " +
                   std::to_string(owner[v] + 1));
      owner[v] = i;
    }
  }
  return Verdict::pass();
}

}  // namespace dsp

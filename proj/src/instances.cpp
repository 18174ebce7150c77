#include "dsp/instances.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dsp {

Instance builtin_fig1() {
  Instance inst;
  inst.graph = Graph(14, {{0, 1},
                          {1, 2},
                          {2, 3},
                          {3, 4},
                          {1, 8},
                          {2, 7},
                          {1, 3},
                          {2, 9},
                          {8, 3},
                          {5, 6},
                          {6, 7},
                          {7, 8},
                          {8, 9},
                          {9, 10},
                          {10, 11},
                          {6, 12},
                          {12, 13},
                          {13, 4}});
  inst.k = 2;
  inst.terminals = {{0, 5}, {4, 11}};
  return inst;
}

namespace {

// modulo draw on the raw engine output: stable across standard libraries,
// unlike std::uniform_int_distribution
int draw_mod(std::mt19937_64& rng, int n) {
  return static_cast<int>(rng() % static_cast<std::uint64_t>(n));
}

}  // namespace

Instance gen_random(int n, double edge_prob, int k, std::uint64_t seed) {
  if (n < 2 * k) throw std::invalid_argument("need n >= 2k");
  if (!(edge_prob > 0.0 && edge_prob <= 1.0))
    throw std::invalid_argument("edge_prob out of (0,1]");
  std::mt19937_64 rng(seed);
  auto threshold =
      static_cast<std::uint64_t>(edge_prob * 18446744073709551616.0);
  for (int retry = 0; retry < 1000; ++retry) {
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) {
        std::uint64_t r = rng();
        if (edge_prob >= 1.0 || r < threshold) edges.emplace_back(u, v);
      }
    Instance inst;
    inst.graph = Graph(n, edges);
    inst.k = k;
    std::set<int> chosen;
    while (static_cast<int>(chosen.size()) < 2 * k)
      chosen.insert(draw_mod(rng, n));
    std::vector<int> terms(chosen.begin(), chosen.end());
    // a seeded shuffle so sources and targets are not id-sorted
    for (int i = static_cast<int>(terms.size()) - 1; i > 0; --i)
      std::swap(terms[i], terms[draw_mod(rng, i + 1)]);
    for (int i = 0; i < k; ++i)
      inst.terminals.emplace_back(terms[2 * i], terms[2 * i + 1]);
    PositionTable positions = compute_positions(inst);
    bool ok = true;
    for (int i = 0; i < k; ++i)
      if (positions.pos[inst.terminals[i].second][i] == kUnreachable) ok = false;
    if (ok) return inst;
  }
  throw std::runtime_error("gen_random: retry budget exhausted");
}

namespace {

std::vector<std::string> mcc_tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace

MccInstance parse_mcc(std::istream& in) {
  std::string line;
  int lineno = 0, n = -1, m = -1, k = -1;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> coloring;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = mcc_tokens(line);
    if (toks.empty() || toks[0] == "c") continue;
    try {
      if (toks[0] == "p") {
        if (toks.size() != 5 || toks[1] != "mcc")
          throw std::invalid_argument("expected 'p mcc <n> <m> <k>'");
        n = std::stoi(toks[2]);
        m = std::stoi(toks[3]);
        k = std::stoi(toks[4]);
        if (n < 1 || m < 0 || k < 1)
          throw std::invalid_argument("bad problem sizes");
        coloring.assign(n, -1);
      } else if (toks[0] == "e") {
        if (n < 0) throw std::invalid_argument("edge before problem line");
        edges.emplace_back(std::stoi(toks[1]), std::stoi(toks[2]));
      } else if (toks[0] == "v") {
        if (n < 0) throw std::invalid_argument("color before problem line");
        int v = std::stoi(toks[1]), col = std::stoi(toks[2]);
        if (v < 0 || v >= n || col < 1 || col > k)
          throw std::invalid_argument("vertex or color out of range");
        coloring[v] = col - 1;
      } else {
        throw std::invalid_argument("unknown line type '" + toks[0] + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(lineno, e.what());
    }
  }
  if (n < 0) throw ParseError(lineno, "missing problem line");
  if (static_cast<int>(edges.size()) != m)
    throw ParseError(lineno, "edge count mismatch");
  MccInstance mcc;
  try {
    mcc.graph = Graph(n, edges);
  } catch (const std::exception& e) {
    throw ParseError(lineno, e.what());
  }
  mcc.k = k;
  mcc.coloring = coloring;
  std::vector<int> class_size(k, 0);
  for (int v = 0; v < n; ++v) {
    if (coloring[v] < 0) throw ParseError(lineno, "uncolored vertex");
    ++class_size[coloring[v]];
  }
  for (int c = 0; c < k; ++c)
    if (class_size[c] == 0) throw ParseError(lineno, "empty color class");
  return mcc;
}

MccInstance parse_mcc_text(const std::string& text) {
  std::istringstream in(text);
  return parse_mcc(in);
}

std::string format_mcc(const MccInstance& mcc) {
  std::ostringstream out;
  out << "p mcc " << mcc.graph.num_vertices() << ' ' << mcc.graph.num_edges()
      << ' ' << mcc.k << '\n';
  for (auto [u, v] : mcc.graph.edges()) out << "e " << u << ' ' << v << '\n';
  for (int v = 0; v < mcc.graph.num_vertices(); ++v)
    out << "v " << v << ' ' << mcc.coloring[v] + 1 << '\n';
  return out.str();
}

MccInstance gen_random_mcc(int k, int per_color, double edge_prob,
                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto threshold =
      static_cast<std::uint64_t>(edge_prob * 18446744073709551616.0);
  int n = k * per_color;
  MccInstance mcc;
  mcc.k = k;
  mcc.coloring.resize(n);
  for (int v = 0; v < n; ++v) mcc.coloring[v] = v % k;
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      std::uint64_t r = rng();
      if (mcc.coloring[u] == mcc.coloring[v]) continue;  // irrelevant edges
      if (edge_prob >= 1.0 || r < threshold) edges.emplace_back(u, v);
    }
  mcc.graph = Graph(n, edges);
  return mcc;
}

Instance gen_mcc_reduction(const MccInstance& mcc, MccReductionTrace* trace) {
  int n = mcc.graph.num_vertices();
  int k = mcc.k;
  // raw vertex ids before merging:
  //   terminals: s_a, t_a (horizontal), s_{k+a}, t_{k+a} (vertical)
  //   per graph vertex v two subdivided paths of 3n inner vertices each
  int base = 4 * k;
  auto sh = [&](int a) { return a; };
  auto th = [&](int a) { return k + a; };
  auto sv = [&](int a) { return 2 * k + a; };
  auto tv = [&](int a) { return 3 * k + a; };
  // inner vertex blocks: [sub_s(n), core(n), sub_t(n)] for P then for Q
  auto p_sub_s = [&](int v, int j) { return base + 6 * n * v + j; };
  auto p_core = [&](int v, int j) { return base + 6 * n * v + n + j; };
  auto p_sub_t = [&](int v, int j) { return base + 6 * n * v + 2 * n + j; };
  auto q_sub_s = [&](int v, int j) { return base + 6 * n * v + 3 * n + j; };
  auto q_core = [&](int v, int j) { return base + 6 * n * v + 4 * n + j; };
  auto q_sub_t = [&](int v, int j) { return base + 6 * n * v + 5 * n + j; };
  int raw = base + 6 * n * n;

  std::vector<std::string> names(raw);
  for (int a = 0; a < k; ++a) {
    names[sh(a)] = "s" + std::to_string(a + 1);
    names[th(a)] = "t" + std::to_string(a + 1);
    names[sv(a)] = "s" + std::to_string(k + a + 1);
    names[tv(a)] = "t" + std::to_string(k + a + 1);
  }
  for (int v = 0; v < n; ++v)
    for (int j = 0; j < n; ++j) {
      auto tag = [&](const char* kind) {
        return std::string(kind) + "_v" + std::to_string(v + 1) + "^" +
               std::to_string(j + 1);
      };
      names[p_sub_s(v, j)] = tag("ps");
      names[p_core(v, j)] = tag("p");
      names[p_sub_t(v, j)] = tag("pt");
      names[q_sub_s(v, j)] = tag("qs");
      names[q_core(v, j)] = tag("q");
      names[q_sub_t(v, j)] = tag("qt");
    }

  auto chain = [&](std::vector<std::pair<int, int>>& edges,
                   const std::vector<int>& vs) {
    for (size_t i = 0; i + 1 < vs.size(); ++i)
      edges.emplace_back(vs[i], vs[i + 1]);
  };
  std::vector<std::pair<int, int>> raw_edges;
  for (int v = 0; v < n; ++v) {
    int c = mcc.coloring[v];
    std::vector<int> pv{sh(c)}, qv{sv(c)};
    for (int j = 0; j < n; ++j) pv.push_back(p_sub_s(v, j));
    for (int j = 0; j < n; ++j) pv.push_back(p_core(v, j));
    for (int j = 0; j < n; ++j) pv.push_back(p_sub_t(v, j));
    pv.push_back(th(c));
    for (int j = 0; j < n; ++j) qv.push_back(q_sub_s(v, j));
    for (int j = 0; j < n; ++j) qv.push_back(q_core(v, j));
    for (int j = 0; j < n; ++j) qv.push_back(q_sub_t(v, j));
    qv.push_back(tv(c));
    chain(raw_edges, pv);
    chain(raw_edges, qv);
  }

  // union-find over raw ids; p-cores lead so merged vertices keep the p-name
  std::vector<int> parent(raw);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      bool merge = mcc.coloring[i] == mcc.coloring[j] ||
                   !mcc.graph.has_edge(i, j);
      if (!merge) continue;
      int p = p_core(i, j), q = q_core(j, i);
      parent[find(q)] = find(p);
      if (trace) trace->merges.emplace_back(names[p], names[q]);
    }

  std::vector<int> dense(raw, -1);
  int next_id = 0;
  for (int x = 0; x < raw; ++x)
    if (find(x) == x) dense[x] = next_id++;
  auto to_dense = [&](int x) { return dense[find(x)]; };

  std::set<std::pair<int, int>> edge_set;
  for (auto [u, v] : raw_edges) {
    int du = to_dense(u), dv = to_dense(v);
    edge_set.emplace(std::min(du, dv), std::max(du, dv));
  }
  Instance inst;
  inst.graph = Graph(next_id,
                     std::vector<std::pair<int, int>>(edge_set.begin(),
                                                      edge_set.end()));
  inst.k = 2 * k;
  for (int a = 0; a < k; ++a)
    inst.terminals.emplace_back(to_dense(sh(a)), to_dense(th(a)));
  for (int a = 0; a < k; ++a)
    inst.terminals.emplace_back(to_dense(sv(a)), to_dense(tv(a)));
  if (trace) {
    trace->names.assign(next_id, {});
    for (int x = 0; x < raw; ++x)
      if (find(x) == x) trace->names[dense[x]] = names[x];
  }
  return inst;
}

bool mcc_bruteforce(const MccInstance& mcc, std::uint64_t budget) {
  int n = mcc.graph.num_vertices();
  std::vector<std::vector<int>> classes(mcc.k);
  for (int v = 0; v < n; ++v) classes[mcc.coloring[v]].push_back(v);
  std::uint64_t product = 1;
  for (const auto& cls : classes) {
    product *= cls.size();
    if (product > budget) throw std::runtime_error("mcc_bruteforce: budget");
  }
  std::vector<size_t> pick(mcc.k, 0);
  while (true) {
    bool clique = true;
    for (int a = 0; a < mcc.k && clique; ++a)
      for (int b = a + 1; b < mcc.k && clique; ++b)
        if (!mcc.graph.has_edge(classes[a][pick[a]], classes[b][pick[b]]))
          clique = false;
    if (clique) return true;
    int j = mcc.k - 1;
    while (j >= 0 && ++pick[j] == classes[j].size()) pick[j--] = 0;
    if (j < 0) return false;
  }
}

Instance gen_grid_cross(int side) {
  if (side < 3) throw std::invalid_argument("side too small");
  auto id = [side](int r, int c) { return r * side + c; };
  std::vector<std::pair<int, int>> edges;
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c) {
      if (c + 1 < side) edges.emplace_back(id(r, c), id(r, c + 1));
      if (r + 1 < side) edges.emplace_back(id(r, c), id(r + 1, c));
    }
  Instance inst;
  inst.graph = Graph(side * side, edges);
  inst.k = 2;
  inst.terminals = {{id(0, 0), id(side - 1, side - 1)},
                    {id(0, side - 1), id(side - 1, 0)}};
  return inst;
}

}  // namespace dsp

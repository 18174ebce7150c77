#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "dsp/dsp2.hpp"
#include "dsp/geometry.hpp"
#include "dsp/graph.hpp"
#include "dsp/instances.hpp"
#include "dsp/kdsp.hpp"
#include "dsp/oracle.hpp"

namespace {

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitError = 2;
constexpr int kExitUnknown = 3;

dsp::Instance read_instance(const std::string& path) {
  if (path == "-") return dsp::parse_instance(std::cin);
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return dsp::parse_instance(in);
}

dsp::MccInstance read_mcc(const std::string& path) {
  if (path == "-") return dsp::parse_mcc(std::cin);
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return dsp::parse_mcc(in);
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

int run_solve(const std::string& file, const std::string& algo,
              long long budget, bool require_complete, bool trace,
              int threads) {
  dsp::Instance inst = read_instance(file);
  std::string chosen = algo;
  if (chosen == "auto") chosen = inst.k == 2 ? "dsp2" : "kdsp";
  dsp::PositionTable positions = dsp::compute_positions(inst);

  if (chosen == "dsp2") {
    if (inst.k != 2) {
      std::cerr << "error: --algo dsp2 needs exactly two pairs\n";
      return kExitError;
    }
    dsp::Dsp2Trace tr;
    auto sol = dsp::solve_dsp2(inst, &tr);
    if (trace)
      std::cerr << "trace: guesses=" << tr.guesses << " case="
                << (sol ? dsp::dsp2_tag_name(tr.found.tag) : "-")
                << " swapped=" << (tr.swapped ? "yes" : "no") << "\n";
    if (!sol) {
      std::cout << "no\n";
      return kExitNo;
    }
    if (!dsp::verify_solution(inst, positions, *sol).ok) {
      std::cerr << "error: solver produced an unverified solution\n";
      return kExitError;
    }
    std::cout << dsp::format_solution(*sol);
    return kExitYes;
  }

  dsp::KdspConfig cfg;
  cfg.guess_budget = budget;
  cfg.require_complete = require_complete;
  cfg.threads = threads;
  dsp::KdspResult res = dsp::solve_kdsp(inst, cfg);
  if (trace)
    std::cerr << "trace: guesses=" << res.guesses << " complete="
              << (res.complete ? "yes" : "no") << " winning="
              << (res.status == dsp::KdspStatus::kYes
                      ? dsp::crossing_guess_text(res.winning)
                      : std::string("-"))
              << "\n";
  switch (res.status) {
    case dsp::KdspStatus::kYes:
      if (!dsp::verify_solution(inst, positions, *res.solution).ok) {
        std::cerr << "error: solver produced an unverified solution\n";
        return kExitError;
      }
      std::cout << dsp::format_solution(*res.solution);
      return kExitYes;
    case dsp::KdspStatus::kNo:
      std::cout << "no\n";
      return kExitNo;
    default:
      std::cout << "unknown\n";
      return kExitUnknown;
  }
}

int run_oracle(const std::string& file, int max_paths) {
  dsp::Instance inst = read_instance(file);
  dsp::EnumLimits limits;
  limits.max_paths_per_pair = max_paths;
  dsp::OracleResult res = dsp::oracle_solve(inst, limits);
  switch (res.status) {
    case dsp::OracleStatus::kYes:
      std::cout << dsp::format_solution(*res.solution);
      return kExitYes;
    case dsp::OracleStatus::kNo:
      std::cout << "no\n";
      return kExitNo;
    default:
      std::cout << "unknown\n";
      return kExitUnknown;
  }
}

int run_verify(const std::string& inst_file, const std::string& sol_file) {
  dsp::Instance inst = read_instance(inst_file);
  std::ifstream in(sol_file);
  std::istream* sp = &std::cin;
  if (sol_file != "-") {
    if (!in) throw std::runtime_error("cannot open " + sol_file);
    sp = &in;
  }
  auto sol = dsp::parse_solution(*sp, inst.k);
  if (!sol) {
    std::cerr << "error: solution file does not claim a solution\n";
    return kExitError;
  }
  dsp::Verdict v =
      dsp::verify_solution(inst, dsp::compute_positions(inst), *sol);
  if (v.ok) {
    std::cout << "ok\n";
    return kExitYes;
  }
  std::cout << "violation: " << v.violation << "\n";
  return kExitNo;
}

int run_bench(const std::string& file, long long budget, int threads) {
  auto t0 = std::chrono::steady_clock::now();
  dsp::Instance inst = read_instance(file);
  double parse_ms = ms_since(t0);

  t0 = std::chrono::steady_clock::now();
  dsp::PositionTable positions = dsp::compute_positions(inst);
  double pos_ms = ms_since(t0);

  std::string algo = inst.k == 2 ? "dsp2" : "kdsp";
  long long guesses = 0;
  std::string result;
  t0 = std::chrono::steady_clock::now();
  if (algo == "dsp2") {
    dsp::Dsp2Trace tr;
    auto sol = dsp::solve_dsp2(inst, &tr);
    guesses = tr.guesses;
    result = sol ? "yes" : "no";
  } else {
    dsp::KdspConfig cfg;
    cfg.guess_budget = budget;
    cfg.threads = threads;
    dsp::KdspResult res = dsp::solve_kdsp(inst, cfg);
    guesses = res.guesses;
    result = res.status == dsp::KdspStatus::kYes
                 ? "yes"
                 : (res.status == dsp::KdspStatus::kNo ? "no" : "unknown");
  }
  double solve_ms = ms_since(t0);

  std::cout << "{\"file\": \"" << file << "\", \"n\": "
            << inst.graph.num_vertices() << ", \"m\": "
            << inst.graph.num_edges() << ", \"k\": " << inst.k
            << ", \"algo\": \"" << algo << "\", \"result\": \"" << result
            << "\", \"parse_ms\": " << parse_ms << ", \"positions_ms\": "
            << pos_ms << ", \"solve_ms\": " << solve_ms
            << ", \"guesses\": " << guesses << "}\n";
  return kExitYes;
}

int run_export_dot(const std::string& inst_file, const std::string& sol_file,
                   int a, int b) {
  dsp::Instance inst = read_instance(inst_file);
  if (a < 0 || a >= inst.k || b < 0 || b >= inst.k || a == b)
    throw std::runtime_error("projection coordinates out of range");
  dsp::PositionTable positions = dsp::compute_positions(inst);
  std::optional<dsp::Solution> sol;
  if (!sol_file.empty()) {
    std::ifstream in(sol_file);
    if (!in) throw std::runtime_error("cannot open " + sol_file);
    sol = dsp::parse_solution(in, inst.k);
  }
  auto owner = [&](int v) {
    if (!sol) return -1;
    for (int i = 0; i < inst.k; ++i)
      for (int u : sol->paths[i])
        if (u == v) return i;
    return -1;
  };
  static const char* colors[] = {"red",  "blue",   "darkgreen",
                                 "orange", "purple", "brown"};
  std::cout << "graph projection {\n"
            << "  // coordinates: x = pos^" << a << ", y = pos^" << b << "\n"
            << "  node [shape=point, width=0.12];\n";
  for (int i = 0; i < inst.k; ++i) {
    auto [s, t] = inst.terminals[i];
    std::cout << "  // pair " << i + 1 << ": rectangle corners pos(s)=("
              << positions.pos[s][a] << "," << positions.pos[s][b]
              << ") pos(t)=(" << positions.pos[t][a] << ","
              << positions.pos[t][b] << ")\n";
  }
  for (int v = 0; v < inst.graph.num_vertices(); ++v) {
    int pa = positions.pos[v][a], pb = positions.pos[v][b];
    if (pa == dsp::kUnreachable || pb == dsp::kUnreachable) continue;
    int o = owner(v);
    std::cout << "  v" << v << " [pos=\"" << pa << "," << pb << "!\"";
    if (o >= 0)
      std::cout << ", color=" << colors[o % 6] << ", width=0.2, xlabel=\"" << v
                << "\"";
    std::cout << "];\n";
  }
  for (auto [u, v] : inst.graph.edges()) {
    if (positions.pos[u][a] == dsp::kUnreachable ||
        positions.pos[v][a] == dsp::kUnreachable ||
        positions.pos[u][b] == dsp::kUnreachable ||
        positions.pos[v][b] == dsp::kUnreachable)
      continue;
    int ou = owner(u), ov = owner(v);
    bool on_path = false;
    if (sol && ou >= 0 && ou == ov) {
      const auto& P = sol->paths[ou];
      for (std::size_t t = 0; t + 1 < P.size(); ++t)
        if ((P[t] == u && P[t + 1] == v) || (P[t] == v && P[t + 1] == u))
          on_path = true;
    }
    std::cout << "  v" << u << " -- v" << v;
    if (on_path)
      std::cout << " [color=" << colors[ou % 6] << ", penwidth=2]";
    else
      std::cout << " [color=gray80]";
    std::cout << ";\n";
  }
  std::cout << "}\n";
  return kExitYes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact solvers for disjoint shortest paths on unit-length "
               "undirected graphs"};
  app.require_subcommand(1);

  std::string file = "-", sol_file, algo = "auto";
  long long budget = 1'000'000;
  bool require_complete = false, trace = false;
  int threads = 1, max_paths = 100000, proj_a = 0, proj_b = 1;

  auto* solve = app.add_subcommand("solve", "solve a DSP instance");
  solve->add_option("file", file, "instance file, - for stdin");
  solve->add_option("--algo", algo, "auto|dsp2|kdsp")
      ->check(CLI::IsMember({"auto", "dsp2", "kdsp"}));
  solve->add_option("--budget", budget, "guess budget for kdsp");
  solve->add_flag("--require-complete", require_complete,
                  "run the kdsp enumeration to exhaustion");
  solve->add_flag("--trace", trace, "print solver trace to stderr");
  solve->add_option("--threads", threads, "parallel guess evaluation");

  auto* oracle = app.add_subcommand("oracle", "exhaustive ground-truth solve");
  oracle->add_option("file", file, "instance file, - for stdin");
  oracle->add_option("--max-paths", max_paths, "per-pair enumeration cap");

  auto* gen = app.add_subcommand("gen", "generate instances");
  gen->require_subcommand(1);
  int gn = 10, gk = 2, gside = 40;
  double gp = 0.3;
  std::uint64_t gseed = 1;
  std::string mcc_file;
  auto* grandom = gen->add_subcommand("random", "seeded random instance");
  grandom->add_option("--n", gn, "vertices");
  grandom->add_option("--p", gp, "edge probability");
  grandom->add_option("--k", gk, "terminal pairs");
  grandom->add_option("--seed", gseed, "rng seed");
  auto* gfig1 = gen->add_subcommand("fig1", "the built-in worked example");
  auto* gmcc = gen->add_subcommand(
      "mcc", "reduce a multicolored-clique instance to 2k-DSP");
  gmcc->add_option("--file", mcc_file, "mcc file, - for stdin")->required();
  auto* ggrid = gen->add_subcommand("grid", "grid with two crossing pairs");
  ggrid->add_option("--side", gside, "grid side length");

  auto* verify = app.add_subcommand("verify", "check a solution file");
  std::string v_inst, v_sol;
  verify->add_option("instance", v_inst, "instance file")->required();
  verify->add_option("solution", v_sol, "solution file, - for stdin")
      ->required();

  auto* bench = app.add_subcommand("bench", "timing breakdown as JSON");
  bench->add_option("file", file, "instance file, - for stdin");
  bench->add_option("--budget", budget, "guess budget for kdsp");
  bench->add_option("--threads", threads, "parallel guess evaluation");

  auto* exp = app.add_subcommand("export-dot", "plane projection as graphviz");
  exp->add_option("file", file, "instance file, - for stdin");
  exp->add_option("--solution", sol_file, "solution file to highlight");
  exp->add_option("--a", proj_a, "first projection coordinate");
  exp->add_option("--b", proj_b, "second projection coordinate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (solve->parsed())
      return run_solve(file, algo, budget, require_complete, trace, threads);
    if (oracle->parsed()) return run_oracle(file, max_paths);
    if (gen->parsed()) {
      if (grandom->parsed()) {
        std::cout << dsp::format_instance(dsp::gen_random(gn, gp, gk, gseed));
        return kExitYes;
      }
      if (gfig1->parsed()) {
        std::cout << dsp::format_instance(dsp::builtin_fig1());
        return kExitYes;
      }
      if (gmcc->parsed()) {
        std::cout << dsp::format_instance(
            dsp::gen_mcc_reduction(read_mcc(mcc_file)));
        return kExitYes;
      }
      if (ggrid->parsed()) {
        std::cout << dsp::format_instance(dsp::gen_grid_cross(gside));
        return kExitYes;
      }
    }
    if (verify->parsed()) return run_verify(v_inst, v_sol);
    if (bench->parsed()) return run_bench(file, budget, threads);
    if (exp->parsed()) return run_export_dot(file, sol_file, proj_a, proj_b);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

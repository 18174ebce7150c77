#ifndef DSP_INSTANCES_HPP
#define DSP_INSTANCES_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dsp/graph.hpp"

namespace dsp {

// The worked 14-vertex example: two pairs whose solution paths cross once.
// Vertex ids: 0=s1, 4=s2, 5=t1, 11=t2.
Instance builtin_fig1();

// Seeded Erdos-Renyi instance with distinct terminals, resampled until every
// target is reachable from its source (bounded retries).
Instance gen_random(int n, double edge_prob, int k, std::uint64_t seed);

struct MccInstance {
  Graph graph;
  int k = 0;
  std::vector<int> coloring;  // vertex -> color in [0,k)
};

// File format: "p mcc <n> <m> <k>", "e <u> <v>" lines, "v <vertex> <color>"
// lines with 1-based colors.
MccInstance parse_mcc(std::istream& in);
MccInstance parse_mcc_text(const std::string& text);
std::string format_mcc(const MccInstance& mcc);

// Random colored graph for the reduction-equivalence suites.
MccInstance gen_random_mcc(int k, int per_color, double edge_prob,
                           std::uint64_t seed);

struct MccReductionTrace {
  std::vector<std::string> names;                     // final vertex -> label
  std::vector<std::pair<std::string, std::string>> merges;
};

// Multicolored Clique -> 2k-DSP: horizontal paths P_v and vertical paths
// Q_v over a grid, first/last edges subdivided by n vertices, p_{v_i}^j
// merged with q_{v_j}^i when the two vertices cannot share a clique.
Instance gen_mcc_reduction(const MccInstance& mcc,
                           MccReductionTrace* trace = nullptr);

// Exhaustive multicolored-clique check over the product of color classes.
bool mcc_bruteforce(const MccInstance& mcc,
                    std::uint64_t budget = 10'000'000);

// Two axis-aligned terminal pairs on an n-by-n grid whose straight
// connections cross in the middle (performance test instance).
Instance gen_grid_cross(int side);

}  // namespace dsp

#endif

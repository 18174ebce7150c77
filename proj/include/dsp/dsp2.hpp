#ifndef DSP_DSP2_HPP
#define DSP_DSP2_HPP

#include <array>
#include <optional>

#include "dsp/graph.hpp"
#include "dsp/layered_dag.hpp"

namespace dsp {

enum class Dsp2Tag { kAvoiding, kNonCrossing, kFractional, kInteger };

const char* dsp2_tag_name(Dsp2Tag tag);

// One guessed case of the two-pair solver; witness fields match the tag.
struct Dsp2Case {
  Dsp2Tag tag = Dsp2Tag::kAvoiding;
  // kNonCrossing: the split vertex and which pair's path carries it.
  int delta = -1;
  int host = 0;
  // kFractional: bottom-left lattice corner of the unit square around the
  // crossing point; flip picks which pair follows the ascending diagonal.
  std::array<int, 2> corner{};
  bool flip = false;
  // kInteger: the guessed integer crossing point, plus the pair that keeps
  // the shared-diagonal edges of A_1∩B_2 resp. A_2∩B_1.
  std::array<int, 2> point{};
  int owner_12 = 0;
  int owner_21 = 1;
};

struct Dsp2Trace {
  Dsp2Case found;          // winning case, valid only on yes
  bool swapped = false;    // solved with (s_2, t_2) swapped
  long long guesses = 0;   // candidate guesses examined across both variants
};

// Area-restricted orientation of the input edges for a fractional or
// integer case guess: per-pair arc lists plus their union as one DAG
// (used for the topological order). nullopt when the union has a cycle,
// which prunes the guess.
struct OrientedDag {
  Dag dag;
  std::array<std::vector<std::vector<int>>, 2> out;
};

std::optional<OrientedDag> oriented_crossing_dag(const Instance& inst,
                                                 const PositionTable& positions,
                                                 const Dsp2Case& guess);

// Exact two-pair solver: avoiding fast path, then the noncrossing split,
// fractional-crossing and integer-crossing guesses, each repeated with the
// second pair swapped. Every returned solution passes verify_solution.
std::optional<Solution> solve_dsp2(const Instance& inst,
                                   Dsp2Trace* trace = nullptr);

}  // namespace dsp

#endif

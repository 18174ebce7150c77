#ifndef DSP_KDSP_HPP
#define DSP_KDSP_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dsp/graph.hpp"
#include "dsp/layered_dag.hpp"

namespace dsp {

// A permutation of a nonempty subset of the color indices [0,k).
using PermKey = std::vector<int>;

// All permutation keys in length-then-lexicographic order.
std::vector<PermKey> all_perm_keys(int k);

// A guessed crossing structure: per path the marble vertices (always
// containing the terminals), and per permutation the guessed segment
// endpoints on the path of its last index. A key absent from `ends`
// represents an undefined entry.
struct CrossingGuess {
  std::vector<std::vector<int>> marbles;        // per path, ascending ids
  std::map<PermKey, std::pair<int, int>> ends;  // endpoint pair on last path

  bool operator==(const CrossingGuess& other) const {
    return marbles == other.marbles && ends == other.ends;
  }
};

std::string crossing_guess_text(const CrossingGuess& g);

// A minimal non-trivial segment between consecutive marbles of one path.
struct Segment {
  int host = 0;        // path index owning the marble path
  int start = 0;       // marble with the smaller host-coordinate
  int end = 0;
  std::vector<int> marks;  // sorted; always contains host
};

struct KdspConfig {
  long long guess_budget = 1'000'000;
  bool require_complete = false;
  int threads = 1;
};

enum class KdspStatus { kYes, kNo, kUnknown };

struct KdspResult {
  KdspStatus status = KdspStatus::kUnknown;
  std::optional<Solution> solution;
  CrossingGuess winning;   // valid on yes
  bool complete = false;   // guess enumeration was exhausted
  long long guesses = 0;   // guesses emitted (deduplicated)
};

// Lazy deterministic enumeration; visit returns false to stop early.
// Returns true iff the stream was exhausted within the budget.
bool enumerate_crossing_guesses_cb(
    const Instance& inst, const PositionTable& positions,
    const DistanceOracle& d, long long budget,
    const std::function<bool(const CrossingGuess&)>& visit);

std::vector<CrossingGuess> enumerate_crossing_guesses(const Instance& inst,
                                                      long long budget,
                                                      bool* complete = nullptr);

// The guess an actual solution induces: marble paths and per-permutation
// endpoints evaluated recursively on the given paths.
CrossingGuess induced_guess(const Instance& inst,
                            const PositionTable& positions,
                            const DistanceOracle& d,
                            const std::vector<Path>& paths);

// Splits each marble path into minimal segments, drops trivial segments
// (coordinate gap < 2) and computes each segment's mark set from the
// permutation intervals covering it.
std::vector<Segment> derive_segments_and_marks(const Instance& inst,
                                               const PositionTable& positions,
                                               const DistanceOracle& d,
                                               const CrossingGuess& guess);

// One disjoint-paths instance per color with a nonempty pair list; pairs
// ordered by the start vertex's coordinate in that color.
std::vector<std::pair<int, DagDisjointInstance>> assemble_color_instances(
    const Instance& inst, const PositionTable& positions,
    const std::vector<Segment>& segments);

// Exact solver: iterates crossing guesses, solves the per-color layered-DAG
// instances, stitches segment paths together and verifies. Returns no only
// after a complete enumeration; unknown when the budget cut the stream.
KdspResult solve_kdsp(const Instance& inst, const KdspConfig& config = {});

}  // namespace dsp

#endif

#pragma once

#include <cstddef>
#include <vector>

#include "qbc/bigraph.hpp"
#include "qbc/error.hpp"
#include "qbc/rational.hpp"

namespace qbc {

struct GreedyOptions {
  // Rank candidates by degree into the current opposite set instead of the
  // degree in the whole graph.
  bool restricted_degree = false;
  // Also run on the transposed graph and keep the better result.
  bool both_sides = false;
};

struct GreedyStep {
  enum class Phase { Build, Repair, Augment };
  Phase phase = Phase::Build;
  Side side = Side::U;
  std::size_t vertex = 0;
  bool added = true;                 // false: vertex removed (repair)
  std::vector<std::size_t> pruned;   // V-vertices dropped after a build step
};

struct GreedyTrace {
  Rational delta{0};
  std::size_t tau = 1;
  GreedyOptions options;
  bool transposed = false;  // steps refer to the transposed graph
  std::vector<GreedyStep> steps;
  Selection final_selection;
};

// Thrown when the build phase empties V' (or repair empties a side).
// state() is the last selection with both sides nonempty, if any.
class HeuristicFailure : public Error {
 public:
  HeuristicFailure(const std::string& what, Selection last) : Error(what), last_(std::move(last)) {}
  const Selection& state() const { return last_; }

 private:
  Selection last_;
};

// Build phase: start from U' = {} and V' = V, repeatedly add the U-vertex of
// largest degree (ties: larger degree into V', then lower index) and drop
// every v with d(v, U') < (1 - delta)|U'|, until |U'| = tau.
Selection greedy_build(const BipartiteGraph& g, const Rational& delta, std::size_t tau,
                       const GreedyOptions& options = {}, GreedyTrace* trace = nullptr);

// Augmentation phase: add the largest-degree U-vertex whose addition keeps
// the selection a delta-quasi-biclique, until none fits; then the same for
// V; repeat until neither side grows. Input must already be valid.
Selection greedy_augment(const BipartiteGraph& g, const Selection& selection, const Rational& delta,
                         const GreedyOptions& options = {}, GreedyTrace* trace = nullptr);

struct GreedySolution {
  Selection selection;
  std::size_t size = 0;
  Rational density{0};
  bool delta_valid = false;
  bool gamma_valid = false;  // at gamma = 1 - delta
  GreedyTrace trace;
};

// Build, repair (drop the worst-covered vertex until the per-vertex condition
// holds on both sides), then augment.
GreedySolution greedy_quasi_biclique(const BipartiteGraph& g, const Rational& delta, std::size_t tau,
                                     const GreedyOptions& options = {});

// Best result over tau = 1..|U| (failures skipped). Throws HeuristicFailure
// when every tau fails.
GreedySolution greedy_tau_sweep(const BipartiteGraph& g, const Rational& delta, const GreedyOptions& options = {});

// Smallest U-side degree, at least 1.
std::size_t default_tau(const BipartiteGraph& g);

// Re-applies the recorded steps; equals trace.final_selection for any trace
// produced by this module.
Selection replay(const BipartiteGraph& g, const GreedyTrace& trace);

}  // namespace qbc

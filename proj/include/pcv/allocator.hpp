#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pcv/manifest.hpp"
#include "pcv/plan.hpp"
#include "pcv/traces.hpp"
#include "pcv/types.hpp"
#include "pcv/visibility.hpp"

namespace pcv {

// One selectable (form, level) for a slot, with its score contribution and
// per-GOF time price already folded in.
struct ChoiceOption {
  Form form = Form::Compressed;
  int level = 1;
  double bits_mbits = 0;      // wire size under this form
  double compute_units = 0;   // decode units (0 for raw)
  double gain = 0;            // distance_weight * level * quality_weight
  double time_cost_s = 0;     // bits / bandwidth + decode seconds
};

// One visible (gof, tile) pair that must receive exactly one option.
struct TileSlot {
  int gof_index = 0;   // 1-based
  int tile_index = 0;  // 1-based
  std::vector<ChoiceOption> options;  // 2R entries: level-major, Compressed then Raw
};

// The allocation instance: slots in (gof, tile) order plus the cumulative
// time budgets  sum_{i<=g} Tu_i <= initial_buffer + g*Ti - kBufferEpsilonS.
struct ProblemInstance {
  std::vector<TileSlot> slots;
  VecX prefix_budget_s;        // one entry per GOF
  double ideal_score = 0;      // pre-log denominator of the session score
  double gof_duration_s = 0;
  int gof_count = 0;
  int quality_levels = 0;
  double initial_buffer_s = 0;

  int option_count() const { return 2 * quality_levels; }
};

// Assembles the instance from model + traces + precomputed visibility and
// weights.  Throws NoVisibleTiles when no visible tile carries quality
// weight (ideal score would be zero).
ProblemInstance build_problem(const VideoManifest& manifest, const ScenarioTraces& traces,
                              const DeviceProfile& device, const BinaryMatrix& visibility,
                              const WeightSet& weights, double initial_buffer_s);

// JSON debug dump of the instance (option gains/costs and budgets).
std::string problem_to_json(const ProblemInstance& problem);

// Per-slot allowed-option bitmask (bit o set = option o selectable).
using OptionMask = std::vector<std::uint64_t>;

OptionMask full_mask(const ProblemInstance& problem);
OptionMask compressed_only_mask(const ProblemInstance& problem);

// LP relaxation: maximize total gain over per-slot weights in [0,1] summing
// to 1, subject to the cumulative budgets.  weights is slot-major with
// option_count() entries per slot; masked-out options carry weight 0.
struct RelaxationResult {
  bool feasible = false;
  double bound = 0;  // optimal relaxed gain sum (valid upper bound)
  VecX weights;
  // Per (slot, option) pin penalty: any assignment under the mask that picks
  // that option scores at most bound - penalty.  Zero where the relaxation
  // proves nothing (reference options, basic variables).
  VecX penalties;
};

RelaxationResult solve_relaxation(const ProblemInstance& problem, const OptionMask& allowed);

enum class SolveStatus { Optimal, Infeasible };

struct Solution {
  SolveStatus status = SolveStatus::Infeasible;
  Plan plan;
  double objective = 0;            // session score ln(achieved / ideal)
  double objective_numerator = 0;  // pre-log achieved sum
  double bound = 0;                // ln(root relaxation bound / ideal)
  double bound_numerator = 0;      // root relaxation bound, pre-log
  std::int64_t node_count = 0;
};

// Exact maximizer via best-bound branch and bound over the relaxation.
// Deterministic: most-fractional slot, binary split on its heaviest option,
// ties by lowest index / insertion order.  Equal-score plans resolve to the
// one preferring higher levels, then lower total time, then Compressed,
// then the lowest differing slot.
Solution branch_and_bound(const ProblemInstance& problem);

// Same search restricted to compressed options (the single-resource baseline).
Solution solve_compressed_only(const ProblemInstance& problem);

// Reference maximizer: literal enumeration of every assignment under the
// same ordering.  Throws TooLarge beyond max_assignments.
Solution brute_force(const ProblemInstance& problem,
                     std::int64_t max_assignments = std::int64_t{1} << 24);
Solution brute_force(const ProblemInstance& problem, const OptionMask& allowed,
                     std::int64_t max_assignments = std::int64_t{1} << 24);

// The plan ordering shared by the exact solvers; true when a beats b.
// Exposed for tests.
struct RankedAssignment {
  std::vector<int> option_index;  // per slot
  double score_sum = 0;
  std::int64_t level_sum = 0;
  double time_sum = 0;
};

bool assignment_better(const ProblemInstance& problem, const RankedAssignment& a,
                       const RankedAssignment& b);

// Plan <-> per-slot option index helpers.
Plan assignment_to_plan(const ProblemInstance& problem, const std::vector<int>& option_index);

}  // namespace pcv

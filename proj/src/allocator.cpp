#include "pcv/allocator.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "pcv/errors.hpp"
#include "pcv/lp.hpp"

namespace pcv {
namespace {

using ordered_json = nlohmann::ordered_json;

// Bound slack below the incumbent that a subtree must clear before it is
// discarded; keeps every exact-score tie reachable despite simplex roundoff.
constexpr double kPruneMargin = 1e-9;
constexpr double kIntegralTolerance = 1e-6;

std::uint64_t option_bit(int option) { return std::uint64_t{1} << option; }

// Score/level/time totals plus the per-GOF budget verdict for one full
// assignment.  Every exact path (brute force, incumbent updates, the
// relaxation's min-time precheck) funnels through this one fold so verdicts
// and tie-break keys agree bitwise.
struct Evaluation {
  RankedAssignment ranked;
  bool feasible = true;
};

Evaluation evaluate_assignment(const ProblemInstance& problem, std::vector<int> option_index) {
  Evaluation ev;
  ev.ranked.option_index = std::move(option_index);
  double prefix = 0;
  std::size_t s = 0;
  for (int g = 1; g <= problem.gof_count; ++g) {
    while (s < problem.slots.size() && problem.slots[s].gof_index == g) {
      const TileSlot& slot = problem.slots[s];
      const ChoiceOption& opt = slot.options[static_cast<std::size_t>(ev.ranked.option_index[s])];
      ev.ranked.score_sum += opt.gain;
      ev.ranked.level_sum += opt.level;
      prefix += opt.time_cost_s;
      ++s;
    }
    if (prefix > problem.prefix_budget_s[g - 1]) ev.feasible = false;
  }
  ev.ranked.time_sum = prefix;
  return ev;
}

// True when swapping b out for a can never rank a plan lower: a never costs
// more time, and it wins (or ties with the preferred form) on the
// score/level/time keys.
bool option_dominates(const ChoiceOption& a, const ChoiceOption& b) {
  if (a.time_cost_s > b.time_cost_s) return false;
  if (a.gain != b.gain) return a.gain > b.gain;
  if (a.level != b.level) return a.level > b.level;
  if (a.time_cost_s < b.time_cost_s) return true;
  return a.form == Form::Compressed && b.form == Form::Raw;
}

// Drops options that some other allowed option dominates.  The ranking
// optimum never uses a dominated option, so the search space shrinks (at
// most one form survives per level) without moving the optimum.
OptionMask filter_dominated(const ProblemInstance& problem, const OptionMask& allowed) {
  OptionMask kept(problem.slots.size(), 0);
  for (std::size_t s = 0; s < problem.slots.size(); ++s) {
    const std::vector<ChoiceOption>& options = problem.slots[s].options;
    for (int o = 0; o < problem.option_count(); ++o) {
      if (!(allowed[s] & option_bit(o))) continue;
      bool dominated = false;
      for (int other = 0; other < problem.option_count() && !dominated; ++other) {
        if (other == o || !(allowed[s] & option_bit(other))) continue;
        dominated = option_dominates(options[static_cast<std::size_t>(other)],
                                     options[static_cast<std::size_t>(o)]);
      }
      if (!dominated) kept[s] |= option_bit(o);
    }
  }
  return kept;
}

// Cheapest allowed option per slot (lowest index on ties), or empty when
// some slot has no allowed option.
std::vector<int> min_time_assignment(const ProblemInstance& problem, const OptionMask& allowed) {
  std::vector<int> ref(problem.slots.size(), -1);
  for (std::size_t s = 0; s < problem.slots.size(); ++s) {
    for (int o = 0; o < problem.option_count(); ++o) {
      if (!(allowed[s] & option_bit(o))) continue;
      if (ref[s] < 0 || problem.slots[s].options[static_cast<std::size_t>(o)].time_cost_s <
                            problem.slots[s].options[static_cast<std::size_t>(ref[s])].time_cost_s)
        ref[s] = o;
    }
    if (ref[s] < 0) return {};
  }
  return ref;
}

// Visit cap for tie enumeration; beyond it the instance is rejected rather
// than silently truncated.
constexpr std::uint64_t kTieNodeBudget = 1ull << 22;

// Exhausts a subtree whose relaxation came back integral: the relaxation
// value is a score ceiling for every assignment under `allowed`, so the
// ranking winner must sit among the assignments whose exact score fold can
// still reach that ceiling.  Enumerates exactly those (depth-first, pruned
// by suffix gain sums and the per-GOF budgets) and folds each survivor into
// the incumbent.  Returns false when not a single assignment passed the
// exact feasibility fold, in which case the caller falls back to splitting.
bool enumerate_ties(const ProblemInstance& problem, const OptionMask& allowed, double target,
                    std::optional<RankedAssignment>& incumbent) {
  const std::size_t slot_count = problem.slots.size();
  const int count = problem.option_count();
  std::vector<std::vector<int>> choices(slot_count);
  for (std::size_t s = 0; s < slot_count; ++s)
    for (int o = 0; o < count; ++o)
      if (allowed[s] & option_bit(o)) choices[s].push_back(o);

  std::vector<double> suffix_best(slot_count + 1, 0.0);
  for (std::size_t s = slot_count; s-- > 0;) {
    double best = -std::numeric_limits<double>::infinity();
    for (int o : choices[s])
      best = std::max(best, problem.slots[s].options[static_cast<std::size_t>(o)].gain);
    suffix_best[s] = best + suffix_best[s + 1];
  }

  double floor_score = target;
  if (incumbent) floor_score = std::max(floor_score, incumbent->score_sum);
  floor_score -= kPruneMargin * (1 + std::abs(target));

  std::vector<int> pick(slot_count, 0);
  bool found = false;
  std::uint64_t visited = 0;
  auto dfs = [&](auto&& self, std::size_t s, double score, double prefix) -> void {
    if (++visited > kTieNodeBudget)
      throw TooLarge("equal-score tie enumeration exceeded its node budget");
    if (s == slot_count) {
      Evaluation candidate = evaluate_assignment(problem, pick);
      if (!candidate.feasible) return;
      found = true;
      if (!incumbent || assignment_better(problem, candidate.ranked, *incumbent))
        incumbent = std::move(candidate.ranked);
      return;
    }
    const TileSlot& slot = problem.slots[s];
    const bool gof_end =
        s + 1 == slot_count || problem.slots[s + 1].gof_index != slot.gof_index;
    for (int o : choices[s]) {
      const ChoiceOption& option = slot.options[static_cast<std::size_t>(o)];
      const double next_score = score + option.gain;
      if (next_score + suffix_best[s + 1] < floor_score) continue;
      const double next_prefix = prefix + option.time_cost_s;
      if (gof_end && next_prefix > problem.prefix_budget_s[slot.gof_index - 1]) continue;
      pick[s] = o;
      self(self, s + 1, next_score, next_prefix);
    }
  };
  dfs(dfs, 0, 0.0, 0.0);
  return found;
}

// Rounds a fractional relaxation into a full assignment: heaviest-weight
// option per slot, then demotions to the cheapest option (least gain lost
// per second saved, within the first over-budget prefix) until the exact
// fold accepts it.  Feeding the incumbent early lets bound pruning close
// most of the tree without touching which assignment finally wins.
void round_into_incumbent(const ProblemInstance& problem, const OptionMask& allowed,
                          const VecX& weights, std::optional<RankedAssignment>& incumbent) {
  const int count = problem.option_count();
  const std::vector<int> cheap = min_time_assignment(problem, allowed);
  if (cheap.empty()) return;

  std::vector<int> pick(problem.slots.size());
  for (std::size_t s = 0; s < problem.slots.size(); ++s) {
    int best = -1;
    for (int o = 0; o < count; ++o) {
      if (!(allowed[s] & option_bit(o))) continue;
      if (best < 0 || weights[static_cast<Eigen::Index>(s) * count + o] >
                          weights[static_cast<Eigen::Index>(s) * count + best])
        best = o;
    }
    pick[s] = best;
  }

  Evaluation ev = evaluate_assignment(problem, pick);
  while (!ev.feasible) {
    // Locate the first violated GOF boundary; only demotions inside that
    // prefix can repair it.
    double prefix = 0;
    std::size_t end = problem.slots.size();
    std::size_t s = 0;
    for (int g = 1; g <= problem.gof_count; ++g) {
      while (s < problem.slots.size() && problem.slots[s].gof_index == g) {
        prefix += problem.slots[s].options[static_cast<std::size_t>(pick[s])].time_cost_s;
        ++s;
      }
      if (prefix > problem.prefix_budget_s[g - 1]) {
        end = s;
        break;
      }
    }
    std::size_t demote = problem.slots.size();
    double best_rate = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < end; ++i) {
      if (pick[i] == cheap[i]) continue;
      const ChoiceOption& held = problem.slots[i].options[static_cast<std::size_t>(pick[i])];
      const ChoiceOption& low = problem.slots[i].options[static_cast<std::size_t>(cheap[i])];
      const double saved = held.time_cost_s - low.time_cost_s;
      if (!(saved > 0)) continue;
      const double rate = (held.gain - low.gain) / saved;
      if (rate < best_rate) {
        best_rate = rate;
        demote = i;
      }
    }
    if (demote == problem.slots.size()) return;  // prefix already all-cheap yet over budget
    pick[demote] = cheap[demote];
    ev = evaluate_assignment(problem, pick);
  }
  if (!incumbent || assignment_better(problem, ev.ranked, *incumbent))
    incumbent = std::move(ev.ranked);
}

struct SearchNode {
  OptionMask mask;
  double estimate = 0;  // parent's relaxation bound
  std::int64_t seq = 0;
};

struct WorseEstimate {
  bool operator()(const SearchNode& a, const SearchNode& b) const {
    if (a.estimate != b.estimate) return a.estimate < b.estimate;
    return a.seq > b.seq;
  }
};

// Best-bound branch and bound over the masked relaxation.
Solution search(const ProblemInstance& problem, const OptionMask& initial_mask) {
  Solution sol;
  const OptionMask root_mask = filter_dominated(problem, initial_mask);

  std::optional<RankedAssignment> incumbent;
  std::priority_queue<SearchNode, std::vector<SearchNode>, WorseEstimate> queue;
  std::int64_t seq = 0;
  queue.push({root_mask, std::numeric_limits<double>::infinity(), seq++});
  bool root_solved = false;

  while (!queue.empty()) {
    SearchNode node = queue.top();
    queue.pop();
    if (incumbent && node.estimate < incumbent->score_sum - kPruneMargin) continue;

    const RelaxationResult relax = solve_relaxation(problem, node.mask);
    ++sol.node_count;
    if (!root_solved) {
      root_solved = true;
      if (relax.feasible) {
        sol.bound_numerator = relax.bound;
        sol.bound = std::log(relax.bound / problem.ideal_score);
      }
    }
    if (!relax.feasible) continue;
    if (incumbent && relax.bound < incumbent->score_sum - kPruneMargin) continue;

    const int count = problem.option_count();
    bool integral = true;
    int branch_slot = -1;
    double branch_weight = 2;
    for (std::size_t s = 0; s < problem.slots.size(); ++s) {
      if (std::popcount(node.mask[s]) < 2) continue;
      double heaviest = 0;
      for (int o = 0; o < count; ++o)
        if (node.mask[s] & option_bit(o))
          heaviest = std::max(heaviest, relax.weights[static_cast<Eigen::Index>(s) * count + o]);
      if (heaviest < 1 - kIntegralTolerance) integral = false;
      if (heaviest < branch_weight) {
        branch_weight = heaviest;
        branch_slot = static_cast<int>(s);
      }
    }

    // An integral relaxation caps the subtree at its own value, so the
    // subtree collapses to a tie enumeration.  Only when the exact fold
    // rejects every candidate at the ceiling (a knife-edge the relaxation
    // arithmetic cannot see) does the subtree get searched by splitting.
    if (integral && enumerate_ties(problem, node.mask, relax.bound, incumbent)) continue;
    if (branch_slot < 0) continue;  // every slot pinned; subtree exhausted

    round_into_incumbent(problem, node.mask, relax.weights, incumbent);
    if (incumbent && relax.bound < incumbent->score_sum - kPruneMargin) continue;

    // Reduced-cost fixing: an option whose pin penalty pushes the subtree
    // below the incumbent (minus the tie slack) can never appear in a
    // winning assignment under this mask, so strike it before branching.
    // The shrunk node re-solves once on the smaller relaxation.
    if (incumbent) {
      bool shrunk = false;
      for (std::size_t s = 0; s < problem.slots.size(); ++s) {
        if (std::popcount(node.mask[s]) < 2) continue;
        for (int o = 0; o < count; ++o) {
          if (!(node.mask[s] & option_bit(o))) continue;
          const double penalty = relax.penalties[static_cast<Eigen::Index>(s) * count + o];
          if (penalty > 0 && relax.bound - penalty < incumbent->score_sum - kPruneMargin) {
            node.mask[s] &= ~option_bit(o);
            shrunk = true;
          }
        }
      }
      if (shrunk) {
        queue.push({std::move(node.mask), relax.bound, seq++});
        continue;
      }
    }

    // Split off the heaviest option of the most fractional slot.
    int heavy = -1;
    for (int o = 0; o < count; ++o) {
      if (!(node.mask[static_cast<std::size_t>(branch_slot)] & option_bit(o))) continue;
      if (heavy < 0 ||
          relax.weights[static_cast<Eigen::Index>(branch_slot) * count + o] >
              relax.weights[static_cast<Eigen::Index>(branch_slot) * count + heavy])
        heavy = o;
    }
    SearchNode take{node.mask, relax.bound, seq++};
    take.mask[static_cast<std::size_t>(branch_slot)] = option_bit(heavy);
    SearchNode leave{std::move(node.mask), relax.bound, seq++};
    leave.mask[static_cast<std::size_t>(branch_slot)] &= ~option_bit(heavy);
    queue.push(std::move(take));
    queue.push(std::move(leave));
  }

  if (!incumbent) {
    sol.status = SolveStatus::Infeasible;
    return sol;
  }
  sol.status = SolveStatus::Optimal;
  sol.plan = assignment_to_plan(problem, incumbent->option_index);
  sol.objective_numerator = incumbent->score_sum;
  sol.objective = std::log(incumbent->score_sum / problem.ideal_score);
  return sol;
}

}  // namespace

ProblemInstance build_problem(const VideoManifest& manifest, const ScenarioTraces& traces,
                              const DeviceProfile& device, const BinaryMatrix& visibility,
                              const WeightSet& weights, double initial_buffer_s) {
  validate(manifest);
  validate(device);
  validate(traces, manifest.gof_count());
  const int gofs = manifest.gof_count();
  const int tiles = manifest.tile_count();
  if (visibility.rows() != gofs || visibility.cols() != tiles)
    throw ValidationError("visibility matrix is " + std::to_string(visibility.rows()) + "x" +
                          std::to_string(visibility.cols()) + ", expected " +
                          std::to_string(gofs) + "x" + std::to_string(tiles));
  if (weights.distance.rows() != gofs || weights.distance.cols() != tiles ||
      weights.quality.rows() != gofs || weights.quality.cols() != tiles)
    throw ValidationError("weight matrices do not match the manifest's gof/tile grid");
  if (!(initial_buffer_s > 0)) throw ValidationError("initial playback buffer must be positive");

  ProblemInstance problem;
  problem.gof_count = gofs;
  problem.quality_levels = manifest.quality_levels;
  problem.gof_duration_s = manifest.gof_duration_s();
  problem.initial_buffer_s = initial_buffer_s;
  if (problem.option_count() > 63)
    throw TooLarge("quality ladder too deep for 64-bit option masks");

  const double capacity = device.total_capacity();
  const int top = manifest.quality_levels;
  double ideal = 0;
  for (int g = 0; g < gofs; ++g) {
    const double bandwidth = traces.bandwidth_mbps[g];
    for (int k = 0; k < tiles; ++k) {
      if (!visibility(g, k)) continue;
      const double d = weights.distance(g, k);
      const double q = weights.quality(g, k);
      const TileEntry& tile = manifest.gofs[static_cast<std::size_t>(g)].tiles[static_cast<std::size_t>(k)];

      TileSlot slot;
      slot.gof_index = g + 1;
      slot.tile_index = k + 1;
      slot.options.reserve(static_cast<std::size_t>(problem.option_count()));
      for (int r = 1; r <= top; ++r) {
        const QualityVariant& variant = tile.variant(r);
        const double gain = d * r * q;

        ChoiceOption compressed;
        compressed.form = Form::Compressed;
        compressed.level = r;
        compressed.bits_mbits = variant.compressed_size_mbits;
        compressed.compute_units = variant.decode_compute_units;
        compressed.gain = gain;
        compressed.time_cost_s = compressed.bits_mbits / bandwidth +
                                 problem.gof_duration_s * compressed.compute_units / capacity;
        slot.options.push_back(compressed);

        ChoiceOption raw;
        raw.form = Form::Raw;
        raw.level = r;
        raw.bits_mbits = variant.raw_size_mbits;
        raw.compute_units = 0;
        raw.gain = gain;
        raw.time_cost_s = raw.bits_mbits / bandwidth;
        slot.options.push_back(raw);
      }
      problem.slots.push_back(std::move(slot));
      ideal += d * top * q;
    }
  }
  if (!(ideal > 0)) throw NoVisibleTiles("no visible tile carries quality weight");
  problem.ideal_score = ideal;

  problem.prefix_budget_s = VecX(gofs);
  for (int g = 1; g <= gofs; ++g)
    problem.prefix_budget_s[g - 1] =
        initial_buffer_s - kBufferEpsilonS + g * problem.gof_duration_s;
  return problem;
}

std::string problem_to_json(const ProblemInstance& problem) {
  ordered_json root;
  root["gof_count"] = problem.gof_count;
  root["quality_levels"] = problem.quality_levels;
  root["gof_duration_s"] = problem.gof_duration_s;
  root["initial_buffer_s"] = problem.initial_buffer_s;
  root["ideal_score"] = problem.ideal_score;
  ordered_json budgets = ordered_json::array();
  for (int g = 0; g < problem.gof_count; ++g) budgets.push_back(problem.prefix_budget_s[g]);
  root["prefix_budget_s"] = std::move(budgets);

  ordered_json slots = ordered_json::array();
  for (const TileSlot& slot : problem.slots) {
    ordered_json entry;
    entry["gof"] = slot.gof_index;
    entry["tile"] = slot.tile_index;
    ordered_json options = ordered_json::array();
    for (const ChoiceOption& option : slot.options) {
      ordered_json o;
      o["form"] = option.form == Form::Compressed ? "compressed" : "raw";
      o["level"] = option.level;
      o["bits_mbits"] = option.bits_mbits;
      o["compute_units"] = option.compute_units;
      o["gain"] = option.gain;
      o["time_cost_s"] = option.time_cost_s;
      options.push_back(std::move(o));
    }
    entry["options"] = std::move(options);
    slots.push_back(std::move(entry));
  }
  root["slots"] = std::move(slots);
  return root.dump(2) + "\n";
}

OptionMask full_mask(const ProblemInstance& problem) {
  const std::uint64_t all = (std::uint64_t{1} << problem.option_count()) - 1;
  return OptionMask(problem.slots.size(), all);
}

OptionMask compressed_only_mask(const ProblemInstance& problem) {
  std::uint64_t bits = 0;
  for (int r = 1; r <= problem.quality_levels; ++r) bits |= option_bit(2 * (r - 1));
  return OptionMask(problem.slots.size(), bits);
}

RelaxationResult solve_relaxation(const ProblemInstance& problem, const OptionMask& allowed) {
  if (allowed.size() != problem.slots.size())
    throw ValidationError("option mask does not match the instance's slot count");
  const int count = problem.option_count();
  const int gofs = problem.gof_count;

  RelaxationResult result;
  result.weights = VecX::Zero(static_cast<Eigen::Index>(problem.slots.size()) * count);
  result.penalties = VecX::Zero(static_cast<Eigen::Index>(problem.slots.size()) * count);

  const std::vector<int> ref = min_time_assignment(problem, allowed);
  if (ref.empty() && !problem.slots.empty()) return result;  // a slot lost every option
  const Evaluation base = evaluate_assignment(problem, ref);
  if (!base.feasible) return result;  // even the cheapest assignment busts a budget

  // Substitute away each slot's reference weight (1 - the rest).  All
  // residual time coefficients are then >= 0 and every right-hand side is
  // >= 0, so the slack basis is feasible and phase 1 never runs.
  std::vector<std::pair<int, int>> vars;  // (slot, option)
  for (std::size_t s = 0; s < problem.slots.size(); ++s)
    for (int o = 0; o < count; ++o)
      if ((allowed[s] & option_bit(o)) && o != ref[s]) vars.emplace_back(static_cast<int>(s), o);

  result.feasible = true;
  for (std::size_t s = 0; s < problem.slots.size(); ++s)
    result.weights[static_cast<Eigen::Index>(s) * count + ref[s]] = 1;
  if (vars.empty()) {
    result.bound = base.ranked.score_sum;
    return result;
  }

  // Per-GOF cumulative time of the reference assignment.
  VecX ref_prefix = VecX::Zero(gofs);
  {
    double prefix = 0;
    std::size_t s = 0;
    for (int g = 1; g <= gofs; ++g) {
      while (s < problem.slots.size() && problem.slots[s].gof_index == g) {
        prefix += problem.slots[s].options[static_cast<std::size_t>(ref[s])].time_cost_s;
        ++s;
      }
      ref_prefix[g - 1] = prefix;
    }
  }

  const int n = static_cast<int>(vars.size());
  // Only slots that still contribute variables need a capacity row; pinned
  // slots would add empty rows and slacks the simplex pays for.
  std::vector<int> slot_row(problem.slots.size(), -1);
  int slot_rows = 0;
  for (const auto& [s, o] : vars)
    if (slot_row[static_cast<std::size_t>(s)] < 0) slot_row[static_cast<std::size_t>(s)] = slot_rows++;
  lp::Problem relaxed;
  relaxed.objective = VecX(n);
  relaxed.a_ub = MatX::Zero(gofs + slot_rows, n);
  relaxed.b_ub = VecX(gofs + slot_rows);
  for (int v = 0; v < n; ++v) {
    const auto [s, o] = vars[static_cast<std::size_t>(v)];
    const ChoiceOption& option = problem.slots[static_cast<std::size_t>(s)].options[static_cast<std::size_t>(o)];
    const ChoiceOption& anchor = problem.slots[static_cast<std::size_t>(s)].options[static_cast<std::size_t>(ref[static_cast<std::size_t>(s)])];
    relaxed.objective[v] = option.gain - anchor.gain;
    const double extra_time = option.time_cost_s - anchor.time_cost_s;
    for (int g = problem.slots[static_cast<std::size_t>(s)].gof_index; g <= gofs; ++g)
      relaxed.a_ub(g - 1, v) = extra_time;
    relaxed.a_ub(gofs + slot_row[static_cast<std::size_t>(s)], v) = 1;
  }
  for (int g = 0; g < gofs; ++g)
    relaxed.b_ub[g] = std::max(0.0, problem.prefix_budget_s[g] - ref_prefix[g]);
  for (int s = 0; s < slot_rows; ++s) relaxed.b_ub[gofs + s] = 1;

  const lp::Result solved = lp::maximize(relaxed);
  if (solved.status != lp::Status::Optimal)
    throw std::runtime_error("relaxation simplex failed to converge");

  for (int v = 0; v < n; ++v) {
    const auto [s, o] = vars[static_cast<std::size_t>(v)];
    const double w = std::min(1.0, solved.x[v]);
    result.weights[static_cast<Eigen::Index>(s) * count + o] = w;
    result.weights[static_cast<Eigen::Index>(s) * count + ref[static_cast<std::size_t>(s)]] -= w;
    result.penalties[static_cast<Eigen::Index>(s) * count + o] = std::max(0.0, -solved.reduced[v]);
  }
  for (std::size_t s = 0; s < problem.slots.size(); ++s) {
    double& anchor = result.weights[static_cast<Eigen::Index>(s) * count + ref[s]];
    anchor = std::max(0.0, anchor);
  }
  result.bound = base.ranked.score_sum + solved.value;
  return result;
}

bool assignment_better(const ProblemInstance& problem, const RankedAssignment& a,
                       const RankedAssignment& b) {
  if (a.score_sum != b.score_sum) return a.score_sum > b.score_sum;
  if (a.level_sum != b.level_sum) return a.level_sum > b.level_sum;
  if (a.time_sum != b.time_sum) return a.time_sum < b.time_sum;
  for (std::size_t s = 0; s < problem.slots.size(); ++s) {
    const int oa = a.option_index[s];
    const int ob = b.option_index[s];
    if (oa == ob) continue;
    const std::vector<ChoiceOption>& options = problem.slots[s].options;
    const ChoiceOption& ca = options[static_cast<std::size_t>(oa)];
    const ChoiceOption& cb = options[static_cast<std::size_t>(ob)];
    if (ca.level != cb.level) return ca.level > cb.level;
    return ca.form == Form::Compressed;
  }
  return false;
}

Plan assignment_to_plan(const ProblemInstance& problem, const std::vector<int>& option_index) {
  if (option_index.size() != problem.slots.size())
    throw ValidationError("assignment covers " + std::to_string(option_index.size()) +
                          " slots, instance has " + std::to_string(problem.slots.size()));
  Plan plan;
  for (std::size_t s = 0; s < problem.slots.size(); ++s) {
    const TileSlot& slot = problem.slots[s];
    const int o = option_index[s];
    if (o < 0 || o >= problem.option_count())
      throw ValidationError("option index " + std::to_string(o) + " out of range");
    const ChoiceOption& option = slot.options[static_cast<std::size_t>(o)];
    plan.set(slot.gof_index, slot.tile_index, {option.form, option.level});
  }
  return plan;
}

Solution branch_and_bound(const ProblemInstance& problem) {
  return search(problem, full_mask(problem));
}

Solution solve_compressed_only(const ProblemInstance& problem) {
  return search(problem, compressed_only_mask(problem));
}

Solution brute_force(const ProblemInstance& problem, std::int64_t max_assignments) {
  return brute_force(problem, full_mask(problem), max_assignments);
}

Solution brute_force(const ProblemInstance& problem, const OptionMask& allowed,
                     std::int64_t max_assignments) {
  if (allowed.size() != problem.slots.size())
    throw ValidationError("option mask does not match the instance's slot count");
  Solution sol;

  std::vector<std::vector<int>> choices(problem.slots.size());
  std::int64_t total = 1;
  for (std::size_t s = 0; s < problem.slots.size(); ++s) {
    for (int o = 0; o < problem.option_count(); ++o)
      if (allowed[s] & option_bit(o)) choices[s].push_back(o);
    if (choices[s].empty()) {
      sol.status = SolveStatus::Infeasible;
      return sol;
    }
    const auto width = static_cast<std::int64_t>(choices[s].size());
    if (total > max_assignments / width)
      throw TooLarge("assignment space exceeds " + std::to_string(max_assignments) +
                     " combinations");
    total *= width;
  }

  std::optional<RankedAssignment> best;
  std::vector<std::size_t> digit(problem.slots.size(), 0);
  std::vector<int> option_index(problem.slots.size(), 0);
  for (std::int64_t visited = 0; visited < total; ++visited) {
    for (std::size_t s = 0; s < problem.slots.size(); ++s)
      option_index[s] = choices[s][digit[s]];
    Evaluation ev = evaluate_assignment(problem, option_index);
    ++sol.node_count;
    if (ev.feasible && (!best || assignment_better(problem, ev.ranked, *best)))
      best = std::move(ev.ranked);
    for (std::size_t s = problem.slots.size(); s-- > 0;) {
      if (++digit[s] < choices[s].size()) break;
      digit[s] = 0;
    }
  }

  if (!best) {
    sol.status = SolveStatus::Infeasible;
    return sol;
  }
  sol.status = SolveStatus::Optimal;
  sol.plan = assignment_to_plan(problem, best->option_index);
  sol.objective_numerator = best->score_sum;
  sol.objective = std::log(best->score_sum / problem.ideal_score);
  sol.bound_numerator = best->score_sum;
  sol.bound = sol.objective;
  return sol;
}

}  // namespace pcv

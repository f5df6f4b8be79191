#pragma once

#include "pcv/types.hpp"

namespace pcv::lp {

// maximize objective . x  subject to  a_eq x = b_eq,  a_ub x <= b_ub,  x >= 0.
// Either constraint block may be empty (0 rows).
struct Problem {
  MatX a_eq;
  VecX b_eq;
  MatX a_ub;
  VecX b_ub;
  VecX objective;
};

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

struct Result {
  Status status = Status::IterationLimit;
  VecX x;           // primal solution when Optimal
  double value = 0;  // objective . x when Optimal
  VecX reduced;      // reduced profits per structural column when Optimal;
                     // any feasible x obeys objective.x <= value + reduced[j] * x[j]
};

// Dense two-phase primal simplex on a full tableau.  Dantzig entering rule
// with lowest-index tie-breaks; falls back to Bland's rule after a stretch of
// degenerate pivots so cycling cannot occur.  Deterministic for identical
// input (no randomization, index-based tie-breaking throughout).
Result maximize(const Problem& problem, double tolerance = 1e-9);

}  // namespace pcv::lp

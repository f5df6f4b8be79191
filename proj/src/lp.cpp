#include "pcv/lp.hpp"

#include <cmath>
#include <vector>

namespace pcv::lp {
namespace {

// Full-tableau primal simplex state.  Columns: structural | slack | artificial | rhs.
struct Tableau {
  MatX rows;             // m x (total + 1)
  VecX reduced;          // reduced-profit row, length total + 1
  std::vector<int> basis;
  int n = 0;             // structural columns
  int slack_begin = 0;
  int art_begin = 0;
  int total = 0;

  double rhs(int i) const { return rows(i, total); }
  int row_count() const { return static_cast<int>(rows.rows()); }

  void pivot(int row, int col) {
    rows.row(row) /= rows(row, col);
    for (int i = 0; i < row_count(); ++i) {
      if (i == row) continue;
      const double factor = rows(i, col);
      if (factor != 0) rows.row(i) -= factor * rows.row(row);
    }
    const double rfactor = reduced[col];
    if (rfactor != 0) reduced -= rfactor * rows.row(row).transpose();
    basis[static_cast<std::size_t>(row)] = col;
  }
};

enum class PhaseOutcome { Converged, Unbounded, IterationLimit };

// Runs pivots until no reduced profit exceeds tol.  Dantzig entering rule,
// switching to Bland's rule while the objective is stalling so degenerate
// cycles cannot persist.  Artificial columns never re-enter.
PhaseOutcome run_phase(Tableau& t, double tol) {
  const int m = t.row_count();
  const long long iteration_cap = 2000 + 200LL * (m + t.total);
  const int stall_limit = 2 * (m + t.total) + 16;

  int stall = 0;
  bool bland = false;
  double last_value = -t.reduced[t.total];

  for (long long iter = 0; iter < iteration_cap; ++iter) {
    int entering = -1;
    if (bland) {
      for (int j = 0; j < t.art_begin; ++j) {
        if (t.reduced[j] > tol) {
          entering = j;
          break;
        }
      }
    } else {
      double best = tol;
      for (int j = 0; j < t.art_begin; ++j) {
        if (t.reduced[j] > best) {
          best = t.reduced[j];
          entering = j;
        }
      }
    }
    if (entering < 0) return PhaseOutcome::Converged;

    int leaving = -1;
    double best_ratio = 0;
    for (int i = 0; i < m; ++i) {
      const double coeff = t.rows(i, entering);
      if (coeff <= tol) continue;
      const double ratio = t.rhs(i) / coeff;
      if (leaving < 0 || ratio < best_ratio ||
          (ratio == best_ratio &&
           t.basis[static_cast<std::size_t>(i)] < t.basis[static_cast<std::size_t>(leaving)])) {
        leaving = i;
        best_ratio = ratio;
      }
    }
    if (leaving < 0) return PhaseOutcome::Unbounded;

    t.pivot(leaving, entering);

    const double value = -t.reduced[t.total];
    if (value > last_value + 1e-12 * (1 + std::abs(last_value))) {
      stall = 0;
      bland = false;
      last_value = value;
    } else if (++stall > stall_limit) {
      bland = true;
    }
  }
  return PhaseOutcome::IterationLimit;
}

}  // namespace

Result maximize(const Problem& problem, double tolerance) {
  const int n = static_cast<int>(problem.objective.size());
  const int p = static_cast<int>(problem.a_eq.rows());
  const int q = static_cast<int>(problem.a_ub.rows());
  const int m = p + q;

  Result result;
  if (m == 0) {
    // Only x >= 0 remains: optimum is 0 unless some profit is positive.
    for (int j = 0; j < n; ++j) {
      if (problem.objective[j] > tolerance) {
        result.status = Status::Unbounded;
        return result;
      }
    }
    result.status = Status::Optimal;
    result.x = VecX::Zero(n);
    result.value = 0;
    result.reduced = problem.objective;
    return result;
  }

  // Count artificials: every equality row, plus inequality rows with negative
  // rhs (their slack alone cannot seed a feasible basis).
  int artificials = p;
  for (int i = 0; i < q; ++i)
    if (problem.b_ub[i] < 0) ++artificials;

  Tableau t;
  t.n = n;
  t.slack_begin = n;
  t.art_begin = n + q;
  t.total = n + q + artificials;
  t.rows = MatX::Zero(m, t.total + 1);
  t.basis.assign(static_cast<std::size_t>(m), -1);

  int next_artificial = t.art_begin;
  for (int i = 0; i < p; ++i) {
    const double sign = problem.b_eq[i] < 0 ? -1.0 : 1.0;
    t.rows.block(i, 0, 1, n) = sign * problem.a_eq.row(i);
    t.rows(i, t.total) = sign * problem.b_eq[i];
    t.rows(i, next_artificial) = 1;
    t.basis[static_cast<std::size_t>(i)] = next_artificial++;
  }
  for (int i = 0; i < q; ++i) {
    const int row = p + i;
    const double sign = problem.b_ub[i] < 0 ? -1.0 : 1.0;
    t.rows.block(row, 0, 1, n) = sign * problem.a_ub.row(i);
    t.rows(row, t.total) = sign * problem.b_ub[i];
    t.rows(row, t.slack_begin + i) = sign;
    if (sign < 0) {
      t.rows(row, next_artificial) = 1;
      t.basis[static_cast<std::size_t>(row)] = next_artificial++;
    } else {
      t.basis[static_cast<std::size_t>(row)] = t.slack_begin + i;
    }
  }

  if (artificials > 0) {
    // Phase 1: maximize -(sum of artificials); feasible iff it reaches 0.
    t.reduced = VecX::Zero(t.total + 1);
    for (int j = t.art_begin; j < t.total; ++j) t.reduced[j] = -1;
    for (int i = 0; i < m; ++i)
      if (t.basis[static_cast<std::size_t>(i)] >= t.art_begin)
        t.reduced += t.rows.row(i).transpose();

    const PhaseOutcome outcome = run_phase(t, tolerance);
    if (outcome == PhaseOutcome::IterationLimit) {
      result.status = Status::IterationLimit;
      return result;
    }
    const double infeasibility = -(-t.reduced[t.total]);  // sum of artificials
    if (outcome == PhaseOutcome::Unbounded || infeasibility > tolerance) {
      result.status = Status::Infeasible;
      return result;
    }

    // Drive surviving artificials out of the basis; a row with no usable
    // pivot is redundant and can stay parked on its zero-valued artificial.
    for (int i = 0; i < m; ++i) {
      if (t.basis[static_cast<std::size_t>(i)] < t.art_begin) continue;
      for (int j = 0; j < t.art_begin; ++j) {
        if (std::abs(t.rows(i, j)) > tolerance) {
          t.pivot(i, j);
          break;
        }
      }
    }
  }

  // Phase 2 objective row: reduced profits of the real objective under the
  // current basis.
  t.reduced = VecX::Zero(t.total + 1);
  t.reduced.head(n) = problem.objective;
  for (int i = 0; i < m; ++i) {
    const int b = t.basis[static_cast<std::size_t>(i)];
    if (b < n && problem.objective[b] != 0)
      t.reduced -= problem.objective[b] * t.rows.row(i).transpose();
  }

  switch (run_phase(t, tolerance)) {
    case PhaseOutcome::Unbounded:
      result.status = Status::Unbounded;
      return result;
    case PhaseOutcome::IterationLimit:
      result.status = Status::IterationLimit;
      return result;
    case PhaseOutcome::Converged:
      break;
  }

  result.x = VecX::Zero(n);
  for (int i = 0; i < m; ++i) {
    const int b = t.basis[static_cast<std::size_t>(i)];
    if (b < n) result.x[b] = std::max(0.0, t.rhs(i));
  }
  result.value = problem.objective.dot(result.x);
  result.reduced = t.reduced.head(n);
  result.status = Status::Optimal;
  return result;
}

}  // namespace pcv::lp

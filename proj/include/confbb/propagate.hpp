#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "confbb/constraints.hpp"
#include "confbb/journal.hpp"
#include "confbb/model.hpp"

namespace confbb {

// Maximal activity of a >= row over a bounds box: positive coefficients at
// the upper bound, negative at the lower.  Split into the finite part and a
// count of infinite contributions so removing one entry stays O(1).
struct ActivitySummary {
  double finite = 0.0;
  int inf_count = 0;
};

ActivitySummary activity_summary(const SparseRow& row, const LocalBounds& b);

inline double summary_value(const ActivitySummary& s) {
  return s.inf_count > 0 ? kInf : s.finite;
}

double max_activity(const SparseRow& row, const LocalBounds& b);

// maximal activity of the row with entry k removed (k indexes the sparse
// arrays; the entry's coefficient must be nonzero)
double activity_residual(const SparseRow& row, const ActivitySummary& s,
                         int k, const LocalBounds& b);

enum class PropStatus { kNoChange, kTightened, kInfeasible };

// journal positions currently governing each entry's contributing bound
// (upper side for positive coefficients, lower for negative); global bounds
// contribute no position
std::vector<int> contributing_positions(const SparseRow& row,
                                        const BoundJournal& journal);

// Bound tightening on one >= row: every entry with a finite residual implies
// x_k >= (lhs - resid)/a_k (a_k > 0) or <= (a_k < 0); integer bounds are
// rounded before applying; improvements below the deduction tolerance are
// ignored.  Infeasible when the maximal activity falls short of lhs, or when
// a rounded deduction crosses the opposite bound.
PropStatus propagate_row(const MipModel& model, const SparseRow& row,
                         Reason reason, const std::optional<Stamp>& stamp,
                         LocalBounds& bounds, BoundJournal& journal,
                         const Tolerances& tols, int* deductions = nullptr);

// Unit propagation of a bound disjunction: all literals falsified =
// infeasible; exactly one undecided and none entailed = enforce it.
PropStatus propagate_conflict(const MipModel& model,
                              const ConflictConstraint& c, LocalBounds& bounds,
                              BoundJournal& journal, const Tolerances& tols,
                              int* deductions = nullptr);

// What made the box empty: the detecting constraint, its validity condition,
// and the journal positions of the bounds that produced the contradiction.
// Seeds conflict analysis.
struct PropConflict {
  Reason reason;
  std::optional<Stamp> stamp;
  std::vector<int> positions;
};

struct PropResult {
  PropStatus status = PropStatus::kNoChange;
  std::optional<PropConflict> conflict;
  int rounds = 0;
  int deductions = 0;
  // learned constraints that produced at least one deduction (feeds aging)
  std::vector<int64_t> useful_conflicts;
  std::vector<int64_t> useful_proofs;
};

struct PropagateInput {
  std::span<const ConflictConstraint* const> conflicts;
  std::span<const ProofConstraint* const> proofs;
  bool use_stamped = true;  // depth 0 must skip conditionally-valid constraints
};

// Round-robin fixpoint: model rows, then proof rows, then disjunctions, in
// order with immediate application, repeated until quiet or 50 rounds.
PropResult propagate_fixpoint(const MipModel& model, LocalBounds& bounds,
                              BoundJournal& journal, const PropagateInput& in,
                              const Tolerances& tols);

}  // namespace confbb

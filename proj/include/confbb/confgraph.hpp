#pragma once

#include <optional>
#include <vector>

#include "confbb/constraints.hpp"
#include "confbb/journal.hpp"
#include "confbb/model.hpp"

namespace confbb {

// Journal positions whose bounds, taken together with globally valid
// constraints, admit no feasible point; detector_stamp carries the validity
// condition of whatever detected the contradiction (propagated constraint or
// LP cutoff row).
struct InitialReason {
  std::vector<int> positions;
  std::optional<Stamp> detector_stamp;
};

enum class CutScheme {
  kFirstUip,      // stop at the first unique implication point
  kAllDecisions,  // resolve everything back to branching decisions
};

// Outcome of cutting the implication graph.  A cut with one unconditional
// literal is promoted to a global bound fix instead of a stored constraint;
// an empty unconditional cut proves the model infeasible; an empty
// conditional cut proves no improving solution exists.
struct AnalysisResult {
  std::vector<ConflictConstraint> constraints;  // ids assigned by the store
  std::vector<BoundLiteral> global_fixes;
  bool proves_infeasible = false;
  bool no_improving_solution = false;
  std::optional<Stamp> stamp;  // accumulated over every resolved reason
};

// Resolution over the bound journal: repeatedly replace a member vertex by
// the antecedents recorded when it was deduced.  kFirstUip resolves only
// vertices at the deepest member level until a single one remains;
// kAllDecisions resolves every propagated vertex away.  Surviving members
// become negated-bound literals; depth-0 members are dropped (their bounds
// hold globally).
AnalysisResult analyze_conflict(const MipModel& model,
                                const BoundJournal& journal,
                                const InitialReason& reason, CutScheme scheme,
                                const Tolerances& tols);

}  // namespace confbb

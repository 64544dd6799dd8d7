#pragma once

#include <cstdint>
#include <vector>

#include "confbb/confgraph.hpp"
#include "confbb/constraints.hpp"
#include "confbb/model.hpp"
#include "confbb/pool.hpp"

namespace confbb {

// What gets learned from infeasible subproblems.  kCombinedPool additionally
// routes storage through a capacity-bounded ConflictPool; the other learning
// modes keep an unbounded store with the same aging rule.
enum class LearnMode { kNone, kConflict, kDualray, kCombined, kCombinedPool };

// Which infeasibility events feed conflict-graph analysis.  Proof-constraint
// storage (dualray/combined modes) always comes from infeasible LPs.
enum class ConflictSource { kBoth, kPropOnly, kLpOnly };

enum class NodeSelection { kDfs, kBestBound, kHybrid };

struct SearchSettings {
  LearnMode mode = LearnMode::kCombined;
  ConflictSource conflict_source = ConflictSource::kBoth;
  NodeSelection node_selection = NodeSelection::kDfs;
  CutScheme cut_scheme = CutScheme::kFirstUip;
  double time_limit_s = 60.0;
  int64_t node_limit = 100000;
  Tolerances tols;
  uint64_t seed = 0;  // recorded for run bookkeeping; the search is deterministic
  // keep copies of every stored constraint so tests can replay them against
  // enumeration oracles after the solve
  bool capture_learned = false;
};

enum class SolveStatus { kOptimal, kInfeasible, kLimit };

struct SearchStats {
  int64_t nodes = 0;
  int64_t lp_solves = 0;
  int64_t lp_iterations = 0;
  int64_t lp_stalls = 0;
  int64_t infeasible_lps = 0;
  int64_t infeasible_props = 0;
  int64_t conflicts_analyzed = 0;
  int64_t conflict_constraints = 0;  // stored bound disjunctions
  int64_t proof_constraints = 0;     // stored aggregated rows
  int64_t global_fixes = 0;          // single-literal results applied at depth 0
  // per propagation fixpoint, the number of stored constraints that deduced
  int64_t conflict_deductions = 0;
  int64_t proof_deductions = 0;
  int64_t discarded_proofs = 0;    // birth invariant failed after coefficient drop
  int64_t discarded_oversize = 0;  // disjunction wider than a tenth of the variables
  int64_t rejected_incumbents = 0; // integral LP points that failed the final check
  // reason sparsification: literal counts before/after bound relaxation
  int64_t reason_literals_before = 0;
  int64_t reason_literals_after = 0;
  int64_t relaxation_runs = 0;
  int64_t relaxations_with_slack = 0;  // runs that widened at least one bound
  ConflictPool::Stats pool;  // zeros unless a learning mode ran
  double time_s = 0.0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kLimit;
  std::vector<double> incumbent;  // empty when no feasible point was found
  double objective = 0.0;         // c'x of the incumbent, minimized, no offset
  SearchStats stats;
  // filled only when settings.capture_learned
  std::vector<ConflictConstraint> captured_conflicts;
  std::vector<ProofConstraint> captured_proofs;
};

// LP-based branch and bound: per node, replay the path bounds, propagate to a
// fixpoint over model rows and stored constraints, solve the LP with an
// objective-cutoff row once an incumbent exists, then branch on the most
// fractional integer variable.  Infeasible nodes feed conflict-graph analysis
// and dual-ray aggregation according to the settings.  Requires a bounded LP
// relaxation (throws std::runtime_error on an unbounded one).
SolveResult solve(const MipModel& model, const SearchSettings& settings);

}  // namespace confbb

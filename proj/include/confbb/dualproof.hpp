#pragma once

#include <optional>
#include <span>
#include <vector>

#include "confbb/confgraph.hpp"
#include "confbb/constraints.hpp"
#include "confbb/journal.hpp"
#include "confbb/lp.hpp"
#include "confbb/model.hpp"

namespace confbb {

// Aggregate the rows with the ray's nonnegative row multipliers into one
// inequality  (gamma'A) x >= gamma'b  that is violated over the bounds box
// the ray certifies.  Coefficients with magnitude below 1e-9 are dropped;
// the violation is re-verified afterwards and nullopt returned when the drop
// destroyed it (the caller counts the discard).  includes_cutoff reports a
// meaningful multiplier on extra_rows[cutoff_extra_index].
std::optional<ProofConstraint> build_proof_constraint(
    const FarkasRay& ray, const MipModel& model,
    std::span<const SparseRow> extra_rows, const LocalBounds& bounds,
    int cutoff_extra_index = -1);

struct RelaxedBounds {
  LocalBounds box;                   // local box with droppable bounds reset
  std::vector<BoundLiteral> reason;  // surviving tightened bounds
};

// Widen the certified box back toward the global bounds: bounds the ray does
// not use are dropped outright, the rest are tried cheapest first (by how
// much certificate slack resetting them consumes) and dropped while the
// certificate stays strictly positive.  What survives is the minimal bound
// set that still reproduces the contradiction.
RelaxedBounds relax_local_bounds(const FarkasRay& ray, const MipModel& model,
                                 std::span<const SparseRow> extra_rows,
                                 const LocalBounds& local);

// Map each surviving bound to the earliest journal entry at least as tight
// as it.  Throws std::logic_error when a bound has no journal support; the
// detector stamp is left for the caller (it knows whether a cutoff row fed
// the ray).
InitialReason initial_reason(std::span<const BoundLiteral> surviving,
                             const BoundJournal& journal);

}  // namespace confbb

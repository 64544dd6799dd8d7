#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "confbb/journal.hpp"
#include "confbb/model.hpp"

namespace confbb {

// One requirement of a bound disjunction: x_var >= value (is_lower) or
// x_var <= value.  strict marks the open complement of a continuous bound;
// integer literals are always non-strict with integral values.
struct BoundLiteral {
  int var = -1;
  bool is_lower = false;
  double value = 0.0;
  bool strict = false;
};

// Learned bound disjunction: every feasible point (within the stamp's
// validity region, if stamped) satisfies at least one literal.  Emitted by
// conflict analysis from the negated bounds of an infeasible conjunction.
struct ConflictConstraint {
  int64_t id = -1;
  std::vector<BoundLiteral> literals;
  std::optional<Stamp> stamp;
  int age = 0;
};

// Learned linear inequality row'x >= row.lhs, aggregated from model rows
// (and possibly the objective-cutoff row) with a Farkas ray.  Globally valid
// when unstamped; valid for improving points when stamped.
struct ProofConstraint {
  int64_t id = -1;
  SparseRow row;
  bool includes_cutoff = false;
  std::optional<Stamp> stamp;
  int age = 0;
};

// literal tests against a bounds box
bool literal_falsified(const BoundLiteral& lit, const LocalBounds& bounds,
                       double ztol);
bool literal_entailed(const BoundLiteral& lit, const LocalBounds& bounds,
                      double ztol);
// exact-point test used by enumeration checks
bool literal_holds_at(const BoundLiteral& lit, double x, double ztol);

}  // namespace confbb

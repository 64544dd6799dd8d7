#include "confbb/constraints.hpp"

namespace confbb {

bool literal_falsified(const BoundLiteral& lit, const LocalBounds& bounds,
                       double ztol) {
  if (lit.is_lower) {
    // x >= v (or > v): unreachable when the upper bound sits below v
    return lit.strict ? bounds.ub[lit.var] <= lit.value + ztol
                      : bounds.ub[lit.var] < lit.value - ztol;
  }
  return lit.strict ? bounds.lb[lit.var] >= lit.value - ztol
                    : bounds.lb[lit.var] > lit.value + ztol;
}

bool literal_entailed(const BoundLiteral& lit, const LocalBounds& bounds,
                      double ztol) {
  if (lit.is_lower) {
    return lit.strict ? bounds.lb[lit.var] > lit.value + ztol
                      : bounds.lb[lit.var] >= lit.value - ztol;
  }
  return lit.strict ? bounds.ub[lit.var] < lit.value - ztol
                    : bounds.ub[lit.var] <= lit.value + ztol;
}

bool literal_holds_at(const BoundLiteral& lit, double x, double ztol) {
  if (lit.is_lower)
    return lit.strict ? x > lit.value + ztol : x >= lit.value - ztol;
  return lit.strict ? x < lit.value - ztol : x <= lit.value + ztol;
}

}  // namespace confbb

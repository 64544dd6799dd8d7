#include "confbb/confgraph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace confbb {

namespace {

// negation of a bound: x >= v becomes x <= v-1 (integer) or x < v
// (continuous); the upper side mirrors
BoundLiteral negate_bound(const MipModel& model, const BoundChange& e) {
  BoundLiteral lit;
  lit.var = e.var;
  lit.is_lower = !e.is_lower;
  if (model.is_integer[e.var]) {
    lit.value = std::round(e.value) + (e.is_lower ? -1.0 : 1.0);
    lit.strict = false;
  } else {
    lit.value = e.value;
    lit.strict = true;
  }
  return lit;
}

// a literal is redundant against a sibling on the same variable and side when
// its region is contained in the sibling's; keep the wider one
bool covers(const BoundLiteral& wide, const BoundLiteral& narrow) {
  if (wide.is_lower)
    return wide.value < narrow.value ||
           (wide.value == narrow.value && (!wide.strict || narrow.strict));
  return wide.value > narrow.value ||
         (wide.value == narrow.value && (!wide.strict || narrow.strict));
}

}  // namespace

AnalysisResult analyze_conflict(const MipModel& model,
                                const BoundJournal& journal,
                                const InitialReason& reason, CutScheme scheme,
                                const Tolerances&) {
  AnalysisResult out;

  std::set<int> members;
  for (int p : reason.positions) {
    if (p < 0 || p >= journal.size())
      throw std::logic_error("conflict reason references position " +
                             std::to_string(p) + " outside the journal");
    members.insert(p);
  }

  std::optional<Stamp> acc = reason.detector_stamp;
  auto resolve = [&](int p) {
    const BoundChange& e = journal[p];
    members.erase(p);
    for (int a : e.antecedents) members.insert(a);
    acc = tighter_stamp(acc, e.reason_stamp);
  };

  if (scheme == CutScheme::kFirstUip) {
    int target = 0;
    for (int p : members) target = std::max(target, journal[p].depth);
    if (target > 0) {
      for (;;) {
        // deepest-level members, newest last
        int count = 0, newest = -1;
        for (auto it = members.rbegin(); it != members.rend(); ++it) {
          if (journal[*it].depth == target) {
            ++count;
            if (newest < 0) newest = *it;
          }
        }
        if (count <= 1) break;
        if (journal[newest].reason.kind == ReasonKind::kBranching)
          throw std::logic_error(
              "multiple branching vertices at one depth in conflict reason");
        resolve(newest);
      }
    }
  } else {
    for (;;) {
      int pick = -1;
      for (auto it = members.rbegin(); it != members.rend(); ++it)
        if (journal[*it].reason.kind != ReasonKind::kBranching) {
          pick = *it;
          break;
        }
      if (pick < 0) break;
      resolve(pick);
    }
  }

  // surviving vertices become literals; depth-0 bounds hold globally and are
  // dropped, and per (variable, side) only the widest literal survives
  std::vector<BoundLiteral> lits;
  for (int p : members) {
    const BoundChange& e = journal[p];
    if (e.depth == 0) continue;
    BoundLiteral lit = negate_bound(model, e);
    bool merged = false;
    for (BoundLiteral& have : lits) {
      if (have.var != lit.var || have.is_lower != lit.is_lower) continue;
      if (covers(lit, have)) have = lit;
      merged = true;
      break;
    }
    if (!merged) lits.push_back(lit);
  }

  out.stamp = acc;
  if (lits.empty()) {
    if (acc)
      out.no_improving_solution = true;
    else
      out.proves_infeasible = true;
    return out;
  }
  if (lits.size() == 1 && !acc) {
    out.global_fixes.push_back(lits[0]);
    return out;
  }

  ConflictConstraint c;
  c.literals = std::move(lits);
  c.stamp = acc;
  out.constraints.push_back(std::move(c));
  return out;
}

}  // namespace confbb

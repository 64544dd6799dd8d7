#include "confbb/propagate.hpp"

#include <cassert>
#include <cmath>

namespace confbb {
namespace {

// contribution of entry k to the maximal activity; +inf when unbounded
double contribution(const SparseRow& row, int k, const LocalBounds& b) {
  double a = row.value[k];
  int v = row.index[k];
  if (a > 0.0) return b.ub[v] >= kInf ? kInf : a * b.ub[v];
  return b.lb[v] <= -kInf ? kInf : a * b.lb[v];
}

}  // namespace

ActivitySummary activity_summary(const SparseRow& row, const LocalBounds& b) {
  ActivitySummary s;
  for (int k = 0; k < row.size(); ++k) {
    double c = contribution(row, k, b);
    if (c >= kInf)
      ++s.inf_count;
    else
      s.finite += c;
  }
  return s;
}

double max_activity(const SparseRow& row, const LocalBounds& b) {
  return summary_value(activity_summary(row, b));
}

double activity_residual(const SparseRow& row, const ActivitySummary& s,
                         int k, const LocalBounds& b) {
  assert(row.value[k] != 0.0);
  double c = contribution(row, k, b);
  if (c >= kInf) return s.inf_count > 1 ? kInf : s.finite;
  return s.inf_count > 0 ? kInf : s.finite - c;
}

std::vector<int> contributing_positions(const SparseRow& row,
                                        const BoundJournal& journal) {
  std::vector<int> out;
  for (int k = 0; k < row.size(); ++k) {
    int v = row.index[k];
    int pos = row.value[k] > 0.0 ? journal.upper_pos(v) : journal.lower_pos(v);
    if (pos >= 0) out.push_back(pos);
  }
  return out;
}

PropStatus propagate_row(const MipModel& model, const SparseRow& row,
                         Reason reason, const std::optional<Stamp>& stamp,
                         LocalBounds& bounds, BoundJournal& journal,
                         const Tolerances& tols, int* deductions) {
  ActivitySummary s = activity_summary(row, bounds);
  if (summary_value(s) < row.lhs - tols.feasibility)
    return PropStatus::kInfeasible;

  // the row's own deductions never change its own contributions (a > 0
  // tightens lb, contributions use ub), so the summary stays valid
  PropStatus st = PropStatus::kNoChange;
  for (int k = 0; k < row.size(); ++k) {
    double resid = activity_residual(row, s, k, bounds);
    if (resid >= kInf) continue;
    double a = row.value[k];
    int v = row.index[k];
    double cand = (row.lhs - resid) / a;
    if (a > 0.0) {
      if (model.is_integer[v]) cand = std::ceil(cand - tols.integrality);
      if (cand <= bounds.lb[v] + tols.deduction) continue;
      if (cand > bounds.ub[v] + tols.feasibility)
        return PropStatus::kInfeasible;  // rounded bound crossed the box
      if (cand > bounds.ub[v]) cand = bounds.ub[v];
      std::vector<int> ante;
      for (int j = 0; j < row.size(); ++j) {
        if (j == k) continue;
        int p = row.value[j] > 0.0 ? journal.upper_pos(row.index[j])
                                   : journal.lower_pos(row.index[j]);
        if (p >= 0) ante.push_back(p);
      }
      journal.apply(bounds, v, true, cand, reason, stamp, std::move(ante));
    } else {
      if (model.is_integer[v]) cand = std::floor(cand + tols.integrality);
      if (cand >= bounds.ub[v] - tols.deduction) continue;
      if (cand < bounds.lb[v] - tols.feasibility)
        return PropStatus::kInfeasible;
      if (cand < bounds.lb[v]) cand = bounds.lb[v];
      std::vector<int> ante;
      for (int j = 0; j < row.size(); ++j) {
        if (j == k) continue;
        int p = row.value[j] > 0.0 ? journal.upper_pos(row.index[j])
                                   : journal.lower_pos(row.index[j]);
        if (p >= 0) ante.push_back(p);
      }
      journal.apply(bounds, v, false, cand, reason, stamp, std::move(ante));
    }
    st = PropStatus::kTightened;
    if (deductions) ++*deductions;
  }
  return st;
}

PropStatus propagate_conflict(const MipModel& model,
                              const ConflictConstraint& c, LocalBounds& bounds,
                              BoundJournal& journal, const Tolerances& tols,
                              int* deductions) {
  int undecided = -1;
  int undecided_count = 0;
  for (size_t i = 0; i < c.literals.size(); ++i) {
    const BoundLiteral& lit = c.literals[i];
    if (literal_entailed(lit, bounds, tols.zero))
      return PropStatus::kNoChange;  // already satisfied
    if (!literal_falsified(lit, bounds, tols.zero)) {
      undecided = static_cast<int>(i);
      ++undecided_count;
    }
  }
  if (undecided_count == 0) return PropStatus::kInfeasible;
  if (undecided_count > 1) return PropStatus::kNoChange;

  const BoundLiteral& lit = c.literals[undecided];
  int v = lit.var;
  double value = lit.value;
  if (lit.strict) {
    // open continuous literal enforced as its closure; integer strictness
    // steps to the next representable point
    if (model.is_integer[v]) value += lit.is_lower ? 1.0 : -1.0;
  }
  Reason reason{ReasonKind::kConflictConstraint, c.id};
  std::vector<int> ante;
  for (size_t i = 0; i < c.literals.size(); ++i) {
    if (static_cast<int>(i) == undecided) continue;
    const BoundLiteral& other = c.literals[i];
    int p = other.is_lower ? journal.upper_pos(other.var)
                           : journal.lower_pos(other.var);
    if (p >= 0) ante.push_back(p);
  }
  if (lit.is_lower) {
    if (value <= bounds.lb[v] + tols.deduction) return PropStatus::kNoChange;
    if (value > bounds.ub[v] + tols.feasibility)
      return PropStatus::kInfeasible;
    if (value > bounds.ub[v]) value = bounds.ub[v];
    journal.apply(bounds, v, true, value, reason, c.stamp, std::move(ante));
  } else {
    if (value >= bounds.ub[v] - tols.deduction) return PropStatus::kNoChange;
    if (value < bounds.lb[v] - tols.feasibility)
      return PropStatus::kInfeasible;
    if (value < bounds.lb[v]) value = bounds.lb[v];
    journal.apply(bounds, v, false, value, reason, c.stamp, std::move(ante));
  }
  if (deductions) ++*deductions;
  return PropStatus::kTightened;
}

PropResult propagate_fixpoint(const MipModel& model, LocalBounds& bounds,
                              BoundJournal& journal, const PropagateInput& in,
                              const Tolerances& tols) {
  PropResult res;
  constexpr int kRoundCap = 50;

  auto note_useful = [](std::vector<int64_t>& v, int64_t id) {
    for (int64_t x : v)
      if (x == id) return;
    v.push_back(id);
  };

  for (int round = 0; round < kRoundCap; ++round) {
    res.rounds = round + 1;
    int before = res.deductions;

    for (int i = 0; i < model.num_rows(); ++i) {
      PropStatus st =
          propagate_row(model, model.rows[i], {ReasonKind::kModelRow, i},
                        std::nullopt, bounds, journal, tols, &res.deductions);
      if (st == PropStatus::kInfeasible) {
        res.status = PropStatus::kInfeasible;
        res.conflict = PropConflict{
            {ReasonKind::kModelRow, i},
            std::nullopt,
            contributing_positions(model.rows[i], journal)};
        return res;
      }
    }

    for (const ProofConstraint* p : in.proofs) {
      if (!in.use_stamped && p->stamp) continue;
      int got = res.deductions;
      PropStatus st = propagate_row(
          model, p->row, {ReasonKind::kProofConstraint, p->id}, p->stamp,
          bounds, journal, tols, &res.deductions);
      if (st == PropStatus::kInfeasible) {
        res.status = PropStatus::kInfeasible;
        res.conflict =
            PropConflict{{ReasonKind::kProofConstraint, p->id},
                         p->stamp,
                         contributing_positions(p->row, journal)};
        note_useful(res.useful_proofs, p->id);
        return res;
      }
      if (res.deductions > got) note_useful(res.useful_proofs, p->id);
    }

    for (const ConflictConstraint* c : in.conflicts) {
      if (!in.use_stamped && c->stamp) continue;
      int got = res.deductions;
      PropStatus st =
          propagate_conflict(model, *c, bounds, journal, tols, &res.deductions);
      if (st == PropStatus::kInfeasible) {
        res.status = PropStatus::kInfeasible;
        std::vector<int> pos;
        for (const BoundLiteral& lit : c->literals) {
          int p = lit.is_lower ? journal.upper_pos(lit.var)
                               : journal.lower_pos(lit.var);
          if (p >= 0) pos.push_back(p);
        }
        res.conflict = PropConflict{
            {ReasonKind::kConflictConstraint, c->id}, c->stamp, std::move(pos)};
        note_useful(res.useful_conflicts, c->id);
        return res;
      }
      if (res.deductions > got) note_useful(res.useful_conflicts, c->id);
    }

    if (res.deductions == before) break;
    res.status = PropStatus::kTightened;
  }
  return res;
}

}  // namespace confbb

#include "confbb/journal.hpp"

#include <cassert>

namespace confbb {

int BoundJournal::apply(LocalBounds& bounds, int var, bool is_lower,
                        double value, Reason reason,
                        std::optional<Stamp> reason_stamp,
                        std::vector<int> antecedents) {
  BoundChange c;
  c.var = var;
  c.is_lower = is_lower;
  c.value = value;
  c.depth = depth_;
  c.reason = reason;
  c.reason_stamp = std::move(reason_stamp);
  c.antecedents = std::move(antecedents);
  int pos = size();
  if (is_lower) {
    c.old_value = bounds.lb[var];
    c.old_pos = lb_pos_[var];
    bounds.lb[var] = value;
    lb_pos_[var] = pos;
  } else {
    c.old_value = bounds.ub[var];
    c.old_pos = ub_pos_[var];
    bounds.ub[var] = value;
    ub_pos_[var] = pos;
  }
  entries_.push_back(std::move(c));
  return pos;
}

void BoundJournal::truncate_to_depth(LocalBounds& bounds, int depth) {
  while (!entries_.empty() && entries_.back().depth > depth) {
    const BoundChange& c = entries_.back();
    if (c.is_lower) {
      bounds.lb[c.var] = c.old_value;
      lb_pos_[c.var] = c.old_pos;
    } else {
      bounds.ub[c.var] = c.old_value;
      ub_pos_[c.var] = c.old_pos;
    }
    entries_.pop_back();
  }
  if (depth_ > depth) depth_ = depth;
}

LocalBounds BoundJournal::replay(const MipModel& model) const {
  LocalBounds b = LocalBounds::from_global(model);
  for (const BoundChange& c : entries_) {
    if (c.is_lower)
      b.lb[c.var] = c.value;
    else
      b.ub[c.var] = c.value;
  }
  return b;
}

}  // namespace confbb

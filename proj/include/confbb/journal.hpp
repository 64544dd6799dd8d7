#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "confbb/model.hpp"

namespace confbb {

// Validity condition attached to anything derived with help of the objective
// cutoff: the statement holds for every feasible point with
// objective'x <= cutoff_bound.  incumbent records the incumbent value the
// cutoff was built from (used by the pool's incumbent-improvement deletion).
struct Stamp {
  double incumbent = 0.0;
  double cutoff_bound = 0.0;
};

// tightest condition wins: smaller cutoff_bound = smaller validity region
inline std::optional<Stamp> tighter_stamp(const std::optional<Stamp>& a,
                                          const std::optional<Stamp>& b) {
  if (!a) return b;
  if (!b) return a;
  return a->cutoff_bound <= b->cutoff_bound ? a : b;
}

enum class ReasonKind : uint8_t {
  kBranching,
  kModelRow,
  kConflictConstraint,
  kProofConstraint,
};

struct Reason {
  ReasonKind kind = ReasonKind::kBranching;
  int64_t id = -1;  // row index or learned-constraint id
};

// One bound tightening.  old_* fields allow exact undo when backtracking.
struct BoundChange {
  int var = -1;
  bool is_lower = false;
  double value = 0.0;
  double old_value = 0.0;
  int old_pos = -1;  // journal position previously governing this bound side
  int depth = 0;
  Reason reason;
  std::optional<Stamp> reason_stamp;   // conditionality of the deducing constraint
  std::vector<int> antecedents;        // positions whose bounds fed the deduction
};

// Chronological record of bound changes along the current search path.
// Positions are vector indices; each entry's antecedents point strictly
// before it.  Truncation always removes a suffix, so surviving entries never
// dangle.  Applying a change also maintains, per variable and side, the
// position of the entry currently governing that bound (-1 = global).
class BoundJournal {
 public:
  explicit BoundJournal(int num_vars)
      : lb_pos_(num_vars, -1), ub_pos_(num_vars, -1) {}

  int size() const { return static_cast<int>(entries_.size()); }
  bool empty() const { return entries_.empty(); }
  const BoundChange& operator[](int pos) const { return entries_[pos]; }

  int current_depth() const { return depth_; }
  void set_depth(int d) { depth_ = d; }

  int lower_pos(int var) const { return lb_pos_[var]; }
  int upper_pos(int var) const { return ub_pos_[var]; }
  int pos_of(int var, bool is_lower) const {
    return is_lower ? lb_pos_[var] : ub_pos_[var];
  }

  // Record a tightening and apply it to `bounds`.  The caller guarantees the
  // new value actually tightens the current one.
  int apply(LocalBounds& bounds, int var, bool is_lower, double value,
            Reason reason, std::optional<Stamp> reason_stamp,
            std::vector<int> antecedents);

  // Undo every entry with depth > `depth` (a suffix), restoring bounds.
  void truncate_to_depth(LocalBounds& bounds, int depth);

  // Rebuild bounds from scratch by replaying all entries (testing hook).
  LocalBounds replay(const MipModel& model) const;

 private:
  std::vector<BoundChange> entries_;
  std::vector<int> lb_pos_, ub_pos_;
  int depth_ = 0;
};

}  // namespace confbb

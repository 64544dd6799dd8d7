#include "confbb/journal.hpp"
#include "doctest.h"

using namespace confbb;

namespace {

MipModel box_model(int n) {
  MipModel m;
  m.objective.assign(n, 0.0);
  m.lb.assign(n, 0.0);
  m.ub.assign(n, 10.0);
  m.is_integer.assign(n, 1);
  for (int j = 0; j < n; ++j) m.var_names.push_back("x" + std::to_string(j));
  return m;
}

}  // namespace

TEST_CASE("apply records old state and updates the governing position") {
  MipModel m = box_model(2);
  LocalBounds b = LocalBounds::from_global(m);
  BoundJournal j(2);

  CHECK(j.lower_pos(0) == -1);
  j.set_depth(1);
  int p0 = j.apply(b, 0, true, 3.0, {ReasonKind::kBranching, -1}, {}, {});
  CHECK(p0 == 0);
  CHECK(b.lb[0] == 3.0);
  CHECK(j.lower_pos(0) == 0);
  CHECK(j[p0].old_value == 0.0);
  CHECK(j[p0].old_pos == -1);
  CHECK(j[p0].depth == 1);

  int p1 = j.apply(b, 0, true, 5.0, {ReasonKind::kModelRow, 7}, {},
                   {p0});
  CHECK(p1 == 1);
  CHECK(b.lb[0] == 5.0);
  CHECK(j[p1].old_value == 3.0);
  CHECK(j[p1].old_pos == 0);
  CHECK(j[p1].antecedents == std::vector<int>{p0});
}

TEST_CASE("truncation undoes exactly the deeper suffix") {
  MipModel m = box_model(3);
  LocalBounds b = LocalBounds::from_global(m);
  BoundJournal j(3);

  j.set_depth(1);
  j.apply(b, 0, true, 2.0, {ReasonKind::kBranching, -1}, {}, {});
  j.apply(b, 1, false, 6.0, {ReasonKind::kModelRow, 0}, {}, {0});
  j.set_depth(2);
  j.apply(b, 0, true, 4.0, {ReasonKind::kBranching, -1}, {}, {});
  j.apply(b, 2, false, 1.0, {ReasonKind::kModelRow, 1}, {}, {2});
  CHECK(j.size() == 4);
  CHECK(b.lb[0] == 4.0);

  j.truncate_to_depth(b, 1);
  CHECK(j.size() == 2);
  CHECK(j.current_depth() == 1);
  CHECK(b.lb[0] == 2.0);  // depth-2 tightening gone, depth-1 one retained
  CHECK(b.ub[1] == 6.0);
  CHECK(b.ub[2] == 10.0);
  CHECK(j.lower_pos(0) == 0);
  CHECK(j.upper_pos(2) == -1);

  j.truncate_to_depth(b, 0);
  CHECK(j.empty());
  CHECK(b.lb[0] == 0.0);
  CHECK(b.ub[1] == 10.0);
  CHECK(j.lower_pos(0) == -1);
}

TEST_CASE("positions reused after truncation never dangle") {
  MipModel m = box_model(2);
  LocalBounds b = LocalBounds::from_global(m);
  BoundJournal j(2);

  j.set_depth(1);
  j.apply(b, 0, true, 1.0, {ReasonKind::kBranching, -1}, {}, {});
  j.set_depth(2);
  j.apply(b, 1, false, 4.0, {ReasonKind::kModelRow, 0}, {}, {0});
  j.truncate_to_depth(b, 1);
  j.set_depth(2);
  int p = j.apply(b, 1, true, 2.0, {ReasonKind::kBranching, -1}, {}, {});
  CHECK(p == 1);  // slot reused
  CHECK(j[p].var == 1);
  CHECK(j[p].is_lower);
  // the surviving depth-1 entry still reads correctly
  CHECK(j[0].var == 0);
  CHECK(j.lower_pos(1) == 1);
}

TEST_CASE("replay reconstructs the same bounds as incremental application") {
  MipModel m = box_model(3);
  LocalBounds b = LocalBounds::from_global(m);
  BoundJournal j(3);
  j.set_depth(1);
  j.apply(b, 0, true, 2.0, {ReasonKind::kBranching, -1}, {}, {});
  j.apply(b, 2, false, 7.0, {ReasonKind::kModelRow, 0}, {}, {0});
  j.set_depth(2);
  j.apply(b, 0, true, 3.0, {ReasonKind::kConflictConstraint, 11},
          Stamp{5.0, 4.0}, {0, 1});
  LocalBounds r = j.replay(m);
  CHECK(r.lb == b.lb);
  CHECK(r.ub == b.ub);
}

TEST_CASE("stamps travel with the entry and the tightest one wins") {
  MipModel m = box_model(1);
  LocalBounds b = LocalBounds::from_global(m);
  BoundJournal j(1);
  j.apply(b, 0, true, 1.0, {ReasonKind::kProofConstraint, 3},
          Stamp{8.0, 7.0}, {});
  REQUIRE(j[0].reason_stamp.has_value());
  CHECK(j[0].reason_stamp->cutoff_bound == 7.0);

  std::optional<Stamp> none;
  std::optional<Stamp> loose = Stamp{9.0, 8.0};
  std::optional<Stamp> tight = Stamp{6.0, 5.0};
  CHECK(!tighter_stamp(none, none).has_value());
  CHECK(tighter_stamp(none, loose)->cutoff_bound == 8.0);
  CHECK(tighter_stamp(loose, none)->cutoff_bound == 8.0);
  CHECK(tighter_stamp(loose, tight)->cutoff_bound == 5.0);
  CHECK(tighter_stamp(tight, loose)->cutoff_bound == 5.0);
}

#include <random>
#include <vector>

#include "confbb/propagate.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace confbb;

namespace {

MipModel box_model(std::vector<double> lb, std::vector<double> ub,
                   std::vector<char> integrality) {
  MipModel m;
  int n = static_cast<int>(lb.size());
  m.objective.assign(n, 0.0);
  m.lb = std::move(lb);
  m.ub = std::move(ub);
  m.is_integer = std::move(integrality);
  for (int j = 0; j < n; ++j) m.var_names.push_back("x" + std::to_string(j));
  return m;
}

ConflictConstraint two_lower_disjunction() {
  ConflictConstraint c;
  c.id = 42;
  c.literals = {{0, true, 1.0, false}, {1, true, 1.0, false}};
  return c;
}

}  // namespace

TEST_CASE("maximal activity takes each coefficient at its paying bound") {
  LocalBounds b{{0.0, 0.0}, {1.0, 2.0}};
  SparseRow r{{0, 1}, {2.0, -3.0}, 0.0, ""};
  CHECK(max_activity(r, b) == doctest::Approx(2.0));  // 2*1 + (-3)*0

  LocalBounds half{{0.0, 0.0}, {0.5, 0.5}};
  SparseRow sum{{0, 1}, {1.0, 1.0}, 2.0, ""};
  CHECK(max_activity(sum, half) == doctest::Approx(1.0));

  LocalBounds open{{0.0}, {kInf}};
  SparseRow one{{0}, {1.0}, 0.0, ""};
  CHECK(max_activity(one, open) == kInf);

  LocalBounds lowopen{{-kInf}, {5.0}};
  SparseRow neg{{0}, {-1.0}, 0.0, ""};
  CHECK(max_activity(neg, lowopen) == kInf);  // -1 * lb with lb = -inf
}

TEST_CASE("residual drops exactly one entry and tolerates one infinity") {
  LocalBounds b{{0.0, 0.0}, {5.0, 1.0}};
  SparseRow r{{0, 1}, {2.0, 3.0}, 6.0, ""};
  ActivitySummary s = activity_summary(r, b);
  CHECK(activity_residual(r, s, 0, b) == doctest::Approx(3.0));
  CHECK(activity_residual(r, s, 1, b) == doctest::Approx(10.0));

  LocalBounds b2{{0.0, 0.0}, {1.0, 2.0}};
  SparseRow r2{{0, 1}, {2.0, -3.0}, 0.0, ""};
  ActivitySummary s2 = activity_summary(r2, b2);
  CHECK(activity_residual(r2, s2, 1, b2) == doctest::Approx(2.0));

  LocalBounds b3{{0.0, 0.0}, {kInf, 1.0}};
  SparseRow r3{{0, 1}, {1.0, 1.0}, 0.0, ""};
  ActivitySummary s3 = activity_summary(r3, b3);
  CHECK(activity_residual(r3, s3, 0, b3) == doctest::Approx(1.0));
  CHECK(activity_residual(r3, s3, 1, b3) == kInf);
}

TEST_CASE("residual plus own contribution equals the maximal activity") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    int n = oracle::rng_int(rng, 1, 5);
    LocalBounds b;
    SparseRow r;
    for (int j = 0; j < n; ++j) {
      b.lb.push_back(oracle::rng_int(rng, -3, 0));
      b.ub.push_back(b.lb[j] + oracle::rng_int(rng, 0, 4));
      int a = oracle::rng_int(rng, -3, 3);
      if (a == 0) a = 1;
      r.index.push_back(j);
      r.value.push_back(a);
    }
    ActivitySummary s = activity_summary(r, b);
    double total = summary_value(s);
    for (int k = 0; k < r.size(); ++k) {
      double resid = activity_residual(r, s, k, b);
      double own = r.value[k] > 0 ? r.value[k] * b.ub[r.index[k]]
                                  : r.value[k] * b.lb[r.index[k]];
      CHECK(resid + own == doctest::Approx(total));
    }
  }
}

TEST_CASE("row tightening derives the implied bound and rounds integers") {
  // 2 x0 + 3 x1 >= 6 with x0 in [0,5], x1 in [0,1]
  MipModel m = box_model({0.0, 0.0}, {5.0, 1.0}, {0, 0});
  SparseRow r{{0, 1}, {2.0, 3.0}, 6.0, "need6"};
  m.rows.push_back(r);

  LocalBounds b = LocalBounds::from_global(m);
  BoundJournal j(2);
  PropStatus st = propagate_row(m, r, {ReasonKind::kModelRow, 0}, std::nullopt,
                                b, j, {});
  CHECK(st == PropStatus::kTightened);
  CHECK(b.lb[0] == doctest::Approx(1.5));
  REQUIRE(j.size() == 1);
  CHECK(j[0].var == 0);
  CHECK(j[0].is_lower);
  CHECK(j[0].reason.kind == ReasonKind::kModelRow);
  CHECK(j[0].antecedents.empty());  // only global bounds contributed

  MipModel mi = box_model({0.0, 0.0}, {5.0, 1.0}, {1, 0});
  mi.rows.push_back(r);
  LocalBounds bi = LocalBounds::from_global(mi);
  BoundJournal ji(2);
  propagate_row(mi, r, {ReasonKind::kModelRow, 0}, std::nullopt, bi, ji, {});
  CHECK(bi.lb[0] == 2.0);  // ceil(1.5)
}

TEST_CASE("activity shortfall is infeasible before any deduction") {
  MipModel m = box_model({0.0, 0.0}, {0.5, 0.5}, {0, 0});
  SparseRow r{{0, 1}, {1.0, 1.0}, 2.0, ""};
  m.rows.push_back(r);
  LocalBounds b = LocalBounds::from_global(m);
  BoundJournal j(2);
  CHECK(propagate_row(m, r, {ReasonKind::kModelRow, 0}, std::nullopt, b, j,
                      {}) == PropStatus::kInfeasible);
  CHECK(j.empty());
  CHECK(b.lb[0] == 0.0);  // untouched
}

TEST_CASE("integer rounding that crosses the box is infeasible") {
  // 2 x0 + x1 >= 3.5 with integer x0 in [0, 1.4]: implied x0 >= 1.25,
  // rounded to 2, which no longer fits
  MipModel m = box_model({0.0, 0.0}, {1.4, 1.0}, {1, 0});
  SparseRow r{{0, 1}, {2.0, 1.0}, 3.5, ""};
  m.rows.push_back(r);
  LocalBounds b = LocalBounds::from_global(m);
  BoundJournal j(2);
  CHECK(propagate_row(m, r, {ReasonKind::kModelRow, 0}, std::nullopt, b, j,
                      {}) == PropStatus::kInfeasible);
}

TEST_CASE("negative coefficients tighten upper bounds") {
  // -x0 + 2 x1 >= 1 with x1 <= 1: x0 <= 2*1 - 1 = 1
  MipModel m = box_model({0.0, 0.0}, {5.0, 1.0}, {0, 0});
  SparseRow r{{0, 1}, {-1.0, 2.0}, 1.0, ""};
  m.rows.push_back(r);
  LocalBounds b = LocalBounds::from_global(m);
  BoundJournal j(2);
  CHECK(propagate_row(m, r, {ReasonKind::kModelRow, 0}, std::nullopt, b, j,
                      {}) == PropStatus::kTightened);
  CHECK(b.ub[0] == doctest::Approx(1.0));
}

TEST_CASE("disjunction unit propagation over binaries") {
  MipModel m = box_model({0.0, 0.0}, {1.0, 1.0}, {1, 1});
  ConflictConstraint c = two_lower_disjunction();

  // u = (0, 1): first literal dead, second must fire
  LocalBounds b{{0.0, 0.0}, {0.0, 1.0}};
  BoundJournal j(2);
  j.set_depth(1);
  int p = j.apply(b, 0, false, 0.0, {ReasonKind::kBranching, -1}, {}, {});
  CHECK(propagate_conflict(m, c, b, j, {}) == PropStatus::kTightened);
  CHECK(b.lb[1] == 1.0);
  CHECK(j[j.size() - 1].reason.kind == ReasonKind::kConflictConstraint);
  CHECK(j[j.size() - 1].reason.id == 42);
  CHECK(j[j.size() - 1].antecedents == std::vector<int>{p});

  // u = (0, 0): both dead
  LocalBounds dead{{0.0, 0.0}, {0.0, 0.0}};
  BoundJournal jd(2);
  CHECK(propagate_conflict(m, c, dead, jd, {}) == PropStatus::kInfeasible);

  // u = (1, 1): nothing forced
  LocalBounds open{{0.0, 0.0}, {1.0, 1.0}};
  BoundJournal jo(2);
  CHECK(propagate_conflict(m, c, open, jo, {}) == PropStatus::kNoChange);

  // entailed literal: constraint already satisfied, no deduction
  LocalBounds sat{{1.0, 0.0}, {1.0, 0.0}};
  BoundJournal js(2);
  CHECK(propagate_conflict(m, c, sat, js, {}) == PropStatus::kNoChange);
}

TEST_CASE("strict literals step integers and close continuous bounds") {
  MipModel m = box_model({0.0, 0.0}, {10.0, 10.0}, {1, 0});
  ConflictConstraint c;
  c.id = 7;
  c.literals = {{0, true, 3.0, true},    // x0 > 3, integer
                {1, false, 2.0, true}};  // x1 < 2, continuous

  // falsify the continuous literal: lb1 = 2 makes x1 < 2 impossible
  LocalBounds b{{0.0, 2.0}, {10.0, 10.0}};
  BoundJournal j(2);
  CHECK(propagate_conflict(m, c, b, j, {}) == PropStatus::kTightened);
  CHECK(b.lb[0] == 4.0);  // strict integer literal steps to v+1

  // falsify the integer literal: ub0 = 3 leaves x1 < 2 as the unit
  LocalBounds b2{{0.0, 0.0}, {3.0, 10.0}};
  BoundJournal j2(2);
  CHECK(propagate_conflict(m, c, b2, j2, {}) == PropStatus::kTightened);
  CHECK(b2.ub[1] == 2.0);  // closure of the open bound
}

TEST_CASE("fixpoint reaches mutual deductions and reports rounds") {
  // x0 + x1 >= 2 over binaries forces both to 1
  MipModel m = box_model({0.0, 0.0}, {1.0, 1.0}, {1, 1});
  m.rows.push_back({{0, 1}, {1.0, 1.0}, 2.0, "sum"});
  LocalBounds b = LocalBounds::from_global(m);
  BoundJournal j(2);
  PropResult r = propagate_fixpoint(m, b, j, {}, {});
  CHECK(r.status == PropStatus::kTightened);
  CHECK(b.lb[0] == 1.0);
  CHECK(b.lb[1] == 1.0);
  CHECK(r.deductions == 2);

  // opposing rows cross after the first pass
  MipModel m2 = box_model({0.0, 0.0}, {1.0, 1.0}, {1, 1});
  m2.rows.push_back({{0, 1}, {1.0, 1.0}, 2.0, "up"});
  m2.rows.push_back({{0, 1}, {-1.0, -1.0}, -1.0, "down"});
  LocalBounds b2 = LocalBounds::from_global(m2);
  BoundJournal j2(2);
  PropResult r2 = propagate_fixpoint(m2, b2, j2, {}, {});
  REQUIRE(r2.status == PropStatus::kInfeasible);
  REQUIRE(r2.conflict.has_value());
  CHECK(r2.conflict->reason.kind == ReasonKind::kModelRow);
  CHECK(r2.conflict->reason.id == 1);

  // nothing to do
  MipModel m3 = box_model({0.0}, {1.0}, {1});
  LocalBounds b3 = LocalBounds::from_global(m3);
  BoundJournal j3(1);
  CHECK(propagate_fixpoint(m3, b3, j3, {}, {}).status ==
        PropStatus::kNoChange);
}

TEST_CASE("branching that starves a row is detected as infeasible") {
  MipModel m = box_model({0.0, 0.0}, {1.0, 1.0}, {1, 1});
  m.rows.push_back({{0, 1}, {1.0, 1.0}, 2.0, "sum"});
  LocalBounds b = LocalBounds::from_global(m);
  BoundJournal j(2);
  j.set_depth(1);
  j.apply(b, 0, false, 0.0, {ReasonKind::kBranching, -1}, {}, {});
  PropResult r = propagate_fixpoint(m, b, j, {}, {});
  REQUIRE(r.status == PropStatus::kInfeasible);
  REQUIRE(r.conflict.has_value());
  // the branched upper bound is the contradicting position
  CHECK(r.conflict->positions == std::vector<int>{0});
}

TEST_CASE("learned constraints join the fixpoint and are credited") {
  MipModel m = box_model({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}, {1, 1, 1});
  ConflictConstraint c;
  c.id = 5;
  c.literals = {{0, true, 1.0, false}, {1, true, 1.0, false}};
  ProofConstraint p;
  p.id = 9;
  p.row = {{1, 2}, {1.0, 1.0}, 2.0, ""};  // x1 + x2 >= 2

  std::vector<const ConflictConstraint*> cc = {&c};
  std::vector<const ProofConstraint*> pp = {&p};

  LocalBounds b = LocalBounds::from_global(m);
  BoundJournal j(3);
  j.set_depth(1);
  j.apply(b, 0, false, 0.0, {ReasonKind::kBranching, -1}, {}, {});
  PropResult r = propagate_fixpoint(m, b, j, {cc, pp, true}, {});
  CHECK(r.status == PropStatus::kTightened);
  CHECK(b.lb[1] == 1.0);  // proof row fires first, then the disjunction holds
  CHECK(b.lb[2] == 1.0);
  CHECK(r.useful_proofs == std::vector<int64_t>{9});
  // disjunction became satisfied by the proof deduction, so no credit
  CHECK(r.useful_conflicts.empty());
}

TEST_CASE("stamped constraints sit out when conditional use is disabled") {
  MipModel m = box_model({0.0, 0.0}, {1.0, 1.0}, {1, 1});
  ProofConstraint p;
  p.id = 3;
  p.row = {{0}, {1.0}, 1.0, ""};  // x0 >= 1
  p.stamp = Stamp{10.0, 9.0};
  std::vector<const ProofConstraint*> pp = {&p};

  LocalBounds b = LocalBounds::from_global(m);
  BoundJournal j(2);
  PropResult r = propagate_fixpoint(m, b, j, {{}, pp, false}, {});
  CHECK(r.status == PropStatus::kNoChange);
  CHECK(b.lb[0] == 0.0);

  PropResult r2 = propagate_fixpoint(m, b, j, {{}, pp, true}, {});
  CHECK(r2.status == PropStatus::kTightened);
  CHECK(b.lb[0] == 1.0);
  REQUIRE(j[0].reason_stamp.has_value());
  CHECK(j[0].reason_stamp->cutoff_bound == 9.0);
}

TEST_CASE("no integer point inside the original box is ever cut off") {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 40; ++t) {
    int n = oracle::rng_int(rng, 2, 5);
    MipModel m = box_model(std::vector<double>(n, 0.0),
                           std::vector<double>(n, 1.0),
                           std::vector<char>(n, 1));
    int nr = oracle::rng_int(rng, 1, 4);
    for (int i = 0; i < nr; ++i) {
      SparseRow r;
      for (int j = 0; j < n; ++j) {
        int a = oracle::rng_int(rng, -2, 2);
        if (a != 0) {
          r.index.push_back(j);
          r.value.push_back(a);
        }
      }
      if (r.index.empty()) continue;
      r.lhs = oracle::rng_int(rng, -2, 2);
      m.rows.push_back(std::move(r));
    }
    LocalBounds before = LocalBounds::from_global(m);
    auto pts = oracle::enumerate_integer_points(m, before);

    LocalBounds b = LocalBounds::from_global(m);
    BoundJournal j(n);
    PropResult r = propagate_fixpoint(m, b, j, {}, {});

    INFO("trial " << t << " status " << static_cast<int>(r.status));
    if (r.status == PropStatus::kInfeasible) {
      CHECK(pts.empty());
    } else {
      for (const auto& p : pts) {
        for (int v = 0; v < n; ++v) {
          CHECK(p[v] >= b.lb[v] - 1e-9);
          CHECK(p[v] <= b.ub[v] + 1e-9);
        }
      }
      // replay reproduces the propagated box bit-exactly
      LocalBounds replayed = j.replay(m);
      CHECK(replayed.lb == b.lb);
      CHECK(replayed.ub == b.ub);
    }
  }
}

TEST_CASE("truncation after propagation restores the pre-branch box") {
  MipModel m = box_model({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}, {1, 1, 1});
  m.rows.push_back({{0, 1, 2}, {1.0, 1.0, 1.0}, 2.0, "sum"});
  LocalBounds b = LocalBounds::from_global(m);
  BoundJournal j(3);

  PropResult root = propagate_fixpoint(m, b, j, {}, {});
  CHECK(root.status == PropStatus::kNoChange);

  j.set_depth(1);
  j.apply(b, 0, false, 0.0, {ReasonKind::kBranching, -1}, {}, {});
  PropResult r = propagate_fixpoint(m, b, j, {}, {});
  CHECK(r.status == PropStatus::kTightened);
  CHECK(b.lb[1] == 1.0);
  CHECK(b.lb[2] == 1.0);

  j.truncate_to_depth(b, 0);
  CHECK(b.lb == std::vector<double>{0.0, 0.0, 0.0});
  CHECK(b.ub == std::vector<double>{1.0, 1.0, 1.0});
}

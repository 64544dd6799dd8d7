#include "confbb/generate.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "confbb/lp.hpp"
#include "confbb/mps.hpp"
#include "confbb/search.hpp"
#include "doctest.h"

using namespace confbb;

namespace {

std::string mps_text(const MipModel& m) { return write_mps(m); }

}  // namespace

TEST_CASE("family names round trip") {
  CHECK(family_from_string("markshare-like") == Family::kMarkshareLike);
  CHECK(family_from_string("bin-packing-infeasible") ==
        Family::kBinPackingInfeasible);
  CHECK(family_from_string("random-setcover") == Family::kRandomSetcover);
  CHECK(!family_from_string("knapsack").has_value());
  for (Family f : {Family::kMarkshareLike, Family::kBinPackingInfeasible,
                   Family::kRandomSetcover}) {
    CHECK(family_from_string(family_name(f)) == f);
    CHECK_THROWS_AS(generate_instance(f, 2, 1), std::invalid_argument);
  }
}

TEST_CASE("generation is deterministic in size and seed") {
  for (Family f : {Family::kMarkshareLike, Family::kBinPackingInfeasible,
                   Family::kRandomSetcover}) {
    MipModel a = generate_instance(f, 6, 42);
    MipModel b = generate_instance(f, 6, 42);
    CHECK(mps_text(a) == mps_text(b));
    CHECK(mps_text(a) != mps_text(generate_instance(f, 6, 43)));
    CHECK(mps_text(a) != mps_text(generate_instance(f, 7, 42)));

    // the writer must accept every generated model verbatim
    MipModel back = parse_mps_string(mps_text(a));
    CHECK(mps_text(back) == mps_text(a));
  }
}

TEST_CASE("markshare instances pair each knapsack row with its mirror") {
  MipModel m = generate_instance(Family::kMarkshareLike, 8, 1);
  CHECK(m.num_vars() == 8);
  REQUIRE(m.rows.size() == 2);
  for (int j = 0; j < 8; ++j) {
    CHECK(m.is_integer[j]);
    CHECK(m.lb[j] == 0.0);
    CHECK(m.ub[j] == 1.0);
  }
  // both rows cover every column; the second negates the first's weights
  REQUIRE(m.rows[0].size() == 8);
  REQUIRE(m.rows[1].size() == 8);
  for (int j = 0; j < 8; ++j) {
    CHECK(m.rows[0].index[j] == j);
    CHECK(m.rows[1].index[j] == j);
    double w = m.rows[0].value[j];
    CHECK(w >= 10.0);
    CHECK(w <= 99.0);
    CHECK(m.rows[1].value[j] == -w);
  }
  CHECK(m.rows[1].lhs <= -m.rows[0].lhs);
}

TEST_CASE("infeasible packing instances fool the relaxation but not search") {
  for (int size : {4, 5, 6}) {
    MipModel m = generate_instance(Family::kBinPackingInfeasible, size, 3);
    CHECK(m.num_vars() == 2 * size);

    // capacity row pair carries even item weights against an odd capacity,
    // so no integral assignment can use a bin exactly and one side overflows
    const SparseRow& capa = m.rows[m.rows.size() - 2];
    double cap = -capa.lhs;
    CHECK(std::fmod(cap, 2.0) == 1.0);
    for (double c : capa.value) {
      CHECK(std::fmod(-c, 2.0) == 0.0);
    }

    LocalBounds box = LocalBounds::from_global(m);
    SimplexSolver lp(m);
    LpResult rel = lp.solve(box, {});
    CHECK(rel.status == LpStatus::kOptimal);

    SearchSettings s;
    s.mode = LearnMode::kCombined;
    SolveResult r = solve(m, s);
    CHECK(r.status == SolveStatus::kInfeasible);
  }
}

TEST_CASE("set cover instances stay solvable and moderately dense") {
  MipModel m = generate_instance(Family::kRandomSetcover, 30, 5);
  CHECK(m.num_vars() == 30);
  CHECK(m.rows.size() == 30);
  int64_t nnz = 0;
  for (const SparseRow& r : m.rows) {
    CHECK(r.size() > 0);
    CHECK(r.lhs == 1.0);
    nnz += r.size();
  }
  double density = static_cast<double>(nnz) / (30.0 * 30.0);
  CHECK(density > 0.15);
  CHECK(density < 0.45);

  SearchSettings s;
  s.mode = LearnMode::kNone;
  SolveResult r = solve(m, s);
  CHECK(r.status == SolveStatus::kOptimal);
  CHECK(r.objective >= 1.0);
}

#include "confbb/constraints.hpp"
#include "doctest.h"

using namespace confbb;

namespace {
constexpr double kZ = 1e-9;

LocalBounds box(double lo, double hi) { return {{lo}, {hi}}; }
}  // namespace

TEST_CASE("non-strict lower literal against a bounds box") {
  BoundLiteral lit{0, true, 3.0, false};  // x >= 3
  CHECK(literal_falsified(lit, box(0.0, 2.0), kZ));
  CHECK_FALSE(literal_falsified(lit, box(0.0, 3.0), kZ));  // x = 3 satisfies
  CHECK(literal_entailed(lit, box(3.0, 5.0), kZ));
  CHECK_FALSE(literal_entailed(lit, box(2.5, 5.0), kZ));
  CHECK_FALSE(literal_falsified(lit, box(0.0, 5.0), kZ));  // undecided
}

TEST_CASE("strict lower literal flips the boundary point") {
  BoundLiteral lit{0, true, 3.0, true};  // x > 3
  CHECK(literal_falsified(lit, box(0.0, 3.0), kZ));  // sup = 3 cannot exceed 3
  CHECK_FALSE(literal_falsified(lit, box(0.0, 3.5), kZ));
  CHECK(literal_entailed(lit, box(3.5, 5.0), kZ));
  CHECK_FALSE(literal_entailed(lit, box(3.0, 5.0), kZ));
}

TEST_CASE("non-strict upper literal against a bounds box") {
  BoundLiteral lit{0, false, 2.0, false};  // x <= 2
  CHECK(literal_falsified(lit, box(3.0, 5.0), kZ));
  CHECK_FALSE(literal_falsified(lit, box(2.0, 5.0), kZ));
  CHECK(literal_entailed(lit, box(0.0, 2.0), kZ));
  CHECK_FALSE(literal_entailed(lit, box(0.0, 2.5), kZ));
}

TEST_CASE("strict upper literal flips the boundary point") {
  BoundLiteral lit{0, false, 2.0, true};  // x < 2
  CHECK(literal_falsified(lit, box(2.0, 5.0), kZ));
  CHECK_FALSE(literal_falsified(lit, box(1.5, 5.0), kZ));
  CHECK(literal_entailed(lit, box(0.0, 1.5), kZ));
  CHECK_FALSE(literal_entailed(lit, box(0.0, 2.0), kZ));
}

TEST_CASE("point evaluation matches the box tests at degenerate boxes") {
  for (bool is_lower : {true, false}) {
    for (bool strict : {true, false}) {
      BoundLiteral lit{0, is_lower, 1.0, strict};
      for (double x : {0.0, 1.0 - 1e-12, 1.0, 1.0 + 1e-12, 2.0}) {
        LocalBounds pt = box(x, x);
        CHECK(literal_holds_at(lit, x, kZ) ==
              literal_entailed(lit, pt, kZ));
        CHECK(literal_holds_at(lit, x, kZ) ==
              !literal_falsified(lit, pt, kZ));
      }
    }
  }
}

TEST_CASE("tolerance absorbs drift around the literal value") {
  BoundLiteral lit{0, true, 3.0, false};  // x >= 3
  CHECK_FALSE(literal_falsified(lit, box(0.0, 3.0 - 1e-12), kZ));
  CHECK(literal_entailed(lit, box(3.0 - 1e-12, 5.0), kZ));
}

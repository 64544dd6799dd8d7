#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "confbb/model.hpp"

namespace confbb {

// Infeasibility certificate for  {Ax >= b, lb' <= x <= ub'}  (A = model rows
// followed by extra rows).  With v_j = sum_i row_mult[i] * A[i][j]:
//   row_mult >= 0,
//   lb_mult = max(0, -v),  ub_mult = min(0, -v)   componentwise,
// and the certificate inequality
//   row_mult'b + lb_mult'lb' + ub_mult'ub' > 0
// is strictly positive, which is impossible for any x in the box satisfying
// the rows.  The inequality survives any positive rescaling of the ray.
struct FarkasRay {
  std::vector<double> row_mult;  // one per model row + extra row
  std::vector<double> lb_mult;   // >= 0, one per variable
  std::vector<double> ub_mult;   // <= 0, one per variable
};

struct FarkasCheck {
  bool valid = false;
  double margin = 0.0;         // normalized certificate value
  double worst_violation = 0.0;
  const char* what = "";       // failed condition, empty when valid
};

// Re-derive the multiplier identities and the certificate inequality from
// scratch; tolerances scale with the ray's magnitude so validity is
// invariant under positive rescaling.
FarkasCheck validate_farkas(const FarkasRay& ray, const MipModel& model,
                            std::span<const SparseRow> extra_rows,
                            const LocalBounds& bounds, double tol = 1e-7);

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kStalled };

struct LpResult {
  LpStatus status = LpStatus::kStalled;
  double objective = 0.0;
  std::vector<double> x;              // optimal: primal values (structural)
  std::vector<double> duals;          // optimal: row multipliers (model + extra)
  std::vector<double> reduced_costs;  // optimal: per structural variable
  std::optional<FarkasRay> farkas;    // infeasible
  std::vector<double> primal_ray;     // unbounded: improving recession direction
  std::vector<uint8_t> basis;         // optimal: warm-start token
  int iterations = 0;
};

// Bounded-variable primal simplex over one model; per call the bounds may
// shrink and extra >= rows may be appended (the objective-cutoff row).
// Phase 1 drives artificial infeasibility variables to zero; a positive
// phase-1 optimum yields the Farkas ray from the phase-1 duals.  Dense basis
// factorization with partial pivoting, refactorized every 50 pivots with
// product-form updates in between.  Most-negative-reduced-cost pricing,
// switching to lowest-index (Bland) after 100 consecutive degenerate pivots;
// 50000 iterations per call before giving up as kStalled.
class SimplexSolver {
 public:
  explicit SimplexSolver(const MipModel& model, Tolerances tols = {});

  LpResult solve(const LocalBounds& bounds,
                 std::span<const SparseRow> extra_rows,
                 const std::vector<uint8_t>* warm_basis = nullptr);

  // total pivots across calls (statistics)
  int64_t total_iterations() const { return total_iterations_; }

 private:
  const MipModel& model_;
  Tolerances tols_;
  // model columns cached once: (row, coef) pairs per structural variable
  std::vector<std::vector<std::pair<int, double>>> model_cols_;
  int64_t total_iterations_ = 0;
};

}  // namespace confbb

#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace confbb {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Numeric tolerances used across the solver. Kept in one place so every
// module agrees on what "zero" and "satisfied" mean.
struct Tolerances {
  double feasibility = 1e-6;  // constraint / bound satisfaction
  double zero = 1e-9;         // coefficient and multiplier cutoff
  double integrality = 1e-6;  // distance from nearest integer that counts as integral
  double deduction = 1e-7;    // minimal bound improvement worth applying
};

// One linear inequality  sum_k value[k] * x[index[k]]  >=  lhs.
// Also reused for aggregated proof rows and extra rows handed to the LP.
struct SparseRow {
  std::vector<int> index;
  std::vector<double> value;
  double lhs = 0.0;
  std::string name;

  int size() const { return static_cast<int>(index.size()); }
};

// A mixed integer program in normalized form:
//   min c'x  s.t.  a_i'x >= b_i for every row,  lb <= x <= ub,
//   x_j integral for j with integrality flag set.
// Maximization inputs and <=/= rows are normalized away by the MPS reader.
class MipModel {
 public:
  std::string name;
  std::string objective_name = "obj";

  std::vector<double> objective;
  double objective_offset = 0.0;
  // true when the input asked to maximize and the objective was negated
  bool objective_negated = false;

  std::vector<SparseRow> rows;
  std::vector<double> lb, ub;
  std::vector<char> is_integer;
  std::vector<std::string> var_names;

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  // lb > ub anywhere: the model is reported infeasible up front, never a crash
  bool trivially_infeasible(double tol = 1e-9) const {
    for (int j = 0; j < num_vars(); ++j)
      if (lb[j] > ub[j] + tol) return true;
    return false;
  }

  // c'x is integral for every mixed-integer feasible point: integral
  // coefficients supported on integer variables, used to pick the cutoff gap
  bool objective_always_integral() const;

  // objective value in the orientation of the original input file
  double original_objective(double minimized_value) const {
    double v = minimized_value + objective_offset;
    return objective_negated ? -v : v;
  }

  bool operator==(const MipModel& other) const;
};

// Per-node bound vectors; always satisfy  global lb <= lb, ub <= global ub.
struct LocalBounds {
  std::vector<double> lb, ub;

  static LocalBounds from_global(const MipModel& m) { return {m.lb, m.ub}; }
  int num_vars() const { return static_cast<int>(lb.size()); }
};

struct Assignment {
  std::vector<double> values;
};

struct RowViolation {
  int row = -1;
  double activity = 0.0;
  double lhs = 0.0;  // required lower bound on the activity
};

struct BoundViolation {
  int var = -1;
  bool lower = false;  // which side is violated
  double value = 0.0;
  double bound = 0.0;
};

struct IntegralityViolation {
  int var = -1;
  double value = 0.0;
};

struct SolutionReport {
  bool feasible = false;
  double objective = 0.0;  // c'x + offset, minimized orientation
  std::vector<RowViolation> row_violations;
  std::vector<BoundViolation> bound_violations;
  std::vector<IntegralityViolation> integrality_violations;
};

// Evaluate a full assignment against rows, bounds and integrality marks.
// Throws std::invalid_argument on dimension mismatch.
SolutionReport check_solution(const MipModel& model, const Assignment& point,
                              double tol = 1e-6);

double row_activity(const SparseRow& row, const std::vector<double>& x);

}  // namespace confbb

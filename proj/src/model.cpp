#include "confbb/model.hpp"

#include <cmath>
#include <stdexcept>

namespace confbb {

double row_activity(const SparseRow& row, const std::vector<double>& x) {
  double act = 0.0;
  for (int k = 0; k < row.size(); ++k) act += row.value[k] * x[row.index[k]];
  return act;
}

bool MipModel::objective_always_integral() const {
  for (int j = 0; j < num_vars(); ++j) {
    double c = objective[j];
    if (c == 0.0) continue;
    if (!is_integer[j]) return false;
    if (std::abs(c - std::round(c)) > 1e-9) return false;
  }
  return true;
}

bool MipModel::operator==(const MipModel& other) const {
  if (num_vars() != other.num_vars() || num_rows() != other.num_rows())
    return false;
  if (name != other.name || objective_name != other.objective_name)
    return false;
  if (objective != other.objective || objective_offset != other.objective_offset)
    return false;
  if (lb != other.lb || ub != other.ub || is_integer != other.is_integer)
    return false;
  if (var_names != other.var_names) return false;
  for (int i = 0; i < num_rows(); ++i) {
    const SparseRow& a = rows[i];
    const SparseRow& b = other.rows[i];
    if (a.index != b.index || a.value != b.value || a.lhs != b.lhs ||
        a.name != b.name)
      return false;
  }
  return true;
}

SolutionReport check_solution(const MipModel& model, const Assignment& point,
                              double tol) {
  if (static_cast<int>(point.values.size()) != model.num_vars())
    throw std::invalid_argument("check_solution: assignment has " +
                                std::to_string(point.values.size()) +
                                " values for " +
                                std::to_string(model.num_vars()) + " variables");
  SolutionReport rep;
  const std::vector<double>& x = point.values;

  double obj = model.objective_offset;
  for (int j = 0; j < model.num_vars(); ++j) obj += model.objective[j] * x[j];
  rep.objective = obj;

  for (int i = 0; i < model.num_rows(); ++i) {
    double act = row_activity(model.rows[i], x);
    if (act < model.rows[i].lhs - tol)
      rep.row_violations.push_back({i, act, model.rows[i].lhs});
  }
  for (int j = 0; j < model.num_vars(); ++j) {
    if (x[j] < model.lb[j] - tol)
      rep.bound_violations.push_back({j, true, x[j], model.lb[j]});
    if (x[j] > model.ub[j] + tol)
      rep.bound_violations.push_back({j, false, x[j], model.ub[j]});
    if (model.is_integer[j] && std::abs(x[j] - std::round(x[j])) > tol)
      rep.integrality_violations.push_back({j, x[j]});
  }
  rep.feasible = rep.row_violations.empty() && rep.bound_violations.empty() &&
                 rep.integrality_violations.empty();
  return rep;
}

}  // namespace confbb

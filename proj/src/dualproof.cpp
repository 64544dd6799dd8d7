#include "confbb/dualproof.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "confbb/propagate.hpp"

namespace confbb {

namespace {

constexpr double kCoefDrop = 1e-9;   // aggregated entries below this vanish
constexpr double kMargin = 1e-9;     // certificate slack that must remain

// certificate value gamma'b + lb_mult'lb + ub_mult'ub over a box; zero
// multipliers skip their term so infinite bounds stay harmless
double certificate_value(const FarkasRay& ray, const MipModel& model,
                         std::span<const SparseRow> extra_rows,
                         const LocalBounds& box) {
  double f = 0.0;
  int m = model.num_rows();
  for (int i = 0; i < m; ++i) f += ray.row_mult[i] * model.rows[i].lhs;
  for (size_t i = 0; i < extra_rows.size(); ++i)
    f += ray.row_mult[m + i] * extra_rows[i].lhs;
  for (int j = 0; j < model.num_vars(); ++j) {
    if (ray.lb_mult[j] != 0.0) f += ray.lb_mult[j] * box.lb[j];
    if (ray.ub_mult[j] != 0.0) f += ray.ub_mult[j] * box.ub[j];
  }
  return f;
}

}  // namespace

std::optional<ProofConstraint> build_proof_constraint(
    const FarkasRay& ray, const MipModel& model,
    std::span<const SparseRow> extra_rows, const LocalBounds& bounds,
    int cutoff_extra_index) {
  int n = model.num_vars();
  int m = model.num_rows();

  std::vector<double> v(n, 0.0);
  double lhs = 0.0;
  auto accumulate = [&](const SparseRow& row, double mult) {
    if (mult == 0.0) return;
    for (int k = 0; k < row.size(); ++k) v[row.index[k]] += mult * row.value[k];
    lhs += mult * row.lhs;
  };
  for (int i = 0; i < m; ++i) accumulate(model.rows[i], ray.row_mult[i]);
  for (size_t i = 0; i < extra_rows.size(); ++i)
    accumulate(extra_rows[i], ray.row_mult[m + i]);

  ProofConstraint proof;
  for (int j = 0; j < n; ++j) {
    if (std::abs(v[j]) < kCoefDrop) continue;
    proof.row.index.push_back(j);
    proof.row.value.push_back(v[j]);
  }
  proof.row.lhs = lhs;

  // dropping entries moves the maximal activity; the constraint is only
  // worth keeping if the box still violates it
  if (max_activity(proof.row, bounds) >= lhs - kMargin) return std::nullopt;

  if (cutoff_extra_index >= 0) {
    double scale = 1.0;
    for (double g : ray.row_mult) scale = std::max(scale, std::abs(g));
    proof.includes_cutoff =
        ray.row_mult[m + cutoff_extra_index] > kCoefDrop * scale;
  }
  return proof;
}

RelaxedBounds relax_local_bounds(const FarkasRay& ray, const MipModel& model,
                                 std::span<const SparseRow> extra_rows,
                                 const LocalBounds& local) {
  int n = model.num_vars();
  RelaxedBounds out;
  out.box = local;

  // bounds the certificate never touches are free to go
  for (int j = 0; j < n; ++j) {
    if (ray.lb_mult[j] == 0.0) out.box.lb[j] = model.lb[j];
    if (ray.ub_mult[j] == 0.0) out.box.ub[j] = model.ub[j];
  }

  struct Cand {
    double cost;  // certificate slack consumed by resetting the bound
    int var;
    bool is_lower;
  };
  std::vector<Cand> cands;
  for (int j = 0; j < n; ++j) {
    if (ray.lb_mult[j] > 0.0 && out.box.lb[j] > model.lb[j]) {
      double cost = ray.lb_mult[j] * (out.box.lb[j] - model.lb[j]);
      if (std::isfinite(cost)) cands.push_back({cost, j, true});
    }
    if (ray.ub_mult[j] < 0.0 && out.box.ub[j] < model.ub[j]) {
      double cost = -ray.ub_mult[j] * (model.ub[j] - out.box.ub[j]);
      if (std::isfinite(cost)) cands.push_back({cost, j, false});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    if (a.var != b.var) return a.var < b.var;
    return a.is_lower && !b.is_lower;
  });

  double margin = certificate_value(ray, model, extra_rows, out.box);
  for (const Cand& c : cands) {
    if (margin - c.cost <= kMargin) continue;
    margin -= c.cost;
    if (c.is_lower)
      out.box.lb[c.var] = model.lb[c.var];
    else
      out.box.ub[c.var] = model.ub[c.var];
  }

  for (int j = 0; j < n; ++j) {
    if (out.box.lb[j] > model.lb[j])
      out.reason.push_back({j, true, out.box.lb[j], false});
    if (out.box.ub[j] < model.ub[j])
      out.reason.push_back({j, false, out.box.ub[j], false});
  }
  return out;
}

InitialReason initial_reason(std::span<const BoundLiteral> surviving,
                             const BoundJournal& journal) {
  InitialReason out;
  for (const BoundLiteral& need : surviving) {
    int found = -1;
    for (int p = 0; p < journal.size(); ++p) {
      const BoundChange& e = journal[p];
      if (e.var != need.var || e.is_lower != need.is_lower) continue;
      bool tight = need.is_lower ? e.value >= need.value - 1e-9
                                 : e.value <= need.value + 1e-9;
      if (tight) {
        found = p;
        break;
      }
    }
    if (found < 0)
      throw std::logic_error("proof reason bound on variable " +
                             std::to_string(need.var) +
                             " has no journal support");
    out.positions.push_back(found);
  }
  return out;
}

}  // namespace confbb

#include "confbb/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <unordered_set>
#include <utility>

#include "confbb/dualproof.hpp"
#include "confbb/lp.hpp"
#include "confbb/propagate.hpp"

namespace confbb {
namespace {

struct PathStep {
  int var = -1;
  bool is_lower = false;
  double value = 0.0;
};

struct Node {
  int64_t id = 0;
  std::vector<PathStep> path;  // branchings from the root, depth = path size
  double bound = -kInf;        // parent LP objective
  std::vector<uint8_t> basis;  // parent basis token, warm-start hint
};

// non-pool learning modes keep every constraint; aging still runs
constexpr int kUnboundedCapacity = std::numeric_limits<int>::max();

class Search {
 public:
  Search(MipModel model, const SearchSettings& s)
      : m_(std::move(model)), s_(s), journal_(m_.num_vars()) {}

  SolveResult run();

 private:
  bool learning() const { return s_.mode != LearnMode::kNone; }
  bool wants_graph() const {
    return s_.mode == LearnMode::kConflict || s_.mode == LearnMode::kCombined ||
           s_.mode == LearnMode::kCombinedPool;
  }
  bool wants_proofs() const {
    return s_.mode == LearnMode::kDualray || s_.mode == LearnMode::kCombined ||
           s_.mode == LearnMode::kCombinedPool;
  }

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t0_).count();
  }

  void terminate(SolveStatus st) {
    result_.status = st;
    done_ = true;
    open_.clear();
  }

  // exhausted the improving region (stamped empty result) or the whole box
  void terminate_exhausted() {
    terminate(have_incumbent_ ? SolveStatus::kOptimal : SolveStatus::kInfeasible);
  }

  Node pop_node();
  void process(const Node& node);
  bool apply_pending_fixes();
  bool propagate_here();
  void run_analysis(const InitialReason& ir);
  void handle_infeasible_lp(const LpResult& res);
  void accept_incumbent(const LpResult& res);
  void refresh_cutoff();
  void branch_without_lp(const Node& node);
  void push_children(const Node& node, int var, double floor_val,
                     double ceil_val, double bound,
                     const std::vector<uint8_t>& basis);
  void store_conflict(ConflictConstraint c);
  void store_proof(ProofConstraint p);
  void pool_check();
  void age_update();
  void finish();

  MipModel m_;
  SearchSettings s_;
  BoundJournal journal_;
  LocalBounds bounds_;
  std::unique_ptr<ConflictPool> store_;
  std::unique_ptr<SimplexSolver> lp_;
  std::vector<Node> open_;
  std::vector<BoundLiteral> pending_fixes_;
  std::vector<SparseRow> extra_rows_;  // the cutoff row once an incumbent exists

  std::vector<double> incumbent_;
  double z_ = kInf;
  bool have_incumbent_ = false;
  double cutoff_bound_ = kInf;
  Stamp cur_stamp_{};
  bool obj_integral_ = false;

  int64_t next_node_id_ = 1;
  int64_t next_constraint_id_ = 1;
  int dfs_streak_ = 0;
  bool done_ = false;

  // per-node scratch
  std::unordered_set<int64_t> useful_c_, useful_p_;
  bool node_had_conflict_ = false;
  bool root_node_ = false;

  SolveResult result_;
  std::chrono::steady_clock::time_point t0_;
};

SolveResult Search::run() {
  t0_ = std::chrono::steady_clock::now();
  for (int j = 0; j < m_.num_vars(); ++j) {
    if (!m_.is_integer[j]) continue;
    if (std::isfinite(m_.lb[j]))
      m_.lb[j] = std::ceil(m_.lb[j] - s_.tols.integrality);
    if (std::isfinite(m_.ub[j]))
      m_.ub[j] = std::floor(m_.ub[j] + s_.tols.integrality);
  }
  if (m_.trivially_infeasible()) {
    result_.status = SolveStatus::kInfeasible;
    finish();
    return result_;
  }
  bounds_ = LocalBounds::from_global(m_);
  obj_integral_ = m_.objective_always_integral();
  if (learning())
    store_ = std::make_unique<ConflictPool>(
        s_.mode == LearnMode::kCombinedPool
            ? ConflictPool::capacity_for(m_.num_vars(), m_.num_rows())
            : kUnboundedCapacity);
  lp_ = std::make_unique<SimplexSolver>(m_, s_.tols);
  open_.push_back(Node{});

  while (!open_.empty() && !done_) {
    if (result_.stats.nodes >= s_.node_limit || elapsed() > s_.time_limit_s) {
      terminate(SolveStatus::kLimit);
      break;
    }
    Node node = pop_node();
    process(node);
  }
  if (!done_)
    result_.status =
        have_incumbent_ ? SolveStatus::kOptimal : SolveStatus::kInfeasible;
  finish();
  return result_;
}

Node Search::pop_node() {
  bool best = s_.node_selection == NodeSelection::kBestBound;
  if (s_.node_selection == NodeSelection::kHybrid) {
    if (dfs_streak_ >= 100) {
      best = true;
      dfs_streak_ = 0;
    } else {
      ++dfs_streak_;
    }
  }
  size_t pick = open_.size() - 1;
  if (best) {
    pick = 0;
    for (size_t i = 1; i < open_.size(); ++i) {
      const Node& a = open_[i];
      const Node& b = open_[pick];
      if (a.bound < b.bound || (a.bound == b.bound && a.id < b.id)) pick = i;
    }
  }
  Node n = std::move(open_[pick]);
  open_.erase(open_.begin() + static_cast<ptrdiff_t>(pick));
  return n;
}

void Search::process(const Node& node) {
  ++result_.stats.nodes;
  useful_c_.clear();
  useful_p_.clear();
  node_had_conflict_ = false;
  root_node_ = node.path.empty();

  if (have_incumbent_ && node.bound > cutoff_bound_ + 1e-9) return;

  journal_.truncate_to_depth(bounds_, 0);
  journal_.set_depth(0);
  if (!apply_pending_fixes()) return;

  for (int k = 0; k < static_cast<int>(node.path.size()); ++k) {
    const PathStep& st = node.path[k];
    journal_.set_depth(k + 1);
    if (st.is_lower) {
      if (st.value > bounds_.ub[st.var] + 1e-9) {
        age_update();  // branch crosses globally derived bounds, box empty
        return;
      }
      if (st.value > bounds_.lb[st.var] + 1e-9)
        journal_.apply(bounds_, st.var, true, st.value,
                       Reason{ReasonKind::kBranching, -1}, std::nullopt, {});
    } else {
      if (st.value < bounds_.lb[st.var] - 1e-9) {
        age_update();
        return;
      }
      if (st.value < bounds_.ub[st.var] - 1e-9)
        journal_.apply(bounds_, st.var, false, st.value,
                       Reason{ReasonKind::kBranching, -1}, std::nullopt, {});
    }
    if (!propagate_here()) {
      age_update();
      return;
    }
  }
  if (root_node_ && !propagate_here()) {
    age_update();
    return;
  }

  LpResult res = lp_->solve(bounds_, extra_rows_,
                            node.basis.empty() ? nullptr : &node.basis);
  ++result_.stats.lp_solves;
  result_.stats.lp_iterations += res.iterations;
  switch (res.status) {
    case LpStatus::kUnbounded:
      throw std::runtime_error("search requires a bounded LP relaxation");
    case LpStatus::kStalled:
      ++result_.stats.lp_stalls;
      branch_without_lp(node);
      age_update();
      return;
    case LpStatus::kInfeasible:
      ++result_.stats.infeasible_lps;
      handle_infeasible_lp(res);
      age_update();
      return;
    case LpStatus::kOptimal:
      break;
  }
  if (have_incumbent_ && res.objective > cutoff_bound_ + 1e-9) {
    age_update();
    return;
  }

  int branch_var = -1;
  double best_frac = s_.tols.integrality;
  for (int j = 0; j < m_.num_vars(); ++j) {
    if (!m_.is_integer[j]) continue;
    double f = std::fabs(res.x[j] - std::round(res.x[j]));
    if (f > best_frac) {
      best_frac = f;
      branch_var = j;
    }
  }
  if (branch_var < 0) {
    accept_incumbent(res);
    age_update();
    return;
  }
  double xv = res.x[branch_var];
  push_children(node, branch_var, std::floor(xv), std::ceil(xv), res.objective,
                res.basis);
  age_update();
}

void Search::push_children(const Node& node, int var, double floor_val,
                           double ceil_val, double bound,
                           const std::vector<uint8_t>& basis) {
  Node down, up;
  down.id = next_node_id_++;
  up.id = next_node_id_++;
  down.path = node.path;
  down.path.push_back({var, false, floor_val});
  up.path = node.path;
  up.path.push_back({var, true, ceil_val});
  down.bound = up.bound = bound;
  down.basis = basis;
  up.basis = basis;
  open_.push_back(std::move(up));
  open_.push_back(std::move(down));  // dfs dives on the floor side first
}

bool Search::apply_pending_fixes() {
  for (const BoundLiteral& f : pending_fixes_) {
    // strictness dropped: the closed bound keeps every admitted point
    if (f.is_lower) {
      if (f.value > bounds_.ub[f.var] + 1e-9) {
        pending_fixes_.clear();
        terminate_exhausted();
        return false;
      }
      if (f.value > bounds_.lb[f.var] + s_.tols.deduction)
        journal_.apply(bounds_, f.var, true, f.value,
                       Reason{ReasonKind::kConflictConstraint, -1},
                       std::nullopt, {});
    } else {
      if (f.value < bounds_.lb[f.var] - 1e-9) {
        pending_fixes_.clear();
        terminate_exhausted();
        return false;
      }
      if (f.value < bounds_.ub[f.var] - s_.tols.deduction)
        journal_.apply(bounds_, f.var, false, f.value,
                       Reason{ReasonKind::kConflictConstraint, -1},
                       std::nullopt, {});
    }
  }
  pending_fixes_.clear();
  return true;
}

bool Search::propagate_here() {
  PropagateInput in;
  in.use_stamped = journal_.current_depth() > 0;
  if (store_) {
    in.conflicts = store_->conflicts();
    in.proofs = store_->proofs();
  }
  PropResult pr = propagate_fixpoint(m_, bounds_, journal_, in, s_.tols);
  for (int64_t id : pr.useful_conflicts) useful_c_.insert(id);
  for (int64_t id : pr.useful_proofs) useful_p_.insert(id);
  result_.stats.conflict_deductions +=
      static_cast<int64_t>(pr.useful_conflicts.size());
  result_.stats.proof_deductions +=
      static_cast<int64_t>(pr.useful_proofs.size());
  if (pr.status != PropStatus::kInfeasible) return true;
  ++result_.stats.infeasible_props;
  if (wants_graph() && s_.conflict_source != ConflictSource::kLpOnly &&
      pr.conflict) {
    InitialReason ir{pr.conflict->positions, pr.conflict->stamp};
    run_analysis(ir);
  }
  return false;
}

void Search::run_analysis(const InitialReason& ir) {
  AnalysisResult ar = analyze_conflict(m_, journal_, ir, s_.cut_scheme, s_.tols);
  ++result_.stats.conflicts_analyzed;
  if (ar.proves_infeasible || ar.no_improving_solution) {
    terminate_exhausted();
    return;
  }
  for (const BoundLiteral& fix : ar.global_fixes) {
    pending_fixes_.push_back(fix);
    ++result_.stats.global_fixes;
  }
  for (ConflictConstraint& c : ar.constraints) {
    // capture ahead of the size filter so tests can audit discarded cuts too
    if (s_.capture_learned) result_.captured_conflicts.push_back(c);
    if (static_cast<double>(c.literals.size()) > 0.1 * m_.num_vars()) {
      ++result_.stats.discarded_oversize;
      continue;
    }
    c.id = next_constraint_id_++;
    store_conflict(std::move(c));
  }
}

void Search::handle_infeasible_lp(const LpResult& res) {
  if (!learning() || !res.farkas) return;
  const FarkasRay& ray = *res.farkas;
  int cutoff_idx = extra_rows_.empty() ? -1 : 0;
  auto built = build_proof_constraint(ray, m_, extra_rows_, bounds_, cutoff_idx);
  if (!built) {
    ++result_.stats.discarded_proofs;
    return;
  }
  ProofConstraint pc = std::move(*built);
  if (pc.includes_cutoff) pc.stamp = cur_stamp_;
  if (pc.row.size() == 0) {
    // empty inequality with positive lhs: nothing left in the global box,
    // or no improving point when the cutoff row fed the ray
    terminate_exhausted();
    return;
  }
  if (wants_proofs()) {
    ProofConstraint stored = pc;
    stored.id = next_constraint_id_++;
    store_proof(std::move(stored));
  }
  if (wants_graph() && s_.conflict_source != ConflictSource::kPropOnly) {
    RelaxedBounds relax = relax_local_bounds(ray, m_, extra_rows_, bounds_);
    int64_t before = 0;  // reason size had no bound been relaxed
    for (int j = 0; j < m_.num_vars(); ++j) {
      if (ray.lb_mult[j] > s_.tols.zero && bounds_.lb[j] > m_.lb[j] + s_.tols.zero)
        ++before;
      if (ray.ub_mult[j] < -s_.tols.zero && bounds_.ub[j] < m_.ub[j] - s_.tols.zero)
        ++before;
    }
    result_.stats.reason_literals_before += before;
    result_.stats.reason_literals_after +=
        static_cast<int64_t>(relax.reason.size());
    ++result_.stats.relaxation_runs;
    for (int j = 0; j < m_.num_vars(); ++j) {
      if (relax.box.lb[j] < bounds_.lb[j] - s_.tols.zero ||
          relax.box.ub[j] > bounds_.ub[j] + s_.tols.zero) {
        ++result_.stats.relaxations_with_slack;
        break;
      }
    }
    InitialReason ir = initial_reason(relax.reason, journal_);
    if (pc.includes_cutoff) ir.detector_stamp = cur_stamp_;
    run_analysis(ir);
  }
}

void Search::accept_incumbent(const LpResult& res) {
  std::vector<double> x = res.x;
  for (int j = 0; j < m_.num_vars(); ++j)
    if (m_.is_integer[j]) x[j] = std::round(x[j]);
  SolutionReport rep = check_solution(m_, Assignment{x}, s_.tols.feasibility);
  if (!rep.feasible) {
    rep = check_solution(m_, Assignment{res.x}, s_.tols.feasibility);
    if (!rep.feasible) {
      ++result_.stats.rejected_incumbents;
      return;
    }
    x = res.x;
  }
  double z = 0.0;
  for (int j = 0; j < m_.num_vars(); ++j) z += m_.objective[j] * x[j];
  if (have_incumbent_ && z >= z_ - 1e-9) return;
  incumbent_ = std::move(x);
  z_ = z;
  have_incumbent_ = true;
  refresh_cutoff();
  if (s_.mode == LearnMode::kCombinedPool && store_)
    store_->on_new_incumbent(z_);
}

void Search::refresh_cutoff() {
  if (obj_integral_ && std::fabs(z_ - std::round(z_)) <= s_.tols.integrality) {
    cutoff_bound_ = std::round(z_) - 1.0;
  } else {
    cutoff_bound_ = z_ - 1e-6 * std::max(1.0, std::fabs(z_));
  }
  cur_stamp_ = Stamp{z_, cutoff_bound_};
  SparseRow cut;
  cut.name = "cutoff";
  for (int j = 0; j < m_.num_vars(); ++j) {
    if (m_.objective[j] != 0.0) {
      cut.index.push_back(j);
      cut.value.push_back(-m_.objective[j]);
    }
  }
  cut.lhs = -cutoff_bound_;
  extra_rows_.assign(1, std::move(cut));
}

void Search::branch_without_lp(const Node& node) {
  int var = -1;
  for (int j = 0; j < m_.num_vars(); ++j) {
    if (m_.is_integer[j] && bounds_.ub[j] - bounds_.lb[j] > 0.5) {
      var = j;
      break;
    }
  }
  if (var < 0) {
    // every integer variable fixed yet the LP stalled; one cold retry
    LpResult res = lp_->solve(bounds_, extra_rows_, nullptr);
    ++result_.stats.lp_solves;
    result_.stats.lp_iterations += res.iterations;
    if (res.status == LpStatus::kOptimal) {
      if (!have_incumbent_ || res.objective <= cutoff_bound_ + 1e-9)
        accept_incumbent(res);
    } else if (res.status == LpStatus::kInfeasible) {
      ++result_.stats.infeasible_lps;
      handle_infeasible_lp(res);
    } else {
      terminate(SolveStatus::kLimit);
    }
    return;
  }
  double lo = bounds_.lb[var], hi = bounds_.ub[var];
  double mid;
  if (std::isfinite(lo) && std::isfinite(hi))
    mid = std::floor((lo + hi) / 2.0);
  else if (std::isfinite(lo))
    mid = lo;
  else if (std::isfinite(hi))
    mid = hi - 1.0;
  else
    mid = 0.0;
  push_children(node, var, mid, mid + 1.0, node.bound, {});
}

void Search::pool_check() {
  if (!node_had_conflict_) {
    store_->update_pass();
    node_had_conflict_ = true;
  }
}

void Search::store_conflict(ConflictConstraint c) {
  pool_check();
  ++result_.stats.conflict_constraints;
  store_->insert(std::move(c), nullptr);
}

void Search::store_proof(ProofConstraint p) {
  pool_check();
  if (s_.capture_learned) result_.captured_proofs.push_back(p);
  ++result_.stats.proof_constraints;
  store_->insert(std::move(p), nullptr);
}

void Search::age_update() {
  if (!store_) return;
  // one aging tick per node; the root consults only unstamped entries
  for (const ConflictConstraint* c : store_->conflicts()) {
    if (root_node_ && c->stamp) continue;
    store_->record_propagation(c->id, useful_c_.count(c->id) > 0);
  }
  for (const ProofConstraint* p : store_->proofs()) {
    if (root_node_ && p->stamp) continue;
    store_->record_propagation(p->id, useful_p_.count(p->id) > 0);
  }
}

void Search::finish() {
  if (have_incumbent_) {
    result_.incumbent = incumbent_;
    result_.objective = z_;
  }
  if (store_) result_.stats.pool = store_->stats();
  result_.stats.time_s = elapsed();
}

}  // namespace

SolveResult solve(const MipModel& model, const SearchSettings& settings) {
  Search search(model, settings);
  return search.run();
}

}  // namespace confbb

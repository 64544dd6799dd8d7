#include "confbb/lp.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace confbb {
namespace {

constexpr int kIterCap = 50000;        // pivots per solve before kStalled
constexpr int kRefactorEvery = 50;     // pivots between fresh factorizations
constexpr int kBlandAfterDegen = 100;  // degenerate streak that triggers Bland
constexpr double kPivTol = 1e-9;
constexpr double kDegenStep = 1e-10;

enum VStat : uint8_t { kBasic = 0, kAtLower = 1, kAtUpper = 2, kFreeNB = 3 };

double linf(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Dense LU with partial pivoting; solves with B and B'.
struct DenseLU {
  int n = 0;
  std::vector<double> a;  // row-major, holds combined L\U after factor
  std::vector<int> perm;
  bool ok = false;

  bool factor(std::vector<double> mat, int dim) {
    n = dim;
    a = std::move(mat);
    perm.resize(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    ok = true;
    for (int k = 0; k < n; ++k) {
      int p = k;
      double best = std::abs(a[k * n + k]);
      for (int i = k + 1; i < n; ++i) {
        double v = std::abs(a[i * n + k]);
        if (v > best) {
          best = v;
          p = i;
        }
      }
      if (best < 1e-12) {
        ok = false;
        return false;
      }
      if (p != k) {
        for (int j = 0; j < n; ++j) std::swap(a[p * n + j], a[k * n + j]);
        std::swap(perm[p], perm[k]);
      }
      double piv = a[k * n + k];
      for (int i = k + 1; i < n; ++i) {
        double l = a[i * n + k] / piv;
        a[i * n + k] = l;
        if (l != 0.0)
          for (int j = k + 1; j < n; ++j) a[i * n + j] -= l * a[k * n + j];
      }
    }
    return true;
  }

  // B x = v, in place
  void solve(std::vector<double>& v) const {
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) y[i] = v[perm[i]];
    for (int i = 1; i < n; ++i) {
      double s = y[i];
      for (int j = 0; j < i; ++j) s -= a[i * n + j] * y[j];
      y[i] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
      double s = y[i];
      for (int j = i + 1; j < n; ++j) s -= a[i * n + j] * y[j];
      y[i] = s / a[i * n + i];
    }
    v = std::move(y);
  }

  // B' x = v, in place
  void solve_t(std::vector<double>& v) const {
    std::vector<double> z(n);
    for (int i = 0; i < n; ++i) {
      double s = v[i];
      for (int j = 0; j < i; ++j) s -= a[j * n + i] * z[j];
      z[i] = s / a[i * n + i];
    }
    for (int i = n - 1; i >= 0; --i) {
      double s = z[i];
      for (int j = i + 1; j < n; ++j) s -= a[j * n + i] * z[j];
      z[i] = s;
    }
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[perm[i]] = z[i];
    v = std::move(x);
  }
};

struct Worker {
  const MipModel& model;
  const Tolerances& tols;
  const std::vector<std::vector<std::pair<int, double>>>& mcols;
  std::span<const SparseRow> extra;

  int n, m, nx, M;  // structurals, model rows, extra rows, total rows
  std::vector<std::vector<std::pair<int, double>>> xcols;  // extra-row entries
  std::vector<double> b;

  int nart = 0;
  std::vector<int> art_row;  // artificial ordinal -> row

  std::vector<double> lo, hi, cost, val;
  std::vector<uint8_t> stat;
  std::vector<int> basic;

  DenseLU lu;
  struct Eta {
    int r;
    std::vector<double> w;
  };
  std::vector<Eta> etas;
  bool need_factor = true;
  int iters = 0;
  int degen_streak = 0;
  int phase = 1;
  double cost_scale = 1.0;

  Worker(const MipModel& mdl, const Tolerances& t,
         const std::vector<std::vector<std::pair<int, double>>>& cols,
         std::span<const SparseRow> ex)
      : model(mdl), tols(t), mcols(cols), extra(ex) {
    n = model.num_vars();
    m = model.num_rows();
    nx = static_cast<int>(extra.size());
    M = m + nx;
    xcols.resize(n);
    b.resize(M);
    for (int i = 0; i < m; ++i) b[i] = model.rows[i].lhs;
    for (int e = 0; e < nx; ++e) {
      b[m + e] = extra[e].lhs;
      for (int k = 0; k < extra[e].size(); ++k)
        xcols[extra[e].index[k]].push_back({m + e, extra[e].value[k]});
    }
  }

  int nvars() const { return n + M + nart; }
  bool is_artificial(int j) const { return j >= n + M; }

  template <class F>
  void for_col(int j, F&& f) const {
    if (j < n) {
      for (auto& [r, v] : mcols[j]) f(r, v);
      for (auto& [r, v] : xcols[j]) f(r, v);
    } else if (j < n + M) {
      f(j - n, -1.0);
    } else {
      f(art_row[j - n - M], 1.0);
    }
  }

  double dot_col(const std::vector<double>& y, int j) const {
    double s = 0.0;
    for_col(j, [&](int r, double v) { s += y[r] * v; });
    return s;
  }

  void dense_col(int j, std::vector<double>& out) const {
    std::fill(out.begin(), out.end(), 0.0);
    for_col(j, [&](int r, double v) { out[r] += v; });
  }

  bool factorize() {
    std::vector<double> B(static_cast<size_t>(M) * M, 0.0);
    for (int k = 0; k < M; ++k)
      for_col(basic[k], [&](int r, double v) { B[r * M + k] = v; });
    etas.clear();
    if (!lu.factor(std::move(B), M)) return false;
    need_factor = false;
    return true;
  }

  void ftran(std::vector<double>& v) const {
    lu.solve(v);
    for (const Eta& e : etas) {
      double t = v[e.r] / e.w[e.r];
      for (int i = 0; i < M; ++i) v[i] -= e.w[i] * t;
      v[e.r] = t;
    }
  }

  void btran(std::vector<double>& v) const {
    for (auto it = etas.rbegin(); it != etas.rend(); ++it) {
      const Eta& e = *it;
      double s = v[e.r];
      for (int i = 0; i < M; ++i)
        if (i != e.r) s -= e.w[i] * v[i];
      v[e.r] = s / e.w[e.r];
    }
    lu.solve_t(v);
  }

  // recompute basic values from nonbasic ones (run after refactorization)
  void compute_basics() {
    std::vector<double> rhs = b;
    for (int j = 0; j < nvars(); ++j) {
      if (stat[j] == kBasic || val[j] == 0.0) continue;
      for_col(j, [&](int r, double v) { rhs[r] -= v * val[j]; });
    }
    ftran(rhs);
    for (int k = 0; k < M; ++k) val[basic[k]] = rhs[k];
  }

  void set_phase_costs() {
    cost.assign(nvars(), 0.0);
    if (phase == 1) {
      for (int a = 0; a < nart; ++a) cost[n + M + a] = 1.0;
      cost_scale = 1.0;
    } else {
      for (int j = 0; j < n; ++j) cost[j] = model.objective[j];
      cost_scale = std::max(1.0, linf(model.objective));
    }
  }

  std::vector<double> duals() const {
    std::vector<double> y(M, 0.0);
    for (int k = 0; k < M; ++k) y[k] = cost[basic[k]];
    std::vector<double> yy = y;
    // y is indexed by basis position; btran wants row space.  Positions and
    // rows coincide for the coefficient vector c_B here.
    btran(yy);
    return yy;
  }

  // entering variable; returns -1 when the current phase is optimal
  int price(const std::vector<double>& y, bool bland, int* sig_out) const {
    double etol = tols.zero * std::max(1.0, cost_scale);
    int best = -1, best_sig = 0;
    double best_score = etol;
    for (int j = 0; j < nvars(); ++j) {
      uint8_t s = stat[j];
      if (s == kBasic) continue;
      if (hi[j] - lo[j] <= 0.0) continue;  // fixed, never priced
      double d = cost[j] - dot_col(y, j);
      int sig = 0;
      if (s == kAtLower) {
        if (d < -etol) sig = 1;
      } else if (s == kAtUpper) {
        if (d > etol) sig = -1;
      } else {  // free at zero
        if (d < -etol)
          sig = 1;
        else if (d > etol)
          sig = -1;
      }
      if (sig == 0) continue;
      if (bland) {
        *sig_out = sig;
        return j;  // lowest index wins
      }
      if (std::abs(d) > best_score) {
        best_score = std::abs(d);
        best = j;
        best_sig = sig;
      }
    }
    *sig_out = best_sig;
    return best;
  }

  enum class Step { kPivot, kFlip, kUnbounded };

  struct Ratio {
    Step step = Step::kUnbounded;
    double t = 0.0;
    int row = -1;
    bool at_upper = false;
  };

  Ratio ratio_test(int q, int sig, const std::vector<double>& w,
                   bool bland) const {
    Ratio r;
    double t_best = kInf;
    bool flip = false;
    if (hi[q] < kInf && lo[q] > -kInf) {
      t_best = hi[q] - lo[q];
      flip = true;
    }
    int row = -1;
    bool at_upper = false;
    for (int i = 0; i < M; ++i) {
      double delta = -sig * w[i];
      if (std::abs(delta) <= kPivTol) continue;
      int bj = basic[i];
      double ti;
      bool up;
      if (delta > 0.0) {
        if (hi[bj] >= kInf) continue;
        ti = (hi[bj] - val[bj]) / delta;
        up = true;
      } else {
        if (lo[bj] <= -kInf) continue;
        ti = (val[bj] - lo[bj]) / (-delta);
        up = false;
      }
      if (ti < 0.0) ti = 0.0;
      bool take = false;
      if (ti < t_best - 1e-10) {
        take = true;
      } else if (ti <= t_best + 1e-10 && row >= 0) {
        // near-tie: favor the numerically larger pivot, or lowest variable
        // index when Bland's rule is in charge
        take = bland ? basic[i] < basic[row]
                     : std::abs(w[i]) > std::abs(w[row]);
      } else if (ti <= t_best + 1e-10 && flip && row < 0 && ti < t_best) {
        take = true;
      }
      if (take) {
        t_best = std::min(t_best, ti);
        row = i;
        at_upper = up;
        flip = false;
      }
    }
    if (row < 0 && flip) {
      r.step = Step::kFlip;
      r.t = t_best;
      return r;
    }
    if (row < 0) {
      r.step = Step::kUnbounded;
      return r;
    }
    r.step = Step::kPivot;
    r.t = t_best;
    r.row = row;
    r.at_upper = at_upper;
    return r;
  }

  enum class PhaseEnd { kOptimal, kUnbounded, kStalled };

  PhaseEnd run_phase() {
    std::vector<double> w(M);
    for (;;) {
      if (iters >= kIterCap) return PhaseEnd::kStalled;
      if (need_factor || static_cast<int>(etas.size()) >= kRefactorEvery) {
        if (!factorize()) return PhaseEnd::kStalled;
        compute_basics();
      }
      std::vector<double> y = duals();
      bool bland = degen_streak >= kBlandAfterDegen;
      int sig = 0;
      int q = price(y, bland, &sig);
      if (q < 0) return PhaseEnd::kOptimal;

      dense_col(q, w);
      ftran(w);
      Ratio r = ratio_test(q, sig, w, bland);
      ++iters;

      if (r.step == Step::kUnbounded) {
        unbounded_q_ = q;
        unbounded_sig_ = sig;
        unbounded_w_ = w;
        return PhaseEnd::kUnbounded;
      }
      if (r.step == Step::kFlip) {
        val[q] = (stat[q] == kAtLower) ? hi[q] : lo[q];
        stat[q] = (stat[q] == kAtLower) ? kAtUpper : kAtLower;
        for (int i = 0; i < M; ++i) val[basic[i]] -= sig * r.t * w[i];
        degen_streak = (r.t <= kDegenStep) ? degen_streak + 1 : 0;
        continue;
      }

      // basis change
      double t = r.t;
      val[q] = (stat[q] == kFreeNB ? 0.0
                : stat[q] == kAtLower ? lo[q]
                                      : hi[q]) +
               sig * t;
      for (int i = 0; i < M; ++i) val[basic[i]] -= sig * t * w[i];
      int leave = basic[r.row];
      val[leave] = r.at_upper ? hi[leave] : lo[leave];
      stat[leave] = r.at_upper ? kAtUpper : kAtLower;
      if (is_artificial(leave)) lo[leave] = hi[leave] = 0.0;  // never returns
      stat[q] = kBasic;
      basic[r.row] = q;
      etas.push_back({r.row, w});
      degen_streak = (t <= kDegenStep) ? degen_streak + 1 : 0;
    }
  }

  // --- cold start: nonbasics at finite bounds, surplus/artificial basis ---
  void setup_cold(const LocalBounds& bounds) {
    nart = 0;
    art_row.clear();
    lo.assign(n + M, 0.0);
    hi.assign(n + M, kInf);
    for (int j = 0; j < n; ++j) {
      lo[j] = bounds.lb[j];
      hi[j] = bounds.ub[j];
    }
    val.assign(n + M, 0.0);
    stat.assign(n + M, kAtLower);
    for (int j = 0; j < n; ++j) {
      if (lo[j] > -kInf) {
        stat[j] = kAtLower;
        val[j] = lo[j];
      } else if (hi[j] < kInf) {
        stat[j] = kAtUpper;
        val[j] = hi[j];
      } else {
        stat[j] = kFreeNB;
        val[j] = 0.0;
      }
    }
    std::vector<double> act(M, 0.0);
    for (int j = 0; j < n; ++j)
      if (val[j] != 0.0)
        for_col(j, [&](int r, double v) { act[r] += v * val[j]; });

    basic.assign(M, -1);
    for (int i = 0; i < M; ++i) {
      double s = act[i] - b[i];
      if (s >= 0.0) {
        basic[i] = n + i;  // surplus carries the slack
        stat[n + i] = kBasic;
        val[n + i] = s;
      } else {
        // violated row: surplus stays at zero, artificial absorbs the gap
        ++nart;
        art_row.push_back(i);
        stat[n + i] = kAtLower;
        val[n + i] = 0.0;
      }
    }
    lo.resize(n + M + nart, 0.0);
    hi.resize(n + M + nart, kInf);
    val.resize(n + M + nart, 0.0);
    stat.resize(n + M + nart, kBasic);
    for (int a = 0; a < nart; ++a) {
      int i = art_row[a];
      basic[i] = n + M + a;
      val[n + M + a] = b[i] - act[i];
      lo[n + M + a] = 0.0;
      hi[n + M + a] = kInf;
    }
    need_factor = true;
    phase = 1;
    set_phase_costs();
  }

  // --- warm start from a prior basis token; false = fall back to cold ---
  bool setup_warm(const LocalBounds& bounds, const std::vector<uint8_t>& tok) {
    if (static_cast<int>(tok.size()) != n + M) return false;
    nart = 0;
    art_row.clear();
    lo.assign(n + M, 0.0);
    hi.assign(n + M, kInf);
    for (int j = 0; j < n; ++j) {
      lo[j] = bounds.lb[j];
      hi[j] = bounds.ub[j];
    }
    basic.clear();
    stat = tok;
    val.assign(n + M, 0.0);
    for (int j = 0; j < n + M; ++j) {
      switch (tok[j]) {
        case kBasic:
          basic.push_back(j);
          break;
        case kAtLower:
          if (lo[j] <= -kInf) return false;
          val[j] = lo[j];
          break;
        case kAtUpper:
          if (hi[j] >= kInf) return false;
          val[j] = hi[j];
          break;
        case kFreeNB:
          val[j] = 0.0;
          break;
        default:
          return false;
      }
    }
    if (static_cast<int>(basic.size()) != M) return false;
    need_factor = true;
    if (!factorize()) return false;
    compute_basics();
    double slack = 10.0 * tols.feasibility;
    for (int k = 0; k < M; ++k) {
      int j = basic[k];
      if (val[j] < lo[j] - slack || val[j] > hi[j] + slack) return false;
    }
    phase = 2;
    set_phase_costs();
    return true;
  }

  double phase1_value() const {
    double s = 0.0;
    for (int a = 0; a < nart; ++a) s += val[n + M + a];
    return s;
  }

  FarkasRay extract_ray() {
    FarkasRay ray;
    std::vector<double> y(M, 0.0);
    for (int k = 0; k < M; ++k) y[k] = cost[basic[k]];
    btran(y);
    double gscale = std::max(1.0, linf(y));
    for (double& g : y)
      if (g < 0.0 && g > -1e-7 * gscale) g = 0.0;
    ray.row_mult = y;
    ray.lb_mult.assign(n, 0.0);
    ray.ub_mult.assign(n, 0.0);
    double vtol = tols.zero * gscale;
    for (int j = 0; j < n; ++j) {
      double v = dot_col(y, j);
      if (std::abs(v) <= vtol) continue;
      if (v < 0.0)
        ray.lb_mult[j] = -v;
      else
        ray.ub_mult[j] = -v;
    }
    return ray;
  }

  int unbounded_q_ = -1;
  int unbounded_sig_ = 0;
  std::vector<double> unbounded_w_;
};

}  // namespace

SimplexSolver::SimplexSolver(const MipModel& model, Tolerances tols)
    : model_(model), tols_(tols) {
  model_cols_.resize(model.num_vars());
  for (int i = 0; i < model.num_rows(); ++i) {
    const SparseRow& r = model.rows[i];
    for (int k = 0; k < r.size(); ++k)
      model_cols_[r.index[k]].push_back({i, r.value[k]});
  }
}

LpResult SimplexSolver::solve(const LocalBounds& bounds,
                              std::span<const SparseRow> extra_rows,
                              const std::vector<uint8_t>* warm_basis) {
  if (bounds.num_vars() != model_.num_vars())
    throw std::invalid_argument("solve: bounds dimension mismatch");
  for (int j = 0; j < model_.num_vars(); ++j)
    if (bounds.lb[j] > bounds.ub[j] + tols_.zero)
      throw std::invalid_argument("solve: crossed bounds on variable " +
                                  std::to_string(j));

  Worker w(model_, tols_, model_cols_, extra_rows);
  LpResult res;

  bool warmed = warm_basis && !warm_basis->empty() &&
                w.setup_warm(bounds, *warm_basis);
  if (!warmed) {
    w.setup_cold(bounds);
    Worker::PhaseEnd e1 = w.run_phase();
    total_iterations_ += w.iters;
    res.iterations = w.iters;
    if (e1 == Worker::PhaseEnd::kStalled ||
        e1 == Worker::PhaseEnd::kUnbounded) {
      // phase 1 is bounded below by zero, so unbounded means numerics gave out
      res.status = LpStatus::kStalled;
      return res;
    }
    double bscale = std::max(1.0, linf(w.b));
    if (w.phase1_value() > tols_.feasibility * bscale) {
      res.status = LpStatus::kInfeasible;
      res.farkas = w.extract_ray();
      return res;
    }
    // feasible: retire the artificials and switch to the real objective
    for (int a = 0; a < w.nart; ++a) {
      int j = w.n + w.M + a;
      w.lo[j] = w.hi[j] = 0.0;
      if (w.stat[j] != kBasic && std::abs(w.val[j]) > 0.0) w.val[j] = 0.0;
    }
    w.phase = 2;
    w.set_phase_costs();
  }

  int before = w.iters;
  Worker::PhaseEnd e2 = w.run_phase();
  total_iterations_ += w.iters - before;
  res.iterations = w.iters;

  if (e2 == Worker::PhaseEnd::kStalled) {
    res.status = LpStatus::kStalled;
    return res;
  }
  if (e2 == Worker::PhaseEnd::kUnbounded) {
    res.status = LpStatus::kUnbounded;
    res.primal_ray.assign(w.n, 0.0);
    if (w.unbounded_q_ < w.n) res.primal_ray[w.unbounded_q_] += w.unbounded_sig_;
    for (int i = 0; i < w.M; ++i) {
      int bj = w.basic[i];
      if (bj < w.n) res.primal_ray[bj] -= w.unbounded_sig_ * w.unbounded_w_[i];
    }
    return res;
  }

  res.status = LpStatus::kOptimal;
  res.x.assign(w.val.begin(), w.val.begin() + w.n);
  res.objective = 0.0;
  for (int j = 0; j < w.n; ++j) res.objective += model_.objective[j] * res.x[j];
  res.duals = w.duals();
  res.reduced_costs.resize(w.n);
  for (int j = 0; j < w.n; ++j)
    res.reduced_costs[j] = model_.objective[j] - w.dot_col(res.duals, j);

  bool artificial_basic = false;
  for (int k = 0; k < w.M; ++k)
    if (w.is_artificial(w.basic[k])) artificial_basic = true;
  if (!artificial_basic)
    res.basis.assign(w.stat.begin(), w.stat.begin() + w.n + w.M);
  return res;
}

FarkasCheck validate_farkas(const FarkasRay& ray, const MipModel& model,
                            std::span<const SparseRow> extra_rows,
                            const LocalBounds& bounds, double tol) {
  FarkasCheck out;
  int n = model.num_vars();
  int M = model.num_rows() + static_cast<int>(extra_rows.size());
  if (static_cast<int>(ray.row_mult.size()) != M ||
      static_cast<int>(ray.lb_mult.size()) != n ||
      static_cast<int>(ray.ub_mult.size()) != n) {
    out.what = "dimension mismatch";
    return out;
  }
  double scale = std::max({1.0, linf(ray.row_mult), linf(ray.lb_mult),
                           linf(ray.ub_mult)});
  double eps = tol * scale;

  for (int i = 0; i < M; ++i)
    if (ray.row_mult[i] < -eps) {
      out.what = "negative row multiplier";
      out.worst_violation = -ray.row_mult[i];
      return out;
    }

  // v = A'gamma recomputed from scratch
  std::vector<double> v(n, 0.0);
  auto add_row = [&](const SparseRow& r, double g) {
    if (g == 0.0) return;
    for (int k = 0; k < r.size(); ++k) v[r.index[k]] += g * r.value[k];
  };
  for (int i = 0; i < model.num_rows(); ++i)
    add_row(model.rows[i], ray.row_mult[i]);
  for (size_t e = 0; e < extra_rows.size(); ++e)
    add_row(extra_rows[e], ray.row_mult[model.num_rows() + e]);

  double certificate = 0.0;
  for (int i = 0; i < M; ++i) {
    double bi = i < model.num_rows() ? model.rows[i].lhs
                                     : extra_rows[i - model.num_rows()].lhs;
    certificate += ray.row_mult[i] * bi;
  }

  for (int j = 0; j < n; ++j) {
    double want_lb = std::max(0.0, -v[j]);
    double want_ub = std::min(0.0, -v[j]);
    double dl = std::abs(ray.lb_mult[j] - want_lb);
    double du = std::abs(ray.ub_mult[j] - want_ub);
    if (dl > eps || du > eps) {
      out.what = "bound multipliers disagree with aggregated coefficients";
      out.worst_violation = std::max(dl, du);
      return out;
    }
    if (ray.lb_mult[j] > eps) {
      if (bounds.lb[j] <= -kInf) {
        out.what = "positive lower multiplier on infinite bound";
        out.worst_violation = ray.lb_mult[j];
        return out;
      }
      certificate += ray.lb_mult[j] * bounds.lb[j];
    }
    if (ray.ub_mult[j] < -eps) {
      if (bounds.ub[j] >= kInf) {
        out.what = "negative upper multiplier on infinite bound";
        out.worst_violation = -ray.ub_mult[j];
        return out;
      }
      certificate += ray.ub_mult[j] * bounds.ub[j];
    }
  }

  out.margin = certificate / scale;
  if (out.margin <= tol) {
    out.what = "certificate inequality not strictly positive";
    out.worst_violation = -out.margin;
    return out;
  }
  out.valid = true;
  out.what = "";
  return out;
}

}  // namespace confbb

#pragma once

// Brute-force reference implementations the tests compare the solver
// against.  Deliberately naive: tiny dense linear algebra, exhaustive
// enumeration, no shortcuts shared with the code under test.

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "confbb/model.hpp"

namespace oracle {

using confbb::kInf;
using confbb::LocalBounds;
using confbb::MipModel;
using confbb::SparseRow;

// deterministic bounded integer draw (tests only need repeatability)
inline int rng_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<uint64_t>(hi - lo + 1));
}

inline double rng_pick(std::mt19937_64& rng, const std::vector<double>& v) {
  return v[rng() % v.size()];
}

inline std::optional<std::vector<double>> gauss_solve(std::vector<double> a,
                                                      std::vector<double> b,
                                                      int n) {
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(a[i * n + k]) > std::abs(a[p * n + k])) p = i;
    if (std::abs(a[p * n + k]) < 1e-10) return std::nullopt;
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(a[p * n + j], a[k * n + j]);
      std::swap(b[p], b[k]);
    }
    for (int i = k + 1; i < n; ++i) {
      double f = a[i * n + k] / a[k * n + k];
      if (f == 0.0) continue;
      for (int j = k; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= a[i * n + j] * x[j];
    x[i] = s / a[i * n + i];
  }
  return x;
}

struct LinearConstraint {
  std::vector<double> coef;  // dense length n
  double rhs = 0.0;          // coef'x >= rhs
};

inline std::vector<LinearConstraint> dense_constraints(
    const MipModel& m, std::span<const SparseRow> extra) {
  std::vector<LinearConstraint> out;
  auto add = [&](const SparseRow& r) {
    LinearConstraint c;
    c.coef.assign(m.num_vars(), 0.0);
    for (int k = 0; k < r.size(); ++k) c.coef[r.index[k]] = r.value[k];
    c.rhs = r.lhs;
    out.push_back(std::move(c));
  };
  for (const SparseRow& r : m.rows) add(r);
  for (const SparseRow& r : extra) add(r);
  return out;
}

// All vertices of {rows >= rhs, lb <= x <= ub}: every full-rank choice of n
// active constraints, solved and filtered for feasibility.  Only meaningful
// for compact boxes, which all oracle-checked test models use.
inline std::vector<std::vector<double>> enumerate_vertices(
    const MipModel& m, const LocalBounds& bounds,
    std::span<const SparseRow> extra = {}) {
  int n = m.num_vars();
  std::vector<LinearConstraint> cons = dense_constraints(m, extra);
  // bound constraints appended as candidate active rows
  struct Cand {
    std::vector<double> coef;
    double rhs;
  };
  std::vector<Cand> cand;
  for (const LinearConstraint& c : cons) cand.push_back({c.coef, c.rhs});
  for (int j = 0; j < n; ++j) {
    if (bounds.lb[j] > -kInf) {
      std::vector<double> e(n, 0.0);
      e[j] = 1.0;
      cand.push_back({e, bounds.lb[j]});
    }
    if (bounds.ub[j] < kInf) {
      std::vector<double> e(n, 0.0);
      e[j] = 1.0;
      cand.push_back({e, bounds.ub[j]});
    }
  }
  int nc = static_cast<int>(cand.size());
  std::vector<std::vector<double>> verts;
  if (nc < n) return verts;

  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  auto feasible = [&](const std::vector<double>& x) {
    for (int j = 0; j < n; ++j)
      if (x[j] < bounds.lb[j] - 1e-7 || x[j] > bounds.ub[j] + 1e-7)
        return false;
    for (const LinearConstraint& c : cons) {
      double act = 0.0;
      for (int j = 0; j < n; ++j) act += c.coef[j] * x[j];
      if (act < c.rhs - 1e-7) return false;
    }
    return true;
  };
  auto push_unique = [&](const std::vector<double>& x) {
    for (const auto& v : verts) {
      double d = 0.0;
      for (int j = 0; j < n; ++j) d = std::max(d, std::abs(v[j] - x[j]));
      if (d < 1e-7) return;
    }
    verts.push_back(x);
  };
  for (;;) {
    std::vector<double> a(static_cast<size_t>(n) * n);
    std::vector<double> b(n);
    for (int r = 0; r < n; ++r) {
      for (int j = 0; j < n; ++j) a[r * n + j] = cand[idx[r]].coef[j];
      b[r] = cand[idx[r]].rhs;
    }
    if (auto x = gauss_solve(std::move(a), std::move(b), n))
      if (feasible(*x)) push_unique(*x);
    // next combination
    int i = n - 1;
    while (i >= 0 && idx[i] == nc - n + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int k = i + 1; k < n; ++k) idx[k] = idx[k - 1] + 1;
  }
  return verts;
}

struct LpOracle {
  bool feasible = false;
  double objective = 0.0;
  std::vector<double> argmin;
};

// Reference LP optimum by vertex enumeration; requires a compact box.
inline LpOracle lp_oracle(const MipModel& m, const LocalBounds& bounds,
                          std::span<const SparseRow> extra = {}) {
  LpOracle out;
  auto verts = enumerate_vertices(m, bounds, extra);
  if (verts.empty()) return out;
  out.feasible = true;
  out.objective = kInf;
  for (const auto& v : verts) {
    double obj = 0.0;
    for (int j = 0; j < m.num_vars(); ++j) obj += m.objective[j] * v[j];
    if (obj < out.objective) {
      out.objective = obj;
      out.argmin = v;
    }
  }
  return out;
}

// Every integer point of the box satisfying all rows.  Pure-integer models
// with small finite boxes only.
inline std::vector<std::vector<double>> enumerate_integer_points(
    const MipModel& m, const LocalBounds& bounds) {
  int n = m.num_vars();
  std::vector<std::vector<double>> pts;
  std::vector<double> cur(n, 0.0);
  auto rows_ok = [&]() {
    for (const SparseRow& r : m.rows) {
      double act = 0.0;
      for (int k = 0; k < r.size(); ++k)
        act += r.value[k] * cur[r.index[k]];
      if (act < r.lhs - 1e-9) return false;
    }
    return true;
  };
  std::vector<long> lo(n), hi(n);
  for (int j = 0; j < n; ++j) {
    lo[j] = static_cast<long>(std::ceil(bounds.lb[j] - 1e-9));
    hi[j] = static_cast<long>(std::floor(bounds.ub[j] + 1e-9));
    if (lo[j] > hi[j]) return pts;
  }
  std::vector<long> v(lo.begin(), lo.end());
  for (;;) {
    for (int j = 0; j < n; ++j) cur[j] = static_cast<double>(v[j]);
    if (rows_ok()) pts.push_back(cur);
    int j = 0;
    while (j < n && v[j] == hi[j]) {
      v[j] = lo[j];
      ++j;
    }
    if (j == n) break;
    ++v[j];
  }
  return pts;
}

struct MipOracle {
  bool feasible = false;
  double objective = 0.0;
  std::vector<double> argmin;
};

inline MipOracle mip_oracle(const MipModel& m, const LocalBounds& bounds) {
  MipOracle out;
  for (const auto& p : enumerate_integer_points(m, bounds)) {
    double obj = 0.0;
    for (int j = 0; j < m.num_vars(); ++j) obj += m.objective[j] * p[j];
    if (!out.feasible || obj < out.objective) {
      out.feasible = true;
      out.objective = obj;
      out.argmin = p;
    }
  }
  return out;
}

}  // namespace oracle

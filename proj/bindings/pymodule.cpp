#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "confbb/generate.hpp"
#include "confbb/lp.hpp"
#include "confbb/mps.hpp"
#include "confbb/search.hpp"
#include "confbb/stats.hpp"

namespace py = pybind11;
using namespace confbb;

namespace {

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    default:
      return "limit";
  }
}

const char* lp_status_name(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    default:
      return "stalled";
  }
}

template <typename T>
T named(const std::map<std::string, T>& names, const std::string& key,
        const char* what) {
  auto it = names.find(key);
  if (it == names.end())
    throw py::value_error(std::string("unknown ") + what + ": " + key);
  return it->second;
}

const std::map<std::string, LearnMode> kModeNames = {
    {"none", LearnMode::kNone},
    {"conflict", LearnMode::kConflict},
    {"dualray", LearnMode::kDualray},
    {"combined", LearnMode::kCombined},
    {"combined-pool", LearnMode::kCombinedPool}};

const std::map<std::string, ConflictSource> kSourceNames = {
    {"both", ConflictSource::kBoth},
    {"prop-only", ConflictSource::kPropOnly},
    {"lp-only", ConflictSource::kLpOnly}};

const std::map<std::string, NodeSelection> kSelectionNames = {
    {"dfs", NodeSelection::kDfs},
    {"best-bound", NodeSelection::kBestBound},
    {"hybrid", NodeSelection::kHybrid}};

py::dict stats_dict(const SearchStats& st) {
  py::dict d;
  d["nodes"] = st.nodes;
  d["lp_solves"] = st.lp_solves;
  d["lp_iterations"] = st.lp_iterations;
  d["lp_stalls"] = st.lp_stalls;
  d["infeasible_lps"] = st.infeasible_lps;
  d["infeasible_props"] = st.infeasible_props;
  d["conflicts_analyzed"] = st.conflicts_analyzed;
  d["conflict_constraints"] = st.conflict_constraints;
  d["proof_constraints"] = st.proof_constraints;
  d["global_fixes"] = st.global_fixes;
  d["conflict_deductions"] = st.conflict_deductions;
  d["proof_deductions"] = st.proof_deductions;
  d["discarded_proofs"] = st.discarded_proofs;
  d["discarded_oversize"] = st.discarded_oversize;
  d["rejected_incumbents"] = st.rejected_incumbents;
  d["reason_literals_before"] = st.reason_literals_before;
  d["reason_literals_after"] = st.reason_literals_after;
  d["relaxation_runs"] = st.relaxation_runs;
  d["relaxations_with_slack"] = st.relaxations_with_slack;
  d["pool_inserted"] = st.pool.inserted;
  d["pool_evicted"] = st.pool.evicted;
  d["pool_age_deleted"] = st.pool.age_deleted;
  d["pool_incumbent_deleted"] = st.pool.incumbent_deleted;
  d["time_s"] = st.time_s;
  return d;
}

struct PySolveResult {
  std::string status;
  py::object objective;  // float or None
  std::vector<double> incumbent;
  py::dict stats;
};

PySolveResult run_solve(const MipModel& m, const std::string& mode,
                        const std::string& conflict_source,
                        const std::string& node_selection, double time_limit,
                        int64_t node_limit, uint64_t seed) {
  SearchSettings s;
  s.mode = named(kModeNames, mode, "mode");
  s.conflict_source = named(kSourceNames, conflict_source, "conflict source");
  s.node_selection = named(kSelectionNames, node_selection, "node selection");
  s.time_limit_s = time_limit;
  s.node_limit = node_limit;
  s.seed = seed;
  SolveResult r = solve(m, s);
  PySolveResult out;
  out.status = status_name(r.status);
  out.objective = r.incumbent.empty()
                      ? py::object(py::none())
                      : py::cast(m.original_objective(r.objective));
  out.incumbent = r.incumbent;
  out.stats = stats_dict(r.stats);
  return out;
}

py::dict run_solve_lp(const MipModel& m) {
  SimplexSolver lp(m);
  LpResult r = lp.solve(LocalBounds::from_global(m), {});
  py::dict d;
  d["status"] = lp_status_name(r.status);
  if (r.status == LpStatus::kOptimal) {
    d["objective"] = m.original_objective(r.objective);
    d["x"] = r.x;
  } else {
    d["objective"] = py::none();
    d["x"] = py::list();
  }
  d["iterations"] = r.iterations;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "LP based branch and bound with conflict graph and dual ray learning";

  py::class_<MipModel>(m, "Model")
      .def_readonly("name", &MipModel::name)
      .def_readonly("objective", &MipModel::objective)
      .def_readonly("lb", &MipModel::lb)
      .def_readonly("ub", &MipModel::ub)
      .def_property_readonly(
          "is_integer",
          [](const MipModel& mm) {
            std::vector<bool> v(mm.is_integer.begin(), mm.is_integer.end());
            return v;
          })
      .def_property_readonly("num_vars", &MipModel::num_vars)
      .def_property_readonly("num_rows", &MipModel::num_rows)
      .def("__repr__", [](const MipModel& mm) {
        std::ostringstream os;
        os << "<Model '" << mm.name << "' " << mm.num_vars() << " vars, "
           << mm.rows.size() << " rows>";
        return os.str();
      });

  py::class_<PySolveResult>(m, "SolveResult")
      .def_readonly("status", &PySolveResult::status)
      .def_readonly("objective", &PySolveResult::objective)
      .def_readonly("incumbent", &PySolveResult::incumbent)
      .def_readonly("stats", &PySolveResult::stats)
      .def("__repr__", [](const PySolveResult& r) {
        std::ostringstream os;
        os << "<SolveResult " << r.status;
        if (!r.objective.is_none())
          os << " objective=" << py::cast<double>(r.objective);
        os << ">";
        return os.str();
      });

  m.def("parse_mps", &parse_mps_string, py::arg("text"),
        "Parse an MPS model from a string.");
  m.def("parse_mps_file", &parse_mps_file, py::arg("path"),
        "Parse an MPS model from a file.");
  m.def("write_mps", &write_mps, py::arg("model"),
        "Render a model in normalized MPS form.");
  m.def("write_mps_file", &write_mps_file, py::arg("model"), py::arg("path"),
        "Write a model to an MPS file.");

  m.def(
      "generate_instance",
      [](const std::string& family, int size, uint64_t seed) {
        auto f = family_from_string(family);
        if (!f) throw py::value_error("unknown family: " + family);
        return generate_instance(*f, size, seed);
      },
      py::arg("family"), py::arg("size"), py::arg("seed") = 1,
      "Generate a benchmark instance (markshare-like, "
      "bin-packing-infeasible, or random-setcover).");

  m.def("solve", &run_solve, py::arg("model"), py::arg("mode") = "combined",
        py::arg("conflict_source") = "both", py::arg("node_selection") = "dfs",
        py::arg("time_limit") = 60.0, py::arg("node_limit") = 100000,
        py::arg("seed") = 0,
        "Solve a model by branch and bound; mode picks what is learned from "
        "infeasible subproblems.");

  m.def("solve_lp", &run_solve_lp, py::arg("model"),
        "Solve the LP relaxation over the global bounds.");

  m.def(
      "check_solution",
      [](const MipModel& mm, const std::vector<double>& x, double tol) {
        SolutionReport rep = check_solution(mm, Assignment{x}, tol);
        py::dict d;
        d["feasible"] = rep.feasible;
        // the report's objective already carries the offset
        d["objective"] =
            mm.objective_negated ? -rep.objective : rep.objective;
        d["violations"] = rep.row_violations.size() +
                          rep.bound_violations.size() +
                          rep.integrality_violations.size();
        return d;
      },
      py::arg("model"), py::arg("x"), py::arg("tol") = 1e-6,
      "Check a point against rows, bounds, and integrality.");

  m.def(
      "shifted_geomean",
      [](const std::vector<double>& v, double shift) {
        return shifted_geomean(v, shift);
      },
      py::arg("values"), py::arg("shift"),
      "Shifted geometric mean exp(mean(log(v + s))) - s.");
}

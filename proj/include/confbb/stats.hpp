#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace confbb {

// aggregation shifts used for benchmark tables
constexpr double kNodeShift = 100.0;
constexpr double kTimeShift = 10.0;

// (prod(v_i + s))^(1/n) - s, computed in the log domain.  Values must be
// nonnegative and the shift positive; empty input is an error.
double shifted_geomean(std::span<const double> values, double shift);

// One benchmark run.  status is "optimal", "infeasible" or "limit".
struct RunRecord {
  std::string instance;
  std::string setting;
  uint64_t seed = 0;
  std::string status;
  int64_t nodes = 0;
  double time_s = 0.0;
  int64_t conflicts_analyzed = 0;
  int64_t conflict_constraints = 0;
  int64_t proof_constraints = 0;
  int64_t conflict_deductions = 0;
  int64_t proof_deductions = 0;
  int64_t pool_evictions = 0;
  int64_t incumbent_deletions = 0;
};

extern const char kCsvHeader[];

void write_csv(std::ostream& out, std::span<const RunRecord> records);
// Throws std::invalid_argument on a missing/mismatched header or a malformed
// row.
std::vector<RunRecord> read_csv(std::istream& in);

struct SettingSummary {
  std::string setting;
  int records = 0;   // runs on kept instances
  int finished = 0;  // of those, runs that did not hit a limit
  double nodes_sgm = 0.0;
  double time_sgm = 0.0;
  double node_ratio = 1.0;  // vs the base setting, > 1 means more nodes
  double time_ratio = 1.0;
};

struct Summary {
  int units_total = 0;  // distinct (instance, seed) pairs seen
  int units_kept = 0;   // pairs surviving the filters
  std::vector<SettingSummary> settings;  // sorted by setting name
};

// Filter each (instance, seed) pair, then aggregate per setting:
//   (i)   some setting needed at least 100 nodes,
//   (ii)  some setting finished (status not "limit"),
//   (iii) some setting analyzed more than 100 infeasibilities.
// Shifted geomeans of nodes/time per setting over the kept pairs, plus ratios
// against the base setting.  Throws std::invalid_argument when the base
// setting has no records on the kept pairs.
Summary summarize(std::span<const RunRecord> records,
                  const std::string& base = "conflict");

}  // namespace confbb

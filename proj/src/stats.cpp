#include "confbb/stats.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace confbb {

double shifted_geomean(std::span<const double> values, double shift) {
  if (values.empty())
    throw std::invalid_argument("shifted_geomean of an empty array");
  if (shift <= 0.0) throw std::invalid_argument("shift must be positive");
  double acc = 0.0;
  for (double v : values) {
    if (v < 0.0) throw std::invalid_argument("values must be nonnegative");
    acc += std::log(v + shift);
  }
  return std::exp(acc / static_cast<double>(values.size())) - shift;
}

const char kCsvHeader[] =
    "instance,setting,seed,status,nodes,time_s,conflicts_analyzed,"
    "conflict_constraints,proof_constraints,conflict_deductions,"
    "proof_deductions,pool_evictions,incumbent_deletions";

void write_csv(std::ostream& out, std::span<const RunRecord> records) {
  out << kCsvHeader << "\n";
  for (const RunRecord& r : records) {
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(6);
    line << r.instance << ',' << r.setting << ',' << r.seed << ',' << r.status
         << ',' << r.nodes << ',' << r.time_s << ',' << r.conflicts_analyzed
         << ',' << r.conflict_constraints << ',' << r.proof_constraints << ','
         << r.conflict_deductions << ',' << r.proof_deductions << ','
         << r.pool_evictions << ',' << r.incumbent_deletions;
    out << line.str() << "\n";
  }
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::vector<RunRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("empty results file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader)
    throw std::invalid_argument("unexpected results header: " + line);
  std::vector<RunRecord> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto f = split_line(line);
    if (f.size() != 13)
      throw std::invalid_argument("results line " + std::to_string(lineno) +
                                  ": expected 13 fields, got " +
                                  std::to_string(f.size()));
    RunRecord r;
    try {
      r.instance = f[0];
      r.setting = f[1];
      r.seed = std::stoull(f[2]);
      r.status = f[3];
      r.nodes = std::stoll(f[4]);
      r.time_s = std::stod(f[5]);
      r.conflicts_analyzed = std::stoll(f[6]);
      r.conflict_constraints = std::stoll(f[7]);
      r.proof_constraints = std::stoll(f[8]);
      r.conflict_deductions = std::stoll(f[9]);
      r.proof_deductions = std::stoll(f[10]);
      r.pool_evictions = std::stoll(f[11]);
      r.incumbent_deletions = std::stoll(f[12]);
    } catch (const std::exception&) {
      throw std::invalid_argument("results line " + std::to_string(lineno) +
                                  ": malformed number");
    }
    out.push_back(std::move(r));
  }
  return out;
}

Summary summarize(std::span<const RunRecord> records, const std::string& base) {
  struct Unit {
    int64_t max_nodes = 0;
    int64_t max_analyzed = 0;
    bool any_finished = false;
    std::vector<const RunRecord*> runs;
  };
  std::map<std::string, Unit> units;
  for (const RunRecord& r : records) {
    Unit& u = units[r.instance + "#" + std::to_string(r.seed)];
    u.max_nodes = std::max(u.max_nodes, r.nodes);
    u.max_analyzed = std::max(u.max_analyzed, r.conflicts_analyzed);
    u.any_finished = u.any_finished || r.status != "limit";
    u.runs.push_back(&r);
  }

  Summary s;
  s.units_total = static_cast<int>(units.size());
  struct Acc {
    std::vector<double> nodes, time;
    int finished = 0;
  };
  std::map<std::string, Acc> per_setting;
  for (const auto& [key, u] : units) {
    (void)key;
    if (u.max_nodes < 100 || !u.any_finished || u.max_analyzed <= 100) continue;
    ++s.units_kept;
    for (const RunRecord* r : u.runs) {
      Acc& a = per_setting[r->setting];
      a.nodes.push_back(static_cast<double>(r->nodes));
      a.time.push_back(r->time_s);
      if (r->status != "limit") ++a.finished;
    }
  }
  if (s.units_kept == 0) return s;
  if (per_setting.find(base) == per_setting.end())
    throw std::invalid_argument("base setting '" + base +
                                "' has no runs on the kept instances");
  const Acc& b = per_setting.at(base);
  double base_nodes = shifted_geomean(b.nodes, kNodeShift);
  double base_time = shifted_geomean(b.time, kTimeShift);
  for (const auto& [name, a] : per_setting) {
    SettingSummary row;
    row.setting = name;
    row.records = static_cast<int>(a.nodes.size());
    row.finished = a.finished;
    row.nodes_sgm = shifted_geomean(a.nodes, kNodeShift);
    row.time_sgm = shifted_geomean(a.time, kTimeShift);
    row.node_ratio = base_nodes > 0.0 ? row.nodes_sgm / base_nodes : 1.0;
    row.time_ratio = base_time > 0.0 ? row.time_sgm / base_time : 1.0;
    s.settings.push_back(std::move(row));
  }
  return s;
}

}  // namespace confbb

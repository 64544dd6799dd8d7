#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "confbb/generate.hpp"
#include "confbb/mps.hpp"
#include "confbb/search.hpp"
#include "confbb/stats.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace confbb;

namespace {

constexpr int kStatsSchemaVersion = 1;

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

template <typename M>
std::string name_of(const M& names, typename M::mapped_type v) {
  for (const auto& [k, x] : names)
    if (x == v) return k;
  return "?";
}

// settings label for CSV rows; ablations append to the mode name so the
// default run of each mode keeps its plain name
std::string setting_label(const SearchSettings& s) {
  std::string label = name_of(kModeNames, s.mode);
  if (s.conflict_source != ConflictSource::kBoth)
    label += "+" + name_of(kSourceNames, s.conflict_source);
  if (s.node_selection != NodeSelection::kDfs)
    label += "+" + name_of(kSelectionNames, s.node_selection);
  return label;
}

RunRecord to_record(const std::string& instance, const SearchSettings& s,
                    const SolveResult& r) {
  RunRecord rec;
  rec.instance = instance;
  rec.setting = setting_label(s);
  rec.seed = s.seed;
  rec.status = status_name(r.status);
  rec.nodes = r.stats.nodes;
  rec.time_s = r.stats.time_s;
  rec.conflicts_analyzed = r.stats.conflicts_analyzed;
  rec.conflict_constraints = r.stats.conflict_constraints;
  rec.proof_constraints = r.stats.proof_constraints;
  rec.conflict_deductions = r.stats.conflict_deductions;
  rec.proof_deductions = r.stats.proof_deductions;
  rec.pool_evictions = r.stats.pool.evicted;
  rec.incumbent_deletions = r.stats.pool.incumbent_deleted;
  return rec;
}

// stats files carry a schema version; fields only ever get added, existing
// runs are kept verbatim and new runs are appended
void append_stats_json(const std::string& path, const nlohmann::json& run) {
  nlohmann::json doc;
  if (fs::exists(path)) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    in >> doc;
    if (!doc.is_object() || !doc.contains("schema_version") ||
        !doc["schema_version"].is_number_integer() || !doc.contains("runs") ||
        !doc["runs"].is_array())
      throw std::runtime_error(path + ": not a stats file");
    if (doc["schema_version"].get<int>() > kStatsSchemaVersion)
      throw std::runtime_error(path + ": written by a newer schema");
  } else {
    doc["schema_version"] = kStatsSchemaVersion;
    doc["runs"] = nlohmann::json::array();
  }
  doc["runs"].push_back(run);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << doc.dump(2) << "\n";
}

nlohmann::json run_json(const std::string& instance, const SearchSettings& s,
                        const MipModel& model, const SolveResult& r) {
  const SearchStats& st = r.stats;
  nlohmann::json j{
      {"instance", instance},
      {"setting", setting_label(s)},
      {"seed", s.seed},
      {"status", status_name(r.status)},
      {"nodes", st.nodes},
      {"time_s", st.time_s},
      {"lp_solves", st.lp_solves},
      {"lp_iterations", st.lp_iterations},
      {"lp_stalls", st.lp_stalls},
      {"infeasible_lps", st.infeasible_lps},
      {"infeasible_props", st.infeasible_props},
      {"conflicts_analyzed", st.conflicts_analyzed},
      {"conflict_constraints", st.conflict_constraints},
      {"proof_constraints", st.proof_constraints},
      {"global_fixes", st.global_fixes},
      {"conflict_deductions", st.conflict_deductions},
      {"proof_deductions", st.proof_deductions},
      {"discarded_proofs", st.discarded_proofs},
      {"discarded_oversize", st.discarded_oversize},
      {"rejected_incumbents", st.rejected_incumbents},
      {"reason_literals_before", st.reason_literals_before},
      {"reason_literals_after", st.reason_literals_after},
      {"relaxation_runs", st.relaxation_runs},
      {"pool_inserted", st.pool.inserted},
      {"pool_evicted", st.pool.evicted},
      {"pool_age_deleted", st.pool.age_deleted},
      {"pool_incumbent_deleted", st.pool.incumbent_deleted},
  };
  if (r.incumbent.empty())
    j["objective"] = nullptr;
  else
    j["objective"] = model.original_objective(r.objective);
  return j;
}

void print_stats_block(std::ostream& os, const SearchStats& st) {
  os << "  lp solves            " << st.lp_solves << " (" << st.lp_iterations
     << " iterations, " << st.lp_stalls << " stalls)\n"
     << "  infeasible           " << st.infeasible_lps << " lp, "
     << st.infeasible_props << " propagation\n"
     << "  conflicts analyzed   " << st.conflicts_analyzed << "\n"
     << "  conflict constraints " << st.conflict_constraints << " (oversize "
     << st.discarded_oversize << " discarded)\n"
     << "  proof constraints    " << st.proof_constraints << " (invariant "
     << st.discarded_proofs << " discarded)\n"
     << "  deductions           " << st.conflict_deductions << " conflict, "
     << st.proof_deductions << " proof\n"
     << "  global fixes         " << st.global_fixes << "\n"
     << "  reason literals      " << st.reason_literals_before << " -> "
     << st.reason_literals_after << " over " << st.relaxation_runs
     << " relaxations\n"
     << "  pool                 " << st.pool.inserted << " inserted, "
     << st.pool.evicted << " evicted, " << st.pool.age_deleted << " aged out, "
     << st.pool.incumbent_deleted << " incumbent-deleted\n";
}

int cmd_solve(const std::string& file, const SearchSettings& settings,
              const std::string& stats_json) {
  MipModel model = parse_mps_file(file);
  SolveResult r = solve(model, settings);
  std::cout << "instance   " << file << "\n"
            << "setting    " << setting_label(settings) << "\n"
            << "status     " << status_name(r.status) << "\n";
  if (r.incumbent.empty())
    std::cout << "objective  -\n";
  else
    std::cout << "objective  " << std::setprecision(10)
              << model.original_objective(r.objective) << "\n";
  std::cout << "nodes      " << r.stats.nodes << "\n"
            << "time       " << std::fixed << std::setprecision(3)
            << r.stats.time_s << " s\n";
  std::cout.unsetf(std::ios::fixed);
  print_stats_block(std::cout, r.stats);
  if (!stats_json.empty())
    append_stats_json(stats_json, run_json(file, settings, model, r));
  return 0;
}

int cmd_generate(const std::string& family, int size, uint64_t seed,
                 const std::string& out) {
  auto f = family_from_string(family);
  if (!f) throw std::runtime_error("unknown family: " + family);
  MipModel m = generate_instance(*f, size, seed);
  write_mps_file(m, out);
  std::cout << out << ": " << m.num_vars() << " vars, " << m.rows.size()
            << " rows\n";
  return 0;
}

struct BenchTask {
  fs::path file;
  SearchSettings settings;
};

int cmd_bench(const std::string& dir, const std::vector<std::string>& modes,
              const std::vector<uint64_t>& seeds, const SearchSettings& base,
              const std::string& out, int jobs) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".mps")
      files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw std::runtime_error("no .mps files in " + dir);

  std::vector<BenchTask> tasks;
  for (const auto& f : files)
    for (const auto& mode : modes)
      for (uint64_t seed : seeds) {
        SearchSettings s = base;
        auto it = kModeNames.find(mode);
        if (it == kModeNames.end())
          throw std::runtime_error("unknown mode: " + mode);
        s.mode = it->second;
        s.seed = seed;
        tasks.push_back({f, s});
      }

  // fixed result slots; workers share only the task counter
  std::vector<RunRecord> records(tasks.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < tasks.size();
         i = next.fetch_add(1)) {
      MipModel model = parse_mps_file(tasks[i].file.string());
      SolveResult r = solve(model, tasks[i].settings);
      records[i] = to_record(tasks[i].file.filename().string(),
                             tasks[i].settings, r);
    }
  };
  jobs = std::max(1, jobs);
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::ofstream os(out);
  if (!os) throw std::runtime_error("cannot write " + out);
  write_csv(os, records);
  std::cout << out << ": " << records.size() << " runs over " << files.size()
            << " instances\n";
  return 0;
}

int cmd_summarize(const std::string& file, const std::string& base) {
  std::ifstream is(file);
  if (!is) throw std::runtime_error("cannot read " + file);
  auto records = read_csv(is);
  Summary s = summarize(records, base);
  std::cout << "units kept " << s.units_kept << " of " << s.units_total
            << "  (>=100 nodes, some setting finished, >100 infeasibilities "
               "analyzed)\n";
  if (s.units_kept == 0) return 0;
  std::cout << std::left << std::setw(22) << "setting" << std::right
            << std::setw(6) << "runs" << std::setw(8) << "solved"
            << std::setw(12) << "nodes" << std::setw(10) << "time"
            << std::setw(8) << "n_Q" << std::setw(8) << "t_Q" << "\n";
  for (const SettingSummary& row : s.settings) {
    std::cout << std::left << std::setw(22) << row.setting << std::right
              << std::setw(6) << row.records << std::setw(8) << row.finished
              << std::setw(12) << std::fixed << std::setprecision(1)
              << row.nodes_sgm << std::setw(10) << std::setprecision(2)
              << row.time_sgm << std::setw(8) << std::setprecision(2)
              << row.node_ratio << std::setw(8) << row.time_ratio << "\n";
    std::cout.unsetf(std::ios::fixed);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LP branch and bound with conflict and dual ray learning"};
  app.require_subcommand(1);

  std::string file, out, stats_json, family, base = "conflict";
  std::string modes_csv = "conflict";
  std::string seeds_csv = "0";
  int size = 8;
  int jobs = 1;
  uint64_t gen_seed = 1;
  SearchSettings settings;

  auto add_search_flags = [&](CLI::App* c) {
    c->add_option("--mode", settings.mode, "learning mode")
        ->transform(CLI::CheckedTransformer(kModeNames));
    c->add_option("--conflict-source", settings.conflict_source,
                  "events fed to conflict graph analysis")
        ->transform(CLI::CheckedTransformer(kSourceNames));
    c->add_option("--node-selection", settings.node_selection,
                  "node selection rule")
        ->transform(CLI::CheckedTransformer(kSelectionNames));
    c->add_option("--time-limit", settings.time_limit_s, "seconds per solve");
    c->add_option("--node-limit", settings.node_limit, "nodes per solve");
  };

  CLI::App* sv = app.add_subcommand("solve", "solve one MPS instance");
  sv->add_option("file", file, "MPS file")->required();
  add_search_flags(sv);
  sv->add_option("--seed", settings.seed, "run bookkeeping seed");
  sv->add_option("--stats-json", stats_json,
                 "append the full statistics block to this JSON file");

  CLI::App* bn = app.add_subcommand("bench", "solve every instance in a dir");
  bn->add_option("dir", file, "directory of .mps files")->required();
  bn->add_option("--modes", modes_csv, "comma separated learning modes");
  bn->add_option("--seeds", seeds_csv, "comma separated bookkeeping seeds");
  add_search_flags(bn);
  bn->add_option("--out", out, "CSV output path")->required();
  bn->add_option("--jobs", jobs, "worker threads");

  CLI::App* gn = app.add_subcommand("generate", "write a generated instance");
  gn->add_option("family", family,
                 "markshare-like | bin-packing-infeasible | random-setcover")
      ->required();
  gn->add_option("--size", size, "instance size parameter");
  gn->add_option("--seed", gen_seed, "generator seed");
  gn->add_option("--out", out, "MPS output path")->required();

  CLI::App* sm = app.add_subcommand("summarize", "aggregate a bench CSV");
  sm->add_option("file", file, "CSV from bench")->required();
  sm->add_option("--base", base, "setting the ratios compare against");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sv->parsed()) return cmd_solve(file, settings, stats_json);
    if (gn->parsed()) return cmd_generate(family, size, gen_seed, out);
    if (sm->parsed()) return cmd_summarize(file, base);
    if (bn->parsed()) {
      std::vector<std::string> modes;
      for (auto& piece : CLI::detail::split(modes_csv, ','))
        if (!piece.empty()) modes.push_back(piece);
      std::vector<uint64_t> seeds;
      for (auto& piece : CLI::detail::split(seeds_csv, ','))
        if (!piece.empty()) seeds.push_back(std::stoull(piece));
      return cmd_bench(file, modes, seeds, settings, out, jobs);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

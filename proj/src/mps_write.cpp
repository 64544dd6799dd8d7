#include <cstdio>
#include <fstream>
#include <sstream>

#include "confbb/mps.hpp"

namespace confbb {
namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string write_mps(const MipModel& model) {
  std::ostringstream out;
  out << "NAME          " << model.name << "\n";
  out << "ROWS\n";
  out << " N  " << model.objective_name << "\n";
  for (const SparseRow& r : model.rows) out << " G  " << r.name << "\n";

  // transpose rows into per-column entry lists
  int n = model.num_vars();
  std::vector<std::vector<std::pair<int, double>>> col(n);
  for (int i = 0; i < model.num_rows(); ++i) {
    const SparseRow& r = model.rows[i];
    for (int k = 0; k < r.size(); ++k)
      col[r.index[k]].push_back({i, r.value[k]});
  }

  out << "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  for (int j = 0; j < n; ++j) {
    if (model.is_integer[j] && !in_int) {
      out << "    M" << marker++ << "  'MARKER'  'INTORG'\n";
      in_int = true;
    } else if (!model.is_integer[j] && in_int) {
      out << "    M" << marker++ << "  'MARKER'  'INTEND'\n";
      in_int = false;
    }
    // objective entry always written so every column is declared
    out << "    " << model.var_names[j] << "  " << model.objective_name << "  "
        << num(model.objective[j]) << "\n";
    for (auto& [row, v] : col[j])
      out << "    " << model.var_names[j] << "  " << model.rows[row].name
          << "  " << num(v) << "\n";
  }
  if (in_int) out << "    M" << marker++ << "  'MARKER'  'INTEND'\n";

  out << "RHS\n";
  if (model.objective_offset != 0.0)
    out << "    RHS  " << model.objective_name << "  "
        << num(-model.objective_offset) << "\n";
  for (const SparseRow& r : model.rows)
    if (r.lhs != 0.0) out << "    RHS  " << r.name << "  " << num(r.lhs) << "\n";

  out << "BOUNDS\n";
  for (int j = 0; j < n; ++j) {
    const std::string& v = model.var_names[j];
    if (model.lb[j] == -kInf)
      out << " MI BND  " << v << "\n";
    else if (model.lb[j] != 0.0)
      out << " LO BND  " << v << "  " << num(model.lb[j]) << "\n";
    if (model.ub[j] < kInf)
      out << " UP BND  " << v << "  " << num(model.ub[j]) << "\n";
  }
  out << "ENDATA\n";
  return out.str();
}

void write_mps_file(const MipModel& model, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << write_mps(model);
}

}  // namespace confbb

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "confbb/mps.hpp"

namespace confbb {
namespace {

enum class Section {
  kStart,
  kName,
  kObjsense,
  kRows,
  kColumns,
  kRhs,
  kRanges,
  kBounds,
  kEnd
};

enum class RowSense { kObj, kFree, kGe, kLe, kEq };

// one row as it appears in the file, before normalization
struct FileRow {
  std::string name;
  RowSense sense = RowSense::kGe;
  std::vector<int> index;
  std::vector<double> value;
  double rhs = 0.0;
  bool has_range = false;
  double range = 0.0;
};

struct Parser {
  std::istream& in;
  int lineno = 0;
  Section section = Section::kStart;

  std::string model_name;
  std::string objective_name;
  bool maximize = false;
  int objective_row = -1;

  std::vector<FileRow> frows;
  std::unordered_map<std::string, int> row_index;

  std::vector<std::string> var_names;
  std::unordered_map<std::string, int> var_index;
  std::vector<double> obj;
  std::vector<double> lb, ub;
  std::vector<char> is_int;
  std::vector<char> lb_touched;
  double obj_offset = 0.0;

  bool in_integer_block = false;
  std::unordered_set<long long> seen_entries;  // duplicate (col,row) detection

  explicit Parser(std::istream& s) : in(s) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw MpsError(lineno, msg);
  }

  int find_row(const std::string& name) {
    auto it = row_index.find(name);
    if (it == row_index.end()) fail("unknown row '" + name + "'");
    return it->second;
  }

  int find_or_add_var(const std::string& name) {
    auto it = var_index.find(name);
    if (it != var_index.end()) return it->second;
    int j = static_cast<int>(var_names.size());
    var_index.emplace(name, j);
    var_names.push_back(name);
    obj.push_back(0.0);
    lb.push_back(0.0);
    ub.push_back(kInf);
    is_int.push_back(in_integer_block ? 1 : 0);
    lb_touched.push_back(0);
    return j;
  }

  double number(const std::string& tok) const {
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
      throw MpsError(lineno, "bad numeric value '" + tok + "'");
    return v;
  }

  void note_entry(int col, int row) {
    long long key = static_cast<long long>(col) * 1000000007LL + row;
    if (!seen_entries.insert(key).second)
      fail("duplicate entry for column '" + var_names[col] + "' and row '" +
           (row < 0 ? objective_name : frows[row].name) + "'");
  }

  void parse();
  void header_line(const std::vector<std::string>& f, const std::string& raw);
  void data_line(const std::vector<std::string>& f);
  void rows_line(const std::vector<std::string>& f);
  void columns_line(const std::vector<std::string>& f);
  void rhs_line(const std::vector<std::string>& f);
  void ranges_line(const std::vector<std::string>& f);
  void bounds_line(const std::vector<std::string>& f);
  MipModel finalize();
};

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string t;
  while (ss >> t) out.push_back(t);
  return out;
}

void Parser::header_line(const std::vector<std::string>& f,
                         const std::string& raw) {
  const std::string& kw = f[0];
  Section next;
  if (kw == "NAME")
    next = Section::kName;
  else if (kw == "OBJSENSE")
    next = Section::kObjsense;
  else if (kw == "ROWS")
    next = Section::kRows;
  else if (kw == "COLUMNS")
    next = Section::kColumns;
  else if (kw == "RHS")
    next = Section::kRhs;
  else if (kw == "RANGES")
    next = Section::kRanges;
  else if (kw == "BOUNDS")
    next = Section::kBounds;
  else if (kw == "ENDATA")
    next = Section::kEnd;
  else
    fail("unknown section '" + kw + "'");

  // sections must appear in order; RHS/RANGES/BOUNDS only after COLUMNS
  if (next != Section::kEnd && next <= section)
    fail("section " + kw + " out of order");
  if ((next == Section::kRhs || next == Section::kRanges ||
       next == Section::kBounds) &&
      section < Section::kColumns)
    fail("section " + kw + " before COLUMNS");
  if (next == Section::kColumns && section < Section::kRows)
    fail("COLUMNS before ROWS");

  if (next == Section::kName) {
    if (f.size() > 1) model_name = f[1];
    (void)raw;
  }
  if (next == Section::kObjsense && f.size() > 1) {
    std::string v = f[1];
    maximize = (v == "MAX" || v == "MAXIMIZE");
  }
  section = next;
}

void Parser::rows_line(const std::vector<std::string>& f) {
  if (f.size() != 2) fail("ROWS line needs sense and name");
  std::string sense = f[0];
  const std::string& name = f[1];
  if (row_index.count(name) || name == objective_name)
    fail("duplicate row name '" + name + "'");
  RowSense s;
  if (sense == "N") {
    if (objective_row == -1 && objective_name.empty()) {
      objective_name = name;
      row_index.emplace(name, -1);
      objective_row = -2;  // claimed
      return;
    }
    s = RowSense::kFree;  // later N rows are free and dropped
  } else if (sense == "G") {
    s = RowSense::kGe;
  } else if (sense == "L") {
    s = RowSense::kLe;
  } else if (sense == "E") {
    s = RowSense::kEq;
  } else {
    fail("unknown row sense '" + sense + "'");
  }
  int idx = static_cast<int>(frows.size());
  row_index.emplace(name, idx);
  FileRow r;
  r.name = name;
  r.sense = s;
  frows.push_back(std::move(r));
}

void Parser::columns_line(const std::vector<std::string>& f) {
  // integrality markers: <label> 'MARKER' 'INTORG'|'INTEND'
  for (const std::string& t : f) {
    if (t == "'MARKER'") {
      for (const std::string& u : f) {
        if (u == "'INTORG'") in_integer_block = true;
        if (u == "'INTEND'") in_integer_block = false;
      }
      return;
    }
  }
  if (f.size() != 3 && f.size() != 5)
    fail("COLUMNS line needs column, then 1 or 2 (row, value) pairs");
  int col = find_or_add_var(f[0]);
  for (size_t k = 1; k + 1 < f.size(); k += 2) {
    int row = find_row(f[k]);
    double v = number(f[k + 1]);
    note_entry(col, row);
    if (row == -1) {
      obj[col] = v;  // objective entries may be zero; column stays declared
    } else if (frows[row].sense == RowSense::kFree) {
      // non-objective N row: accepted and dropped
    } else if (v != 0.0) {
      frows[row].index.push_back(col);
      frows[row].value.push_back(v);
    }
  }
}

void Parser::rhs_line(const std::vector<std::string>& f) {
  if (f.size() != 3 && f.size() != 5)
    fail("RHS line needs set name, then 1 or 2 (row, value) pairs");
  for (size_t k = 1; k + 1 < f.size(); k += 2) {
    int row = find_row(f[k]);
    double v = number(f[k + 1]);
    if (row == -1)
      obj_offset = -v;  // objective right-hand side sets a negated constant
    else if (frows[row].sense != RowSense::kFree)
      frows[row].rhs = v;
  }
}

void Parser::ranges_line(const std::vector<std::string>& f) {
  if (f.size() != 3 && f.size() != 5)
    fail("RANGES line needs set name, then 1 or 2 (row, value) pairs");
  for (size_t k = 1; k + 1 < f.size(); k += 2) {
    int row = find_row(f[k]);
    if (row == -1) fail("RANGES entry on objective row");
    if (frows[row].sense == RowSense::kFree) fail("RANGES entry on free row");
    frows[row].has_range = true;
    frows[row].range = number(f[k + 1]);
  }
}

void Parser::bounds_line(const std::vector<std::string>& f) {
  if (f.size() < 3) fail("BOUNDS line too short");
  const std::string& type = f[0];
  auto it = var_index.find(f[2]);
  if (it == var_index.end()) fail("bound on unknown column '" + f[2] + "'");
  int j = it->second;

  auto val = [&]() -> double {
    if (f.size() < 4) fail("bound type " + type + " needs a value");
    return number(f[3]);
  };

  if (type == "UP") {
    ub[j] = val();
  } else if (type == "LO") {
    lb[j] = val();
    lb_touched[j] = 1;
  } else if (type == "FX") {
    lb[j] = ub[j] = val();
    lb_touched[j] = 1;
  } else if (type == "FR") {
    lb[j] = -kInf;
    ub[j] = kInf;
    lb_touched[j] = 1;
  } else if (type == "MI") {
    lb[j] = -kInf;
    lb_touched[j] = 1;
  } else if (type == "PL") {
    ub[j] = kInf;
  } else if (type == "BV") {
    lb[j] = 0.0;
    ub[j] = 1.0;
    is_int[j] = 1;
    lb_touched[j] = 1;
  } else if (type == "UI") {
    ub[j] = val();
    is_int[j] = 1;
  } else if (type == "LI") {
    lb[j] = val();
    is_int[j] = 1;
    lb_touched[j] = 1;
  } else {
    fail("unsupported bound type '" + type + "'");
  }
}

void Parser::data_line(const std::vector<std::string>& f) {
  switch (section) {
    case Section::kRows:
      rows_line(f);
      break;
    case Section::kColumns:
      columns_line(f);
      break;
    case Section::kRhs:
      rhs_line(f);
      break;
    case Section::kRanges:
      ranges_line(f);
      break;
    case Section::kBounds:
      bounds_line(f);
      break;
    case Section::kObjsense: {
      // OBJSENSE value may sit on its own line
      std::string v = f[0];
      maximize = (v == "MAX" || v == "MAXIMIZE");
      break;
    }
    case Section::kName:
      fail("unexpected data after NAME");
    default:
      fail("data before ROWS section");
  }
}

void Parser::parse() {
  std::string line;
  bool saw_end = false;
  bool saw_columns = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line[0] == '*') continue;  // comment
    std::vector<std::string> f = tokenize(line);
    if (f.empty()) continue;
    if (saw_end) fail("data after ENDATA");
    bool header = !std::isspace(static_cast<unsigned char>(line[0]));
    if (header) {
      header_line(f, line);
      if (section == Section::kColumns) saw_columns = true;
      if (section == Section::kEnd) saw_end = true;
    } else {
      data_line(f);
    }
  }
  if (!saw_columns) throw MpsError(lineno, "missing COLUMNS section");
  if (objective_name.empty())
    throw MpsError(lineno, "no objective (N) row declared");
}

MipModel Parser::finalize() {
  MipModel m;
  m.name = model_name;
  m.objective_name = objective_name;
  m.var_names = std::move(var_names);
  m.objective = std::move(obj);
  m.objective_offset = obj_offset;
  // classic MPS convention: a negative upper bound on a column whose lower
  // bound was never set frees the lower bound instead of crossing it
  for (size_t j = 0; j < ub.size(); ++j)
    if (ub[j] < 0.0 && !lb_touched[j]) lb[j] = -kInf;
  m.lb = std::move(lb);
  m.ub = std::move(ub);
  m.is_integer = std::move(is_int);

  if (maximize) {
    m.objective_negated = true;
    for (double& c : m.objective) c = (c == 0.0) ? 0.0 : -c;
    m.objective_offset = -m.objective_offset;
  }

  std::unordered_set<std::string> used_names;
  used_names.insert(m.objective_name);
  auto unique_name = [&](std::string base) {
    std::string cand = base;
    int k = 2;
    while (!used_names.insert(cand).second)
      cand = base + "_" + std::to_string(k++);
    return cand;
  };

  for (const FileRow& r : frows) {
    if (r.sense == RowSense::kFree) continue;
    // collapse each file row to an interval [rlb, rub] for its activity
    double rlb = -kInf, rub = kInf;
    switch (r.sense) {
      case RowSense::kGe:
        rlb = r.rhs;
        if (r.has_range) rub = r.rhs + std::abs(r.range);
        break;
      case RowSense::kLe:
        rub = r.rhs;
        if (r.has_range) rlb = r.rhs - std::abs(r.range);
        break;
      case RowSense::kEq:
        rlb = rub = r.rhs;
        if (r.has_range) {
          if (r.range >= 0.0)
            rub = r.rhs + r.range;
          else
            rlb = r.rhs + r.range;
        }
        break;
      default:
        break;
    }
    if (rlb > -kInf) {
      SparseRow row;
      row.index = r.index;
      row.value = r.value;
      row.lhs = rlb;
      row.name = unique_name(r.name);
      m.rows.push_back(std::move(row));
    }
    if (rub < kInf) {
      SparseRow row;
      row.index = r.index;
      row.value.reserve(r.value.size());
      for (double v : r.value) row.value.push_back(-v);
      row.lhs = -rub;
      row.name = unique_name(rlb > -kInf ? r.name + "_neg" : r.name);
      m.rows.push_back(std::move(row));
    }
  }
  return m;
}

}  // namespace

MipModel parse_mps(std::istream& in) {
  Parser p(in);
  p.parse();
  return p.finalize();
}

MipModel parse_mps_string(const std::string& text) {
  std::istringstream ss(text);
  return parse_mps(ss);
}

MipModel parse_mps_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path + "'");
  return parse_mps(f);
}

}  // namespace confbb

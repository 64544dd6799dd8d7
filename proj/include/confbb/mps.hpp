#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "confbb/model.hpp"

namespace confbb {

class MpsError : public std::runtime_error {
 public:
  MpsError(int line, const std::string& what)
      : std::runtime_error("MPS line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Read a free-format MPS model.  Sections NAME, OBJSENSE, ROWS, COLUMNS
// (with INTORG/INTEND markers), RHS, RANGES, BOUNDS, ENDATA.  The result is
// normalized: every row is >=, <= rows are negated, = rows (and ranged rows)
// are split into a pair, maximization is negated into minimization.
MipModel parse_mps(std::istream& in);
MipModel parse_mps_string(const std::string& text);
MipModel parse_mps_file(const std::string& path);

// Emit the normalized form (all rows G).  parse(write(m)) == m.
std::string write_mps(const MipModel& model);
void write_mps_file(const MipModel& model, const std::string& path);

}  // namespace confbb

#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "phylo/bitvec.hpp"
#include "phylo/forest.hpp"

namespace phylo {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Binary character matrix: one row per terminal (species), one column per
// coordinate (character).
struct TerminalMatrix {
  std::vector<BitVec> rows;
  std::vector<std::string> labels;
  std::size_t d = 0;
  std::size_t n() const { return rows.size(); }
};

enum class MatrixFormat { MatrixText };

// matrix-text: header "<n> <d>", then n rows of d chars '0'/'1', each
// optionally followed by whitespace and a label token. Accepts LF or CRLF and
// ignores trailing blank lines. Parse errors name the offending row/line.
TerminalMatrix load_matrix(std::istream& in, MatrixFormat fmt = MatrixFormat::MatrixText);
void save_matrix(std::ostream& out, const TerminalMatrix& m);

// Record of what normalize() removed, sufficient to lift any tree over the
// normalized coordinates back to the original coordinate space.
struct ColumnMap {
  std::size_t original_d = 0;
  std::vector<Coord> kept;                                 // ascending original indices
  std::vector<std::pair<Coord, bool>> dropped_constant;    // (original index, constant bit)
  std::vector<std::pair<std::string, std::string>> merged_rows;  // duplicate label -> kept label
};

// Deduplicates rows (first occurrence wins) and drops constant columns.
// Idempotent; a matrix collapsing to a single point yields n=1, d=0.
std::pair<TerminalMatrix, ColumnMap> normalize(const TerminalMatrix& m);

// Re-inserts dropped constant coordinates into every node and remaps edge
// labels back to original column indices.
LabeledForest lift(const LabeledForest& f, const ColumnMap& map);

}  // namespace phylo

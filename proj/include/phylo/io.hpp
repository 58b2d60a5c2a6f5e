#pragma once

#include <iosfwd>
#include <string>

#include "phylo/forest.hpp"
#include "phylo/matrix.hpp"

namespace phylo {

// One "<u-bits> <v-bits> <label>" line per edge, endpoints ordered
// lexicographically within a line, lines sorted lexicographically.
void save_edges(std::ostream& os, const LabeledForest& f, std::size_t d);
LabeledForest load_edges(std::istream& is, std::size_t d);

// Graphviz rendering; terminal nodes drawn with doublecircle.
void save_dot(std::ostream& os, const LabeledForest& f, const TerminalMatrix& m);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace phylo

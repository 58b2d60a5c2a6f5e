#include "phylo/io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "phylo/matrix.hpp"

namespace phylo {

namespace {

std::vector<std::string> edge_lines(const LabeledForest& f) {
  std::vector<std::string> lines;
  lines.reserve(f.edges.size());
  for (const auto& e : f.edges) {
    std::string u = e.u.to_string(), v = e.v.to_string();
    if (v < u) std::swap(u, v);
    lines.push_back(u + " " + v + " " + std::to_string(e.label));
  }
  std::sort(lines.begin(), lines.end());
  return lines;
}

}  // namespace

void save_edges(std::ostream& os, const LabeledForest& f, std::size_t d) {
  (void)d;
  for (const auto& line : edge_lines(f)) os << line << '\n';
}

LabeledForest load_edges(std::istream& is, std::size_t d) {
  LabeledForest f;
  std::unordered_map<BitVec, std::size_t, BitVecHash> index;
  auto intern = [&](BitVec v) {
    if (index.emplace(v, f.nodes.size()).second) f.nodes.push_back(std::move(v));
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream ss(line);
    std::string su, sv, sl;
    if (!(ss >> su >> sv >> sl))
      throw ParseError("tree line " + std::to_string(lineno) +
                       ": expected \"<u-bits> <v-bits> <label>\"");
    std::string rest;
    if (ss >> rest)
      throw ParseError("tree line " + std::to_string(lineno) + ": trailing content");
    for (const std::string* s : {&su, &sv}) {
      if (s->size() != d)
        throw ParseError("tree line " + std::to_string(lineno) + ": endpoint has length " +
                         std::to_string(s->size()) + ", expected " + std::to_string(d));
      for (char c : *s)
        if (c != '0' && c != '1')
          throw ParseError("tree line " + std::to_string(lineno) + ": invalid character '" +
                           std::string(1, c) + "' in endpoint");
    }
    std::size_t label = 0;
    if (sl.empty() || sl.size() > 9)
      throw ParseError("tree line " + std::to_string(lineno) + ": invalid label \"" + sl + "\"");
    for (char c : sl) {
      if (c < '0' || c > '9')
        throw ParseError("tree line " + std::to_string(lineno) + ": invalid label \"" + sl + "\"");
      label = label * 10 + static_cast<std::size_t>(c - '0');
    }
    if (label >= d)
      throw ParseError("tree line " + std::to_string(lineno) + ": label " + sl +
                       " out of range for d=" + std::to_string(d));
    BitVec u = BitVec::from_string(su), v = BitVec::from_string(sv);
    intern(u);
    intern(v);
    f.edges.push_back({std::move(u), std::move(v), static_cast<Coord>(label)});
  }
  return f;
}

void save_dot(std::ostream& os, const LabeledForest& f, const TerminalMatrix& m) {
  os << "graph phylogeny {\n";
  os << "  node [shape=circle];\n";
  std::unordered_set<std::string> emitted;
  for (std::size_t r = 0; r < m.n(); ++r) {
    const std::string s = m.rows[r].to_string();
    if (emitted.insert(s).second)
      os << "  \"" << s << "\" [shape=doublecircle];\n";
  }
  for (const auto& line : edge_lines(f)) {
    std::istringstream ss(line);
    std::string u, v, l;
    ss >> u >> v >> l;
    os << "  \"" << u << "\" -- \"" << v << "\" [label=\"" << l << "\"];\n";
  }
  os << "}\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
  if (!out) throw std::runtime_error("cannot write file: " + path);
}

}  // namespace phylo

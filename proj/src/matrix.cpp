#include "phylo/matrix.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace phylo {

namespace {

std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

bool all_blank(const std::string& s) {
  for (char c : s)
    if (c != ' ' && c != '\t') return false;
  return true;
}

}  // namespace

TerminalMatrix load_matrix(std::istream& in, MatrixFormat fmt) {
  (void)fmt;  // only matrix-text exists
  const auto lines = read_lines(in);
  if (lines.empty()) throw ParseError("line 1: missing header, expected \"<n> <d>\"");

  std::size_t n = 0, d = 0;
  {
    const std::string& h = lines[0];
    std::size_t pos = 0;
    auto take_number = [&](std::size_t& out) {
      std::size_t start = pos;
      while (pos < h.size() && h[pos] >= '0' && h[pos] <= '9') ++pos;
      if (pos == start) throw ParseError("line 1: malformed header, expected \"<n> <d>\"");
      out = 0;
      for (std::size_t k = start; k < pos; ++k) {
        out = out * 10 + static_cast<std::size_t>(h[k] - '0');
        if (out > 100000000) throw ParseError("line 1: header value too large");
      }
    };
    take_number(n);
    if (pos >= h.size() || h[pos] != ' ')
      throw ParseError("line 1: malformed header, expected \"<n> <d>\"");
    ++pos;
    take_number(d);
    if (pos != h.size()) throw ParseError("line 1: malformed header, expected \"<n> <d>\"");
    if (n == 0 || d == 0) throw ParseError("line 1: n and d must be positive");
  }

  TerminalMatrix m;
  m.d = d;
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t lineno = r + 2;
    if (lineno - 1 >= lines.size())
      throw ParseError("line " + std::to_string(lineno) + ": unexpected end of input, expected " +
                       std::to_string(n) + " rows");
    const std::string& line = lines[lineno - 1];
    std::size_t end = 0;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
    const std::string bits = line.substr(0, end);
    for (char c : bits)
      if (c != '0' && c != '1')
        throw ParseError("row " + std::to_string(r + 1) + " has invalid character '" +
                         std::string(1, c) + "'");
    if (bits.size() != d)
      throw ParseError("row " + std::to_string(r + 1) + " has length " +
                       std::to_string(bits.size()) + ", expected " + std::to_string(d));
    m.rows.push_back(BitVec::from_string(bits));

    std::size_t p = end;
    while (p < line.size() && (line[p] == ' ' || line[p] == '\t')) ++p;
    std::size_t q = p;
    while (q < line.size() && line[q] != ' ' && line[q] != '\t') ++q;
    m.labels.push_back(p < q ? line.substr(p, q - p) : "t" + std::to_string(r));
  }
  for (std::size_t k = n + 1; k < lines.size(); ++k)
    if (!all_blank(lines[k]))
      throw ParseError("line " + std::to_string(k + 1) + ": unexpected content after " +
                       std::to_string(n) + " rows");
  return m;
}

void save_matrix(std::ostream& out, const TerminalMatrix& m) {
  out << m.n() << ' ' << m.d << '\n';
  for (std::size_t r = 0; r < m.n(); ++r) out << m.rows[r].to_string() << ' ' << m.labels[r] << '\n';
}

std::pair<TerminalMatrix, ColumnMap> normalize(const TerminalMatrix& m) {
  ColumnMap map;
  map.original_d = m.d;

  std::vector<std::size_t> kept_rows;
  {
    std::unordered_map<BitVec, std::size_t, BitVecHash> seen;
    for (std::size_t r = 0; r < m.n(); ++r) {
      auto [it, fresh] = seen.emplace(m.rows[r], r);
      if (fresh)
        kept_rows.push_back(r);
      else
        map.merged_rows.emplace_back(m.labels[r], m.labels[it->second]);
    }
  }

  if (!kept_rows.empty()) {
    BitVec andf = m.rows[kept_rows[0]], orf = m.rows[kept_rows[0]];
    for (std::size_t k = 1; k < kept_rows.size(); ++k) {
      andf &= m.rows[kept_rows[k]];
      orf |= m.rows[kept_rows[k]];
    }
    for (Coord j = 0; j < m.d; ++j) {
      if (andf.get(j) == orf.get(j))
        map.dropped_constant.emplace_back(j, andf.get(j));
      else
        map.kept.push_back(j);
    }
  }

  TerminalMatrix out;
  out.d = map.kept.size();
  for (std::size_t r : kept_rows) {
    BitVec row(out.d);
    for (std::size_t k = 0; k < map.kept.size(); ++k) row.set(k, m.rows[r].get(map.kept[k]));
    out.rows.push_back(std::move(row));
    out.labels.push_back(m.labels[r]);
  }
  return {std::move(out), std::move(map)};
}

LabeledForest lift(const LabeledForest& f, const ColumnMap& map) {
  auto lift_node = [&](const BitVec& v) {
    BitVec r(map.original_d);
    for (std::size_t k = 0; k < map.kept.size(); ++k) r.set(map.kept[k], v.get(k));
    for (auto [j, b] : map.dropped_constant) r.set(j, b);
    return r;
  };
  LabeledForest out;
  for (const auto& v : f.nodes) out.nodes.push_back(lift_node(v));
  for (const auto& e : f.edges) {
    if (e.label >= map.kept.size()) throw std::logic_error("lift: edge label out of range");
    out.edges.push_back({lift_node(e.u), lift_node(e.v), map.kept[e.label]});
  }
  return out;
}

}  // namespace phylo

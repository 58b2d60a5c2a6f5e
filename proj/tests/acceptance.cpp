// Acceptance harness: each invocation checks one numbered criterion and
// prints a single PASS/FAIL line. Criteria 6, 7, and 9 drive the CLI binary;
// the rest use the library directly.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli_helpers.hpp"
#include "oracle_helpers.hpp"
#include "phylo/basecase.hpp"
#include "phylo/generator.hpp"
#include "phylo/io.hpp"
#include "phylo/matrix.hpp"
#include "phylo/oracle.hpp"
#include "phylo/rng.hpp"
#include "phylo/solver.hpp"

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

std::string g_cli;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

const fs::path& dir() { return cli::scratch_dir("acceptance"); }

struct Check {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    ok = false;
    if (detail.size() < 600) detail += (detail.empty() ? "" : "; ") + why;
  }
  void note(const std::string& text) {
    if (ok && detail.size() < 600) detail += (detail.empty() ? "" : "; ") + text;
  }
};

std::vector<std::pair<std::size_t, std::uint32_t>> small_configs() {
  std::vector<std::pair<std::size_t, std::uint32_t>> configs;
  for (std::size_t d = 4; d <= 10; ++d)
    for (std::uint32_t q = 0; q <= 2; ++q)
      if (q * 2 < d) configs.push_back({d, q});
  return configs;
}

// criterion 1: solver vs exact oracle across 200 seeded small instances.
Check criterion1() {
  Check c;
  const auto t0 = Clock::now();
  const auto configs = small_configs();
  std::size_t instances = 0;
  for (const auto& [d, q] : configs) {
    const std::size_t seeds = 200 / configs.size() + 1;
    for (std::uint64_t s = 0; s < seeds && instances < 200; ++s, ++instances) {
      const std::uint64_t seed = phylo::mix_seed(1000 + d, q * 100 + s);
      auto inst = phylo::plant(d, q, 8, seed);
      auto oracle_tree = phylo::exact_steiner(inst.matrix);
      const std::size_t opt = oracle_tree.cost();
      if (opt < d || opt > d + q) {
        c.fail("oracle cost " + std::to_string(opt) + " outside [d, d+q] at d=" +
               std::to_string(d) + " q=" + std::to_string(q));
        continue;
      }
      const auto q_hat = static_cast<std::uint32_t>(opt - d);
      phylo::SolverConfig cfg;
      cfg.seed = phylo::mix_seed(seed, 99);
      cfg.restarts_per_q = 10;
      cfg.q_override = q_hat;
      auto rep = phylo::solve(inst.matrix, cfg);
      auto ver = phylo::verify(rep.forest, inst.matrix);
      const std::size_t bound = d + 40ull * q_hat * q_hat + 2ull * q_hat;
      if (!ver.valid) c.fail("invalid tree at d=" + std::to_string(d) + " seed=" + std::to_string(s));
      if (rep.cost > bound)
        c.fail("cost " + std::to_string(rep.cost) + " > bound " + std::to_string(bound));
      if (rep.cost < opt)
        c.fail("cost " + std::to_string(rep.cost) + " beats the optimum " + std::to_string(opt));
    }
  }
  const double secs = seconds_since(t0);
  if (instances < 200) c.fail("only " + std::to_string(instances) + " instances covered");
  if (secs >= 60.0) c.fail("took " + std::to_string(secs) + "s, limit 60s");
  c.note(std::to_string(instances) + " instances vs oracle in " + std::to_string(secs) + "s");
  return c;
}

// criterion 2: perfect instances solve exactly, every run, no splits.
Check criterion2() {
  Check c;
  std::size_t runs = 0;
  double worst = 0;
  for (std::size_t d : {8, 16, 32, 64}) {
    for (std::uint64_t inst_seed = 0; inst_seed < 3; ++inst_seed) {
      auto inst = phylo::plant(d, 0, 2 * d, phylo::mix_seed(2000 + d, inst_seed));
      for (std::uint64_t solve_seed = 0; solve_seed < 3; ++solve_seed, ++runs) {
        const auto t0 = Clock::now();
        auto rep = phylo::solve_with_q(inst.matrix, 0, solve_seed);
        const double secs = seconds_since(t0);
        worst = std::max(worst, secs);
        if (!rep) {
          c.fail("pass failed at d=" + std::to_string(d));
          continue;
        }
        if (rep->cost != d)
          c.fail("cost " + std::to_string(rep->cost) + " != d=" + std::to_string(d));
        if (rep->splits != 0) c.fail("used " + std::to_string(rep->splits) + " splits");
        if (secs >= 1.0) c.fail("run took " + std::to_string(secs) + "s, limit 1s");
      }
    }
  }
  c.note(std::to_string(runs) + " runs, worst " + std::to_string(worst) + "s");
  return c;
}

// criterion 3: additive bound at moderate scale within the time budget.
Check criterion3() {
  Check c;
  double worst_cfg = 0;
  for (std::size_t d : {50, 200, 1000}) {
    for (std::uint32_t q : {1, 2, 3}) {
      for (std::size_t n : {50, 200}) {
        const auto t0 = Clock::now();
        for (std::uint64_t s = 0; s < 20; ++s) {
          auto inst = phylo::plant(d, q, n, phylo::mix_seed(3000 + d, q * 1000 + n * 10 + s));
          phylo::SolverConfig cfg;
          cfg.seed = phylo::mix_seed(s, d);
          cfg.restarts_per_q = 10;
          cfg.q_override = q;
          auto rep = phylo::solve(inst.matrix, cfg);
          if (!rep.met_bound)
            c.fail("bound missed at d=" + std::to_string(d) + " q=" + std::to_string(q) +
                   " n=" + std::to_string(n) + " seed=" + std::to_string(s) + " (cost " +
                   std::to_string(rep.cost) + " vs " + std::to_string(rep.bound) + ")");
        }
        const double secs = seconds_since(t0);
        worst_cfg = std::max(worst_cfg, secs);
        if (secs >= 5.0)
          c.fail("configuration d=" + std::to_string(d) + " q=" + std::to_string(q) +
                 " n=" + std::to_string(n) + " took " + std::to_string(secs) + "s, limit 5s");
      }
    }
  }
  c.note("18 configurations x 20 seeds, worst configuration " + std::to_string(worst_cfg) + "s");
  return c;
}

// criterion 4: single-run success fraction at the correct q.
Check criterion4() {
  Check c;
  std::size_t runs = 0, successes = 0;
  for (std::uint32_t q : {1, 2}) {
    for (std::uint64_t s = 0; s < 100; ++s, ++runs) {
      auto inst = phylo::plant(200, q, 100, phylo::mix_seed(4000 + q, s));
      auto rep = phylo::solve_with_q(inst.matrix, q, phylo::mix_seed(s, q));
      const std::size_t bound = 200 + 40ull * q * q + 2ull * q;
      if (rep && rep->cost <= bound && phylo::verify(rep->forest, inst.matrix).valid) ++successes;
    }
  }
  const double fraction = static_cast<double>(successes) / static_cast<double>(runs);
  if (runs < 200) c.fail("only " + std::to_string(runs) + " runs");
  if (fraction < 0.4) c.fail("success fraction " + std::to_string(fraction) + " < 0.4");
  c.note(std::to_string(successes) + "/" + std::to_string(runs) + " single runs met the bound");
  return c;
}

// criterion 5: Hamming MST is a 2-approximation.
Check criterion5() {
  Check c;
  std::size_t checked = 0;
  for (const auto& [d, q] : small_configs()) {
    for (std::uint64_t s = 0; s < 3; ++s, ++checked) {
      auto inst = phylo::plant(d, q, 8, phylo::mix_seed(5000 + d, q * 100 + s));
      const std::size_t opt = phylo::exact_steiner(inst.matrix).cost();
      const std::size_t mst =
          phylo::hamming_mst(phylo::Component::from_points(inst.matrix.rows)).cost();
      if (mst > 2 * opt)
        c.fail("mst " + std::to_string(mst) + " > 2x oracle " + std::to_string(opt));
    }
  }
  for (std::size_t d : {50, 200}) {
    for (std::uint32_t q : {0, 1, 2, 3}) {
      for (std::uint64_t s = 0; s < 3; ++s, ++checked) {
        auto inst = phylo::plant(d, q, 60, phylo::mix_seed(5100 + d, q * 10 + s));
        const std::size_t mst =
            phylo::hamming_mst(phylo::Component::from_points(inst.matrix.rows)).cost();
        if (mst > 2 * (d + q))
          c.fail("mst " + std::to_string(mst) + " > 2(d+q) at d=" + std::to_string(d));
      }
    }
  }
  c.note(std::to_string(checked) + " instances checked");
  return c;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
      const std::size_t comma = line.find(',', pos);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(pos));
        break;
      }
      fields.push_back(line.substr(pos, comma - pos));
      pos = comma + 1;
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

// criterion 6: the bench harness enforces the split cap on bound-meeting runs.
Check criterion6() {
  Check c;
  const fs::path suite = dir() / "cap_suite.txt";
  cli::spit(suite, "100 1 60 6\n100 2 60 6\n150 3 60 6\n");
  const fs::path csv = dir() / "cap_bench.csv";
  auto r = cli::run(g_cli, "bench --suite " + suite.string() + " --seeds 2 --jobs 2 --csv " +
                               csv.string(), dir());
  if (r.code != 0) {
    c.fail("bench exited " + std::to_string(r.code) + ": " + r.err);
    return c;
  }
  std::size_t met = 0, runs = 0;
  for (const auto& row : csv_rows(cli::slurp(csv))) {
    if (row[0] != "run") continue;
    ++runs;
    const std::uint32_t q = static_cast<std::uint32_t>(std::stoul(row[3]));
    const bool met_bound = row[9] == "1";
    const std::size_t splits = std::stoull(row[10]);
    if (!met_bound) continue;
    ++met;
    if (splits > 4ull * std::max<std::uint32_t>(q, 1))
      c.fail("run with q=" + row[3] + " met the bound using " + std::to_string(splits) +
             " splits");
  }
  if (runs != 36) c.fail("expected 36 runs, saw " + std::to_string(runs));
  if (met == 0) c.fail("no run met the bound; cap check is vacuous");
  c.note(std::to_string(met) + "/" + std::to_string(runs) + " bound-meeting runs within the cap");
  return c;
}

// criterion 7: wall time scales quadratically in d.
Check criterion7() {
  Check c;
  const fs::path suite = dir() / "scale_suite.txt";
  cli::spit(suite, "250 2 100 15\n500 2 100 15\n1000 2 100 15\n");
  const fs::path csv = dir() / "scale_bench.csv";
  auto r = cli::run(g_cli, "bench --suite " + suite.string() +
                               " --seeds 1 --jobs 1 --restarts 1 --csv " + csv.string(), dir());
  if (r.code != 0) {
    c.fail("bench exited " + std::to_string(r.code) + ": " + r.err);
    return c;
  }
  std::map<std::size_t, double> median_ms;
  for (const auto& row : csv_rows(cli::slurp(csv))) {
    if (row[0] != "agg") continue;
    median_ms[std::stoull(row[2])] = std::stod(row[17]);
  }
  if (median_ms.size() != 3) {
    c.fail("expected aggregate rows for 3 dimensions");
    return c;
  }
  const double r1 = median_ms[500] / median_ms[250];
  const double r2 = median_ms[1000] / median_ms[500];
  std::ostringstream note;
  note.precision(2);
  note << std::fixed << "medians " << median_ms[250] << "/" << median_ms[500] << "/"
       << median_ms[1000] << " ms, ratios " << r1 << ", " << r2;
  if (r1 < 3.0 || r1 > 5.3) c.fail("ratio 500/250 = " + std::to_string(r1) + " outside [3.0, 5.3]");
  if (r2 < 3.0 || r2 > 5.3) c.fail("ratio 1000/500 = " + std::to_string(r2) + " outside [3.0, 5.3]");
  if (median_ms[1000] >= 10000.0)
    c.fail("d=1000 median " + std::to_string(median_ms[1000]) + " ms, limit 10s");
  c.note(note.str());
  return c;
}

// criterion 8 helpers: independent structural checks on planted witnesses.
struct WitnessView {
  const phylo::PlantedInstance& inst;
  std::map<std::string, std::size_t> node_index;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj;  // (neighbor, label)
  std::set<std::size_t> terminal_nodes;
  std::vector<std::size_t> label_count;

  explicit WitnessView(const phylo::PlantedInstance& pi) : inst(pi) {
    const auto& w = pi.witness;
    for (std::size_t k = 0; k < w.nodes.size(); ++k) node_index[w.nodes[k].to_string()] = k;
    adj.resize(w.nodes.size());
    label_count.assign(pi.d, 0);
    for (const auto& e : w.edges) {
      const std::size_t a = node_index.at(e.u.to_string());
      const std::size_t b = node_index.at(e.v.to_string());
      adj[a].push_back({b, e.label});
      adj[b].push_back({a, e.label});
      ++label_count[e.label];
    }
    for (const auto& row : pi.matrix.rows) terminal_nodes.insert(node_index.at(row.to_string()));
  }

  bool good(std::size_t i) const { return label_count[i] == 1; }
  bool bad(std::size_t i) const { return label_count[i] >= 2; }
};

// Oriented terminal-column key; two coordinates share a cut iff keys match.
std::string column_key(const phylo::TerminalMatrix& m, std::size_t i) {
  std::string key;
  const bool head = m.rows[0].get(i);
  for (const auto& r : m.rows) key += (r.get(i) != head) ? '1' : '0';
  return key;
}

// Fact 1.1: the edges of an interchangeability class form simple paths whose
// interior nodes are non-terminal degree-2, and every maximal run carries
// every member of the class.
bool class_paths_ok(const WitnessView& w, const std::vector<std::size_t>& members) {
  std::set<std::size_t> member_set(members.begin(), members.end());
  std::map<std::size_t, std::vector<std::pair<std::size_t, std::size_t>>> incident;
  for (std::size_t v = 0; v < w.adj.size(); ++v)
    for (const auto& [u, lab] : w.adj[v])
      if (member_set.count(lab)) incident[v].push_back({u, lab});
  for (const auto& [v, inc] : incident)
    if (inc.size() > 2) return false;

  std::set<std::size_t> seen;
  for (const auto& [start, inc] : incident) {
    if (seen.count(start) || inc.size() != 1) continue;  // walk from run endpoints
    std::multiset<std::size_t> run_labels;
    std::size_t prev = start, cur = inc[0].first;
    run_labels.insert(inc[0].second);
    seen.insert(start);
    while (true) {
      seen.insert(cur);
      const auto& step = incident.at(cur);
      if (step.size() == 1) break;  // far endpoint
      // Interior node of the run: degree 2 overall and not a terminal.
      if (w.adj[cur].size() != 2 || w.terminal_nodes.count(cur)) return false;
      const auto& next = step[0].first == prev ? step[1] : step[0];
      run_labels.insert(next.second);
      prev = cur;
      cur = next.first;
    }
    if (run_labels.size() != members.size()) return false;
    for (std::size_t m : members)
      if (run_labels.count(m) != 1) return false;
  }
  // Every class node must belong to some walked run (no cycles survive in a
  // tree, so a non-walked node would mean an isolated oddity).
  for (const auto& [v, inc] : incident)
    if (!seen.count(v)) return false;
  return true;
}

Check criterion8() {
  Check c;
  std::size_t witnesses = 0, classes_checked = 0;
  for (std::uint64_t s = 0; s < 100; ++s, ++witnesses) {
    const std::size_t d = 12 + s % 17;
    const std::uint32_t q = static_cast<std::uint32_t>(s % 4);
    auto inst = phylo::plant(d, q, 10 + s % 8, phylo::mix_seed(8000, s));
    WitnessView w(inst);

    // 1.1: interchangeable classes sit on contiguous paths.
    std::map<std::string, std::vector<std::size_t>> classes;
    for (std::size_t i = 0; i < d; ++i) classes[column_key(inst.matrix, i)].push_back(i);
    for (const auto& [key, members] : classes) {
      if (members.size() < 2) continue;
      ++classes_checked;
      if (!class_paths_ok(w, members))
        c.fail("class not on a contiguous path, seed " + std::to_string(s));
    }

    // 1.2: good coordinate pairs never show all four bit combinations.
    std::vector<std::size_t> good_coords;
    for (std::size_t i = 0; i < d; ++i)
      if (w.good(i)) good_coords.push_back(i);
    for (std::size_t a = 0; a < good_coords.size(); ++a)
      for (std::size_t b = a + 1; b < good_coords.size(); ++b) {
        std::set<std::pair<bool, bool>> combos;
        for (const auto& r : inst.matrix.rows)
          combos.insert({r.get(good_coords[a]), r.get(good_coords[b])});
        if (combos.size() == 4)
          c.fail("four-gamete violation between good coordinates, seed " + std::to_string(s));
      }

    // 1.3: both endpoints of a good coordinate's unique edge carry the value
    // fixed by every other good coordinate that is constant on a side of the
    // cut (the guarantee covers good coordinates only).
    for (const auto& e : inst.witness.edges) {
      if (!w.good(e.label)) continue;
      for (auto [j, b] : testoracle::brute_pattern(e.label, inst.matrix.rows)) {
        if (!w.good(j)) continue;
        if (e.u.get(j) != b || e.v.get(j) != b) {
          c.fail("good edge endpoint violates its pattern, seed " + std::to_string(s));
          break;
        }
      }
    }

    // 1.4: good and bad coordinates never share a cut.
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j)
        if ((w.good(i) && w.bad(j)) || (w.bad(i) && w.good(j)))
          if (column_key(inst.matrix, i) == column_key(inst.matrix, j))
            c.fail("good and bad coordinates share a cut, seed " + std::to_string(s));
  }
  c.note(std::to_string(witnesses) + " witnesses, " + std::to_string(classes_checked) +
         " multi-member classes");
  return c;
}

// criterion 9: CLI round trip with byte-identical outputs per seed.
Check criterion9() {
  Check c;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const std::string tag = std::to_string(s);
    const std::string inst = (dir() / ("rt_" + tag + ".txt")).string();
    const std::uint32_t q = static_cast<std::uint32_t>(s % 3);
    auto g = cli::run(g_cli,
                      "gen --d 24 --q " + std::to_string(q) + " --n 14 --seed " + tag +
                          " --out " + inst, dir());
    if (g.code != 0) {
      c.fail("gen failed at seed " + tag);
      continue;
    }
    const std::string stem_a = (dir() / ("sol_a_" + tag)).string();
    const std::string stem_b = (dir() / ("sol_b_" + tag)).string();
    auto sa = cli::run(g_cli, "solve --input " + inst + " --seed " + tag + " --out " + stem_a +
                                  " --emit edges", dir());
    auto sb = cli::run(g_cli, "solve --input " + inst + " --seed " + tag + " --out " + stem_b +
                                  " --emit edges", dir());
    if (sa.code != 0 || sb.code != 0) {
      c.fail("solve exited " + std::to_string(sa.code) + "/" + std::to_string(sb.code) +
             " at seed " + tag);
      continue;
    }
    if (cli::slurp(stem_a + ".edges") != cli::slurp(stem_b + ".edges"))
      c.fail("same seed produced different edge files at seed " + tag);
    auto v = cli::run(g_cli, "verify --input " + inst + " --tree " + stem_a + ".edges", dir());
    if (v.code != 0) c.fail("verify exited " + std::to_string(v.code) + " at seed " + tag);
  }
  c.note("50 seeds round-tripped");
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: %s <path-to-cli> <criterion 1..9>\n", argv[0]);
    return 2;
  }
  g_cli = argv[1];
  const int n = std::atoi(argv[2]);
  Check c;
  switch (n) {
    case 1: c = criterion1(); break;
    case 2: c = criterion2(); break;
    case 3: c = criterion3(); break;
    case 4: c = criterion4(); break;
    case 5: c = criterion5(); break;
    case 6: c = criterion6(); break;
    case 7: c = criterion7(); break;
    case 8: c = criterion8(); break;
    case 9: c = criterion9(); break;
    default:
      std::fprintf(stderr, "unknown criterion %d\n", n);
      return 2;
  }
  std::printf("%s: criterion %d%s%s\n", c.ok ? "PASS" : "FAIL", n, c.detail.empty() ? "" : " - ",
              c.detail.c_str());
  return c.ok ? 0 : 1;
}

// Command-line surface for the phylogeny solver: solve, gen, verify, oracle,
// and a seeded benchmark harness. Exit codes: 0 success, 1 I/O or parameter
// error, 2 result fails its check (bound not met, tree invalid).
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "phylo/basecase.hpp"
#include "phylo/generator.hpp"
#include "phylo/io.hpp"
#include "phylo/matrix.hpp"
#include "phylo/oracle.hpp"
#include "phylo/rng.hpp"
#include "phylo/solver.hpp"

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

phylo::TerminalMatrix load_matrix_file(const std::string& path) {
  std::istringstream ss(phylo::read_file(path));
  return phylo::load_matrix(ss);
}

std::string format_edges(const phylo::LabeledForest& f, std::size_t d) {
  std::ostringstream ss;
  phylo::save_edges(ss, f, d);
  return ss.str();
}

std::size_t mst_cost_of(const phylo::TerminalMatrix& m) {
  return phylo::mst_base_case(phylo::PartitionState::single(m)).cost();
}

int cmd_solve(const std::string& input, std::uint64_t seed, std::uint32_t restarts,
              std::optional<std::uint32_t> q_override, const std::string& mode,
              const std::string& out, const std::vector<std::string>& emits) {
  if (!emits.empty() && out.empty()) {
    std::cerr << "error: --emit requires --out\n";
    return 1;
  }
  const auto t_start = Clock::now();
  phylo::TerminalMatrix m = load_matrix_file(input);
  const double parse_ms = ms_since(t_start);

  auto [nm, cmap] = phylo::normalize(m);
  phylo::SolverConfig cfg;
  cfg.seed = seed;
  cfg.restarts_per_q = restarts;
  cfg.q_override = q_override;
  cfg.mode = mode == "simple" ? phylo::SolveMode::Simple : phylo::SolveMode::General;

  const auto t_solve = Clock::now();
  phylo::SolveReport rep = phylo::solve(nm, cfg);
  const double solve_ms = ms_since(t_solve);

  phylo::LabeledForest tree = phylo::lift(rep.forest, cmap);
  phylo::VerificationReport ver = phylo::verify(tree, m);

  json summary;
  summary["instance"] = input;
  summary["n"] = m.n();
  summary["d"] = m.d;
  summary["seed"] = seed;
  summary["mode"] = mode;
  summary["q_estimate"] = rep.q_used;
  summary["restarts_used"] = rep.restarts_used;
  summary["splits"] = rep.splits;
  summary["cost"] = rep.cost;
  summary["bound"] = rep.bound;
  summary["met_bound"] = rep.met_bound;
  summary["valid"] = ver.valid;
  summary["mst_cost"] = mst_cost_of(nm);
  if (nm.d <= 10 && nm.n() <= 10)
    summary["oracle_cost"] = phylo::exact_steiner(nm).cost();
  else
    summary["oracle_cost"] = nullptr;
  summary["wall_ms"] = {{"parse", parse_ms}, {"solve", solve_ms}, {"total", ms_since(t_start)}};

  std::cout << summary.dump(2) << "\n";

  for (const auto& kind : emits) {
    if (kind == "json")
      phylo::write_file(out + ".json", summary.dump(2) + "\n");
    else if (kind == "edges")
      phylo::write_file(out + ".edges", format_edges(tree, m.d));
    else if (kind == "dot") {
      std::ostringstream ss;
      phylo::save_dot(ss, tree, m);
      phylo::write_file(out + ".dot", ss.str());
    }
  }
  return (ver.valid && rep.met_bound) ? 0 : 2;
}

int cmd_gen(std::size_t d, std::uint32_t q, std::size_t n, std::uint64_t seed,
            const std::string& out, const std::string& witness) {
  phylo::PlantedInstance inst = phylo::plant(d, q, n, seed);
  {
    std::ostringstream ss;
    phylo::save_matrix(ss, inst.matrix);
    phylo::write_file(out, ss.str());
  }
  if (!witness.empty()) phylo::write_file(witness, format_edges(inst.witness, d));

  json summary;
  summary["d"] = inst.d;
  summary["q_planted"] = inst.q_planted;
  summary["n"] = inst.matrix.n();
  summary["seed"] = seed;
  summary["witness_cost"] = inst.witness.cost();
  summary["out"] = out;
  if (!witness.empty()) summary["witness"] = witness;
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_verify(const std::string& input, const std::string& tree_path) {
  phylo::TerminalMatrix m = load_matrix_file(input);
  std::istringstream ss(phylo::read_file(tree_path));
  phylo::LabeledForest f = phylo::load_edges(ss, m.d);

  phylo::VerificationReport rep = phylo::verify(f, m);
  json out;
  out["valid"] = rep.valid;
  out["cost"] = rep.cost;
  out["excess"] = rep.excess;
  out["bad_count"] = rep.bad_count;
  out["violations"] = rep.violations;
  out["per_coordinate_counts"] = rep.per_coordinate_counts;
  std::cout << out.dump(2) << "\n";
  return rep.valid ? 0 : 2;
}

int cmd_oracle(const std::string& input, std::size_t max_dim) {
  phylo::TerminalMatrix m = load_matrix_file(input);
  auto [nm, cmap] = phylo::normalize(m);
  phylo::LabeledForest tree = phylo::exact_steiner(nm, max_dim);
  json out;
  out["cost"] = tree.cost();
  out["q"] = tree.cost() - nm.d;
  out["d"] = nm.d;
  out["n"] = nm.n();
  std::cout << out.dump(2) << "\n";
  return 0;
}

struct BenchRow {
  std::size_t config = 0;
  std::size_t d = 0, n = 0;
  std::uint32_t q = 0;
  std::uint64_t instance_seed = 0, solve_seed = 0;
  std::size_t cost = 0, bound = 0, splits = 0;
  bool met_bound = false, valid = false;
  double wall_ms = 0;
  std::string error;
};

double median(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : (v[h - 1] + v[h]) / 2;
}

int cmd_bench(const std::string& suite_path, std::uint32_t seeds, const std::string& csv_path,
              std::uint64_t base_seed, std::uint32_t restarts, std::uint32_t jobs) {
  struct Config {
    std::size_t d, n, reps;
    std::uint32_t q;
  };
  std::vector<Config> configs;
  {
    std::istringstream ss(phylo::read_file(suite_path));
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(ss, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos || line[first] == '#') continue;
      std::istringstream ls(line);
      Config c{};
      if (!(ls >> c.d >> c.q >> c.n >> c.reps)) {
        std::cerr << "error: suite line " << lineno << ": expected \"<d> <q> <n> <reps>\"\n";
        return 1;
      }
      configs.push_back(c);
    }
  }

  std::vector<BenchRow> rows;
  for (std::size_t k = 0; k < configs.size(); ++k)
    for (std::size_t rep = 0; rep < configs[k].reps; ++rep)
      for (std::uint32_t s = 0; s < seeds; ++s) {
        BenchRow row;
        row.config = k;
        row.d = configs[k].d;
        row.q = configs[k].q;
        row.n = configs[k].n;
        row.instance_seed = phylo::mix_seed(base_seed, k * 1000003 + rep);
        row.solve_seed = phylo::mix_seed(row.instance_seed, s);
        rows.push_back(row);
      }

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= rows.size()) return;
      BenchRow& row = rows[idx];
      try {
        phylo::PlantedInstance inst = phylo::plant(row.d, row.q, row.n, row.instance_seed);
        phylo::SolverConfig cfg;
        cfg.seed = row.solve_seed;
        cfg.restarts_per_q = restarts;
        cfg.q_override = row.q;
        const auto t0 = Clock::now();
        phylo::SolveReport rep = phylo::solve(inst.matrix, cfg);
        row.wall_ms = ms_since(t0);
        row.cost = rep.cost;
        row.bound = rep.bound;
        row.splits = rep.splits;
        row.met_bound = rep.met_bound;
        row.valid = phylo::verify(rep.forest, inst.matrix).valid;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };
  {
    const std::uint32_t nthreads =
        std::max<std::uint32_t>(1, std::min<std::uint32_t>(jobs, std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    for (std::uint32_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (const auto& row : rows) {
    if (!row.error.empty()) {
      std::cerr << "error: bench run failed: " << row.error << "\n";
      return 1;
    }
    // Hard cap: a run that meets the bound must not have split more than
    // 4*max(q,1) times.
    const std::size_t cap = 4ull * std::max<std::uint32_t>(row.q, 1);
    if (row.met_bound && row.splits > cap) {
      std::cerr << "assertion failed: run met the bound with " << row.splits << " splits (cap "
                << cap << ")\n";
      return 1;
    }
  }

  std::ostringstream csv;
  csv << "kind,config,d,q,n,instance_seed,solve_seed,cost,bound,met_bound,splits,valid,wall_ms,"
         "runs,success_rate,min_cost,median_cost,median_wall_ms\n";
  csv.setf(std::ios::fixed);
  csv.precision(3);
  for (const auto& r : rows)
    csv << "run," << r.config << ',' << r.d << ',' << r.q << ',' << r.n << ',' << r.instance_seed
        << ',' << r.solve_seed << ',' << r.cost << ',' << r.bound << ',' << (r.met_bound ? 1 : 0)
        << ',' << r.splits << ',' << (r.valid ? 1 : 0) << ',' << r.wall_ms << ",,,,,\n";
  for (std::size_t k = 0; k < configs.size(); ++k) {
    std::vector<double> costs, walls;
    std::size_t met = 0, runs = 0, min_cost = 0;
    for (const auto& r : rows) {
      if (r.config != k) continue;
      ++runs;
      met += r.met_bound ? 1 : 0;
      costs.push_back(static_cast<double>(r.cost));
      walls.push_back(r.wall_ms);
      min_cost = min_cost == 0 ? r.cost : std::min(min_cost, r.cost);
    }
    csv << "agg," << k << ',' << configs[k].d << ',' << configs[k].q << ',' << configs[k].n
        << ",,,,,,,,," << runs << ',' << (runs ? static_cast<double>(met) / runs : 0) << ','
        << min_cost << ',' << median(costs) << ',' << median(walls) << "\n";
  }
  phylo::write_file(csv_path, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"low-cost phylogenetic trees for binary character matrices"};
  app.require_subcommand(1);

  // solve
  std::string in_path, out_path, mode = "general";
  std::uint64_t seed = 0;
  std::uint32_t restarts = 10;
  std::int64_t q_flag = -1;
  std::vector<std::string> emits;
  auto* solve = app.add_subcommand("solve", "construct a low-cost tree for a matrix");
  solve->add_option("--input", in_path, "matrix-text file")->required();
  solve->add_option("--seed", seed, "PRNG seed (default 0)");
  solve->add_option("--restarts", restarts, "passes per q candidate (default 10)");
  solve->add_option("--q", q_flag, "fix the excess parameter instead of estimating it");
  solve->add_option("--mode", mode, "simple|general (default general)")
      ->check(CLI::IsMember({"simple", "general"}));
  solve->add_option("--out", out_path, "output path stem for --emit");
  solve->add_option("--emit", emits, "emit json|edges|dot (repeatable)")
      ->check(CLI::IsMember({"json", "edges", "dot"}));

  // gen
  std::size_t gen_d = 0, gen_n = 0;
  std::uint32_t gen_q = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out, gen_witness;
  auto* gen = app.add_subcommand("gen", "generate a planted instance");
  gen->add_option("--d", gen_d, "coordinate count")->required();
  gen->add_option("--q", gen_q, "planted excess");
  gen->add_option("--n", gen_n, "terminal count target")->required();
  gen->add_option("--seed", gen_seed, "PRNG seed (default 0)");
  gen->add_option("--out", gen_out, "matrix-text output path")->required();
  gen->add_option("--witness", gen_witness, "also write the witness edge list here");

  // verify
  std::string ver_in, ver_tree;
  auto* ver = app.add_subcommand("verify", "check a tree against a matrix");
  ver->add_option("--input", ver_in, "matrix-text file")->required();
  ver->add_option("--tree", ver_tree, "edge-list file")->required();

  // oracle
  std::string ora_in;
  std::size_t max_dim = 10;
  auto* ora = app.add_subcommand("oracle", "exact minimum Steiner tree (small instances)");
  ora->add_option("--input", ora_in, "matrix-text file")->required();
  ora->add_option("--max-dim", max_dim, "dimension limit (default 10)");

  // bench
  std::string suite_path, csv_path;
  std::uint32_t bench_seeds = 1, bench_restarts = 1, bench_jobs = 4;
  std::uint64_t bench_seed = 0;
  auto* bench = app.add_subcommand("bench", "run a suite of planted instances");
  bench->add_option("--suite", suite_path, "suite file: lines \"<d> <q> <n> <reps>\"")->required();
  bench->add_option("--seeds", bench_seeds, "solver seeds per instance (default 1)");
  bench->add_option("--csv", csv_path, "CSV output path")->required();
  bench->add_option("--seed", bench_seed, "base seed (default 0)");
  bench->add_option("--restarts", bench_restarts, "restarts per run (default 1)");
  bench->add_option("--jobs", bench_jobs, "worker threads (default 4)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (solve->parsed())
      return cmd_solve(in_path, seed, restarts,
                       q_flag < 0 ? std::nullopt
                                  : std::optional<std::uint32_t>(static_cast<std::uint32_t>(q_flag)),
                       mode, out_path, emits);
    if (gen->parsed()) return cmd_gen(gen_d, gen_q, gen_n, gen_seed, gen_out, gen_witness);
    if (ver->parsed()) return cmd_verify(ver_in, ver_tree);
    if (ora->parsed()) return cmd_oracle(ora_in, max_dim);
    if (bench->parsed())
      return cmd_bench(suite_path, bench_seeds, csv_path, bench_seed, bench_restarts, bench_jobs);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

// cpfsat: solve, encode, validate, oracle, gen, bench-size, bench-runtime.
// Exit codes: 0 ok, 1 unsolvable/invalid, 2 usage, 3 parse, 4 solver error, 5 unknown.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cpfsat/bench.hpp"
#include "cpfsat/driver.hpp"
#include "cpfsat/encodings.hpp"
#include "cpfsat/expansion.hpp"
#include "cpfsat/oracle.hpp"

namespace {

using namespace cpfsat;

enum Exit { kOk = 0, kNegative = 1, kUsage = 2, kParse = 3, kSolverFailure = 4, kUnknown = 5 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

EncodingKind encoding_flag(const std::string& name) {
  auto k = parse_encoding(name);
  if (!k) throw UsageError("unknown encoding '" + name + "'");
  return *k;
}

std::vector<EncodingKind> encoding_list(const std::vector<std::string>& names) {
  std::vector<EncodingKind> out;
  if (names.empty()) return {std::begin(kAllEncodings), std::end(kAllEncodings)};
  for (const auto& n : names) out.push_back(encoding_flag(n));
  return out;
}

std::pair<int, int> grid_flag(const std::string& text) {
  int w = 0, h = 0;
  char x = 0;
  std::istringstream in(text);
  if (!(in >> w >> x >> h) || (x != 'x' && x != 'X') || w <= 0 || h <= 0 || !in.eof())
    throw UsageError("grid must look like WxH, got '" + text + "'");
  return {w, h};
}

CpfInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path);
  return read_instance(in);
}

SolverConfig solver_flags(const std::string& solver_cmd, double timeout, const std::string& engine) {
  SolverConfig s;
  std::string cmd = solver_cmd;
  if (cmd.empty())
    if (const char* env = std::getenv("CPFSAT_SOLVER")) cmd = env;
  if (!cmd.empty()) {
    s.mode = SolverConfig::Mode::kExternal;
    s.command = cmd;
  }
  if (engine == "dpll")
    s.engine = SolverConfig::Engine::kDpll;
  else if (engine != "cdcl")
    throw UsageError("engine must be cdcl or dpll");
  s.time_limit_seconds = timeout;
  return s;
}

template <class Row>
void write_csv_file(const std::string& path, const std::vector<Row>& rows) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_csv(out, rows);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"makespan-optimal cooperative path finding via SAT"};
  app.require_subcommand(1, 1);

  // solve
  std::string instance_path, encoding_name = "simplified", solver_cmd, engine = "cdcl", solution_out;
  double timeout = 256.0;
  std::optional<int> eta_cap;
  bool no_heuristic = false, verbose = false;
  auto* solve = app.add_subcommand("solve", "find a makespan-optimal solution");
  solve->add_option("--instance", instance_path, "instance file")->required();
  solve->add_option("--encoding", encoding_name, "inverse|alldifferent|matching|direct|simplified");
  solve->add_flag("--no-heuristic", no_heuristic, "skip distance pruning clauses");
  solve->add_option("--solver", solver_cmd, "external solver command; {cnf} is the formula path (env CPFSAT_SOLVER)");
  solve->add_option("--engine", engine, "embedded engine: cdcl or dpll");
  solve->add_option("--timeout", timeout, "wall-clock budget in seconds")->check(CLI::PositiveNumber);
  solve->add_option("--eta-cap", eta_cap, "largest makespan bound to try")->check(CLI::NonNegativeNumber);
  solve->add_option("--out", solution_out, "solution file (default <instance>.sol)");
  solve->add_flag("-v,--verbose", verbose, "print one line per query");

  // encode
  int eta = 1;
  std::string cnf_out, varmap_out;
  bool heuristic = false;
  auto* encode_cmd = app.add_subcommand("encode", "write the formula for one makespan bound");
  encode_cmd->add_option("--instance", instance_path)->required();
  encode_cmd->add_option("--encoding", encoding_name);
  encode_cmd->add_option("--eta", eta)->required()->check(CLI::PositiveNumber);
  encode_cmd->add_option("--out", cnf_out, "DIMACS file")->required();
  encode_cmd->add_option("--varmap", varmap_out, "variable dictionary file");
  encode_cmd->add_flag("--heuristic", heuristic, "append distance pruning clauses");

  // validate
  std::string solution_path;
  auto* validate = app.add_subcommand("validate", "check a solution file against an instance");
  validate->add_option("--instance", instance_path)->required();
  validate->add_option("--solution", solution_path)->required();

  // oracle
  std::optional<int> cap;
  std::int64_t state_budget = 4'000'000;
  auto* oracle = app.add_subcommand("oracle", "optimal makespan by joint-state breadth-first search");
  oracle->add_option("--instance", instance_path)->required();
  oracle->add_option("--cap", cap, "depth limit (default n*mu+n)")->check(CLI::NonNegativeNumber);
  oracle->add_option("--states", state_budget, "joint-state budget");

  // gen
  std::string grid = "4x4", gen_out;
  double obstacles = 0.2;
  int agents = 1;
  std::uint64_t seed = 0;
  bool solvable = false;
  auto* gen = app.add_subcommand("gen", "random grid instance");
  gen->add_option("--grid", grid, "WxH");
  gen->add_option("--obstacles", obstacles, "obstacle fraction")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--agents", agents)->check(CLI::NonNegativeNumber);
  gen->add_option("--seed", seed);
  gen->add_option("--out", gen_out, "instance file (default stdout)");
  gen->add_flag("--solvable", solvable, "advance the seed until the instance passes the solvability filter");

  // bench-size
  std::vector<std::string> grids, encodings;
  std::vector<int> etas, agent_counts;
  int seeds = 10;
  std::string rows_out, diffs_out;
  auto* bsize = app.add_subcommand("bench-size", "formula size statistics (CSV on stdout)");
  bsize->add_option("--grid", grids, "WxH, repeatable")->required();
  bsize->add_option("--eta", etas, "one bound per grid")->required();
  bsize->add_option("--agents", agent_counts, "agent counts")->required();
  bsize->add_option("--encodings", encodings);
  bsize->add_option("--obstacles", obstacles)->check(CLI::Range(0.0, 1.0));
  bsize->add_option("--seeds", seeds)->check(CLI::PositiveNumber);
  bsize->add_flag("--heuristic", heuristic);
  bsize->add_option("--rows", rows_out, "per-instance CSV");

  // bench-runtime
  int max_agents = 64, agent_step = 1;
  auto* brun = app.add_subcommand("bench-runtime", "runtime and solution quality (CSV on stdout)");
  brun->add_option("--grid", grids)->required();
  brun->add_option("--encodings", encodings);
  brun->add_option("--obstacles", obstacles)->check(CLI::Range(0.0, 1.0));
  brun->add_option("--seeds", seeds)->check(CLI::PositiveNumber);
  brun->add_option("--max-agents", max_agents)->check(CLI::PositiveNumber);
  brun->add_option("--agent-step", agent_step)->check(CLI::PositiveNumber);
  brun->add_option("--timeout", timeout)->check(CLI::PositiveNumber);
  brun->add_option("--solver", solver_cmd);
  brun->add_option("--engine", engine);
  brun->add_flag("--no-heuristic", no_heuristic);
  brun->add_option("--rows", rows_out, "per-instance CSV");
  brun->add_option("--diffs", diffs_out, "sorted total-move differences CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*solve) {
      CpfInstance inst = load_instance(instance_path);
      DriverConfig cfg;
      cfg.encoding = encoding_flag(encoding_name);
      cfg.use_distance_heuristic = !no_heuristic;
      cfg.eta_cap = eta_cap;
      cfg.time_budget_seconds = timeout;
      cfg.solver = solver_flags(solver_cmd, timeout, engine);
      SolveReport rep = find_optimal(inst, cfg);
      if (verbose)
        for (const auto& q : rep.queries)
          std::cerr << "eta=" << q.eta << ' ' << to_string(q.status) << " vars=" << q.stats.variables
                    << " clauses=" << q.stats.clauses << " t=" << q.seconds << "s\n";
      if (auto* opt = std::get_if<Optimal>(&rep.outcome)) {
        Validation v = validate_solution(opt->solution, inst);
        if (!v) {
          std::cerr << "decoded solution rejected: " << v.diagnostic << '\n';
          return kSolverFailure;
        }
        std::string path = solution_out.empty() ? instance_path + ".sol" : solution_out;
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path);
        write_solution(out, opt->solution);
        std::cout << describe(rep.outcome) << " total_moves=" << metrics(opt->solution).total_moves
                  << " time=" << rep.seconds << "s\n";
        return kOk;
      }
      std::cout << describe(rep.outcome) << '\n';
      if (std::holds_alternative<Unsolvable>(rep.outcome)) return kNegative;
      return std::get<Unknown>(rep.outcome).solver_error ? kSolverFailure : kUnknown;
    }

    if (*encode_cmd) {
      CpfInstance inst = load_instance(instance_path);
      EncodedInstance enc = encode(inst, eta, encoding_flag(encoding_name));
      if (heuristic) enc = apply_distance_heuristic(std::move(enc), reach_windows(inst, eta));
      std::ofstream out(cnf_out, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write " + cnf_out);
      write_dimacs(out, enc.cnf);
      if (!varmap_out.empty()) {
        std::ofstream vm(varmap_out, std::ios::binary);
        if (!vm) throw std::runtime_error("cannot write " + varmap_out);
        enc.varmap.write(vm);
      }
      std::cout << "variables=" << enc.stats.variables << " clauses=" << enc.stats.clauses
                << " ratio=" << enc.stats.ratio << " length=" << enc.stats.mean_clause_length << '\n';
      return kOk;
    }

    if (*validate) {
      CpfInstance inst = load_instance(instance_path);
      std::ifstream in(solution_path);
      if (!in) throw ParseError(0, "cannot open " + solution_path);
      Solution sol;
      try {
        sol = read_solution(in, inst.vertex_count());
      } catch (const ParseError& e) {
        std::cout << "INVALID " << e.what() << '\n';
        return kParse;
      }
      Validation v = validate_solution(sol, inst);
      if (!v) {
        std::cout << "INVALID";
        if (v.step >= 0) std::cout << " step " << v.step;
        std::cout << ": " << v.diagnostic << '\n';
        return kNegative;
      }
      SolutionMetrics m = metrics(sol);
      std::cout << "VALID makespan=" << m.makespan << " total_moves=" << m.total_moves << '\n';
      return kOk;
    }

    if (*oracle) {
      CpfInstance inst = load_instance(instance_path);
      int depth = cap.value_or(default_eta_cap(inst));
      try {
        OracleResult r = oracle_makespan(inst, depth, state_budget);
        if (r.solved()) {
          std::cout << "makespan " << *r.makespan << " states=" << r.states << '\n';
          return kOk;
        }
        std::cout << "UNSOLVABLE within cap " << depth << " states=" << r.states << '\n';
        return kNegative;
      } catch (const ResourceError& e) {
        std::cout << "UNKNOWN: " << e.what() << '\n';
        return kUnknown;
      }
    }

    if (*gen) {
      auto [w, h] = grid_flag(grid);
      GridSpec spec{w, h, obstacles, agents, seed};
      CpfInstance inst;
      if (solvable) {
        auto [found, used] = generate_solvable(spec);
        inst = std::move(found);
        std::cerr << "seed " << used << '\n';
      } else {
        inst = generate_grid_instance(spec);
      }
      if (gen_out.empty()) {
        write_instance(std::cout, inst);
      } else {
        std::ofstream out(gen_out, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + gen_out);
        write_instance(out, inst);
      }
      return kOk;
    }

    if (*bsize) {
      if (etas.size() != grids.size()) throw UsageError("give one --eta per --grid");
      std::vector<SizeCell> cells;
      for (std::size_t i = 0; i < grids.size(); ++i) {
        auto [w, h] = grid_flag(grids[i]);
        cells.push_back({GridSpec{w, h, obstacles, 0, 0}, etas[i], agent_counts});
      }
      SizeReport rep = size_study(cells, encoding_list(encodings), seeds, heuristic);
      write_csv(std::cout, rep.aggregates);
      write_csv_file(rows_out, rep.rows);
      return kOk;
    }

    if (*brun) {
      std::vector<GridSpec> specs;
      for (const auto& g : grids) {
        auto [w, h] = grid_flag(g);
        specs.push_back(GridSpec{w, h, obstacles, 0, 0});
      }
      RuntimeOptions opts;
      opts.seeds = seeds;
      opts.max_agents = max_agents;
      opts.agent_step = agent_step;
      opts.driver.use_distance_heuristic = !no_heuristic;
      opts.driver.time_budget_seconds = timeout;
      opts.driver.solver = solver_flags(solver_cmd, timeout, engine);
      opts.filter.driver = opts.driver;
      RuntimeReport rep = runtime_study(specs, encoding_list(encodings), opts);
      write_csv(std::cout, rep.aggregates);
      write_csv_file(rows_out, rep.rows);
      write_csv_file(diffs_out, rep.differences);
      return kOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "cpfsat: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "cpfsat: " << e.what() << '\n';
    return kParse;
  } catch (const InputError& e) {
    std::cerr << "cpfsat: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "cpfsat: " << e.what() << '\n';
    return kSolverFailure;
  }
  return kUsage;
}

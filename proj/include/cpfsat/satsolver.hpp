#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>

#include "cpfsat/cnf.hpp"

namespace cpfsat {

struct SolverConfig {
  enum class Mode { kEmbedded, kExternal };
  /// In-process engine used by kEmbedded.
  enum class Engine { kCdcl, kDpll };
  Mode mode = Mode::kEmbedded;
  Engine engine = Engine::kCdcl;
  /// Shell command; `{cnf}` is replaced by the formula path (appended when
  /// the placeholder is missing).
  std::string command;
  double time_limit_seconds = 256.0;
  /// Empty means the system temporary directory.
  std::filesystem::path work_dir;

  /// Throws InputError when the time limit is not positive or an external
  /// command is missing.
  void check() const;
};

struct SatResult {
  enum class Status { kSat, kUnsat, kTimeout, kSolverError };
  Status status = Status::kSolverError;
  Assignment model;  // total over 1..var_count when kSat
  std::string diagnostic;

  bool sat() const { return status == Status::kSat; }
  bool unsat() const { return status == Status::kUnsat; }
};

std::string_view to_string(SatResult::Status status);

using Deadline = std::chrono::steady_clock::time_point;

/// Runs the configured back-end. A SAT answer is re-checked against every
/// clause; a model that falsifies one becomes kSolverError.
SatResult solve(const Cnf& cnf, const SolverConfig& cfg);

/// Complete DPLL: two-watched-literal unit propagation, chronological
/// backtracking, branching on the lowest-index open variable with FALSE
/// tried first. Variables that occur in no clause are fixed to FALSE up front.
/// Returns kTimeout only when a deadline is given and passes.
SatResult embedded_dpll(const Cnf& cnf, std::optional<Deadline> deadline = std::nullopt);

/// Conflict-driven search: first-UIP learning with non-chronological
/// backjumping, activity-ordered branching with saved phases (FALSE
/// initially), Luby restarts and size-based pruning of learned clauses.
SatResult embedded_cdcl(const Cnf& cnf, std::optional<Deadline> deadline = std::nullopt);

/// Runs an external SAT-competition solver on a DIMACS file it writes to
/// cfg.work_dir, killing the child at the deadline.
SatResult run_external(const Cnf& cnf, const SolverConfig& cfg);

}  // namespace cpfsat

#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cpfsat/cnf.hpp"
#include "cpfsat/encodings.hpp"
#include "cpfsat/model.hpp"
#include "cpfsat/satsolver.hpp"

namespace cpfsat {

struct PrecheckResult {
  bool unsolvable = false;
  std::string reason;
};

/// Necessary conditions only: a clean result does not imply solvability.
/// Flags agents whose start and goal lie in different components, and
/// components without a vacant vertex whose agents would have to move.
PrecheckResult precheck(const CpfInstance& inst);

struct DriverConfig {
  EncodingKind encoding = EncodingKind::kSimplified;
  bool use_distance_heuristic = true;
  int eta_start = 1;
  /// Defaults to n * mu + n.
  std::optional<int> eta_cap;
  /// Wall-clock budget for the whole loop, encoding included.
  double time_budget_seconds = 256.0;
  /// time_limit_seconds is overridden by the remaining budget per call.
  SolverConfig solver;
};

int default_eta_cap(const CpfInstance& inst);

struct Optimal {
  int makespan;
  Solution solution;
  /// The query at makespan - 1 was answered UNSAT (or is trivially so).
  bool unsat_below;
};

struct Unsolvable {
  std::string reason;
};

struct Unknown {
  int eta;  // last bound attempted
  std::string reason;
  bool solver_error = false;
};

using SolveOutcome = std::variant<Optimal, Unsolvable, Unknown>;

struct QueryRecord {
  int eta;
  SatResult::Status status;
  EncodingStats stats;
  double seconds;
};

struct SolveReport {
  SolveOutcome outcome;
  std::vector<QueryRecord> queries;
  double seconds = 0.0;
};

/// Sequential increasing search: encode and solve eta = eta_start, eta_start
/// + 1, ... until the first satisfiable bound, the cap, or the budget.
SolveReport find_optimal(const CpfInstance& inst, const DriverConfig& cfg = {});

std::string describe(const SolveOutcome& outcome);

}  // namespace cpfsat

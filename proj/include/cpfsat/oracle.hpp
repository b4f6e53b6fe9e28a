#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "cpfsat/model.hpp"

namespace cpfsat {

/// The joint state space outgrew the configured budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleResult {
  /// Optimal makespan, or nullopt when the goal is not reached within the cap.
  std::optional<int> makespan;
  /// An optimal solution whenever makespan is set.
  Solution witness;
  /// Distinct joint states discovered.
  std::int64_t states = 0;

  bool solved() const { return makespan.has_value(); }
};

/// Breadth-first search over joint arrangements. One step moves any subset of
/// agents at once: each moving agent follows an edge into a vertex that is
/// vacant before the step, and no two agents share a target.
OracleResult oracle_makespan(const CpfInstance& inst, int cap, std::int64_t state_budget = 4'000'000);

/// True iff the instance has a solution of makespan at most eta.
bool oracle_decision(const CpfInstance& inst, int eta, std::int64_t state_budget = 4'000'000);

}  // namespace cpfsat

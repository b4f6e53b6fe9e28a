#pragma once
// Test-side helpers. Everything here is written without calling the library
// routine it is used to check.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cpfsat/bench.hpp"
#include "cpfsat/model.hpp"

namespace testkit {

using cpfsat::CpfInstance;

// Path v1-v2-v3, a1: v1 -> v3.
CpfInstance p3();
// Cycle v1..v4, a1: v1 -> v2, a2: v2 -> v3.
CpfInstance c4();
// Path v1-v2 filled by two agents that swap.
CpfInstance swap2();
// Two disjoint edges, one agent crossing each.
CpfInstance parallel_pairs();

// Grid between 3x3 and 4x4 with 0..3 obstacles and 1..3 agents; the
// instance with index i of a fixed seeded sequence.
CpfInstance small_grid(int i);
// The small_grid family restricted to instances with the given agent count.
cpfsat::GridSpec small_grid_spec(int i);

struct Dimacs {
  int vars = -1;
  int declared_clauses = -1;
  std::vector<std::vector<int>> clauses;
};
// Straightforward tokenizer; throws std::runtime_error on anything odd.
Dimacs parse_dimacs(const std::string& text);

// Exhaustive satisfiability for up to ~22 variables.
bool brute_force_sat(const std::vector<std::vector<int>>& clauses, int vars);

// Conditions (1)-(3) on raw location vectors, independent of Arrangement.
bool raw_step_ok(const std::vector<int>& before, const std::vector<int>& after,
                 const std::vector<std::vector<int>>& adjacency);
// Whole plan check on raw vectors (start, goal, each step, injectivity).
bool raw_plan_ok(const std::vector<std::vector<int>>& steps, const CpfInstance& inst);

std::vector<std::vector<int>> adjacency(const CpfInstance& inst);

// Joint-state BFS by exhaustive enumeration of every target tuple; only for
// tiny instances.
std::optional<int> naive_makespan(const CpfInstance& inst, int cap);

}  // namespace testkit

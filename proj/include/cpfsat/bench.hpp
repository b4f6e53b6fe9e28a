#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cpfsat/driver.hpp"
#include "cpfsat/encodings.hpp"
#include "cpfsat/model.hpp"

namespace cpfsat {

/// Seedable generator with a fixed output sequence on every platform:
/// std::mt19937_64 plus rejection sampling for bounded integers (draws below
/// 2^64 mod bound are rejected, the rest reduced modulo bound).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

struct GridSpec {
  int width = 4;
  int height = 4;
  double obstacle_fraction = 0.20;
  int agents = 1;
  std::uint64_t seed = 0;

  int cells() const { return width * height; }
  int obstacle_count() const;
  std::string label() const;  // e.g. "6x6"
};

/// Obstacles are cells sampled without replacement; the remaining cells become
/// vertices in row-major order joined by 4-neighborhood edges. Starts and
/// then goals are drawn one by one from the still unoccupied vertices.
CpfInstance generate_grid_instance(const GridSpec& spec);

struct FilterOptions {
  /// Instances whose joint state space is at most this large go to the oracle;
  /// larger ones are run through the driver.
  double oracle_state_limit = 2e6;
  DriverConfig driver;
};

bool filter_solvable(const CpfInstance& inst, const FilterOptions& opts = {});

/// Tries seeds spec.seed, spec.seed + 1, ... until the instance passes the
/// filter. Returns the instance and the seed that produced it.
std::pair<CpfInstance, std::uint64_t> generate_solvable(GridSpec spec, const FilterOptions& opts = {},
                                                        int max_attempts = 1000);

struct SizeCell {
  GridSpec grid;  // agents and seed are overridden per row
  int eta;
  std::vector<int> agent_counts;
};

struct SizeRow {
  std::string grid;
  int agents;
  std::uint64_t seed;
  EncodingKind encoding;
  EncodingStats stats;
};

struct SizeAggregate {
  std::string grid;
  int agents;
  EncodingKind encoding;
  int instances = 0;
  double variables = 0, clauses = 0, ratio = 0, length = 0;  // means
};

struct SizeReport {
  std::vector<SizeRow> rows;
  std::vector<SizeAggregate> aggregates;
};

/// Encodes `seeds` instances per (grid, agent count) with every listed
/// encoding at the cell's fixed eta, without solving.
SizeReport size_study(const std::vector<SizeCell>& cells, const std::vector<EncodingKind>& encodings, int seeds = 10,
                      bool distance_heuristic = false);
std::vector<SizeAggregate> aggregate(const std::vector<SizeRow>& rows);

struct RuntimeRow {
  std::string grid;
  int agents;
  std::uint64_t seed;
  EncodingKind encoding;
  bool solved;  // false: budget or cap missed (censored)
  double seconds;
  int makespan;
  int total_moves;
};

struct RuntimeAggregate {
  std::string grid;
  int agents;
  EncodingKind encoding;
  int instances = 0;
  int solved = 0;
  double mean_seconds = 0, median_seconds = 0;
  double mean_makespan = 0, mean_total_moves = 0;  // over solved instances
};

struct MoveDifference {
  EncodingKind encoding;
  std::vector<int> sorted;  // total_moves(encoding) - total_moves(SIMPLIFIED)
};

struct RuntimeReport {
  std::vector<RuntimeRow> rows;
  std::vector<RuntimeAggregate> aggregates;
  std::vector<MoveDifference> differences;
};

struct RuntimeOptions {
  int seeds = 10;
  int max_agents = 64;
  int agent_step = 1;
  FilterOptions filter;
  DriverConfig driver;  // encoding is overridden per row
};

/// For each grid, agent counts grow until no encoding solves all instances of
/// a cell within the budget. Encodings that miss a cell stop there.
RuntimeReport runtime_study(const std::vector<GridSpec>& grids, const std::vector<EncodingKind>& encodings,
                            const RuntimeOptions& opts = {});
std::vector<RuntimeAggregate> aggregate(const std::vector<RuntimeRow>& rows);
std::vector<MoveDifference> move_differences(const std::vector<RuntimeRow>& rows,
                                             const std::vector<EncodingKind>& encodings);

void write_csv(std::ostream& out, const std::vector<SizeRow>& rows);
void write_csv(std::ostream& out, const std::vector<SizeAggregate>& aggs);
void write_csv(std::ostream& out, const std::vector<RuntimeRow>& rows);
void write_csv(std::ostream& out, const std::vector<RuntimeAggregate>& aggs);
void write_csv(std::ostream& out, const std::vector<MoveDifference>& diffs);

}  // namespace cpfsat

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cpfsat {

// Vertices and agents are 0-based internally; every text format is 1-based.
using VertexId = std::int32_t;
using AgentId = std::int32_t;

inline constexpr VertexId kNoVertex = -1;
inline constexpr AgentId kNoAgent = -1;

/// Raised when an operation receives structurally inconsistent input.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by the text readers; carries the 1-based offending line.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

struct Edge {
  VertexId u;
  VertexId v;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected simple graph. Edges are stored canonically (u < v, sorted) and
/// every neighbor list is ascending, which fixes the neighbor ordering: the
/// k-th entry of neighbors(v) has rank k + 1.
class Graph {
 public:
  Graph() = default;
  /// Throws InputError on self-loops, duplicate edges or out-of-range ids.
  Graph(int vertex_count, std::vector<Edge> edges);

  int vertex_count() const { return vertex_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  std::span<const Edge> edges() const { return edges_; }

  std::span<const VertexId> neighbors(VertexId v) const;
  int degree(VertexId v) const { return static_cast<int>(neighbors(v).size()); }
  bool adjacent(VertexId u, VertexId v) const { return neighbor_rank(u, v) != 0; }

  /// Rank of u among the neighbors of v in 1..deg(v), or 0 if not adjacent.
  int neighbor_rank(VertexId v, VertexId u) const;
  /// Inverse of neighbor_rank; rank must lie in 1..deg(v).
  VertexId neighbor_at(VertexId v, int rank) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.vertex_count_ == b.vertex_count_ && a.edges_ == b.edges_;
  }

 private:
  int vertex_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> offsets_{0};
  std::vector<VertexId> adjacency_;
};

/// Injective placement of agents onto vertices together with its inverse.
class Arrangement {
 public:
  Arrangement() = default;
  /// locations[a] is the vertex of agent a. Throws InputError when two agents
  /// share a vertex or a location is out of range.
  Arrangement(int vertex_count, std::vector<VertexId> locations);

  int vertex_count() const { return static_cast<int>(occupant_.size()); }
  int agent_count() const { return static_cast<int>(location_.size()); }
  VertexId location(AgentId a) const { return location_.at(a); }
  /// kNoAgent for a vacant vertex.
  AgentId occupant(VertexId v) const { return occupant_.at(v); }
  bool vacant(VertexId v) const { return occupant(v) == kNoAgent; }
  std::span<const VertexId> locations() const { return location_; }

  friend bool operator==(const Arrangement&, const Arrangement&) = default;

 private:
  std::vector<VertexId> location_;
  std::vector<AgentId> occupant_;
};

struct CpfInstance {
  Graph graph;
  Arrangement initial;
  Arrangement goal;

  /// Checks the cross-field invariants; throws InputError.
  CpfInstance(Graph g, Arrangement start, Arrangement target);
  CpfInstance() = default;

  int vertex_count() const { return graph.vertex_count(); }
  int agent_count() const { return initial.agent_count(); }

  friend bool operator==(const CpfInstance&, const CpfInstance&) = default;
};

struct Solution {
  std::vector<Arrangement> steps;
  int makespan() const { return static_cast<int>(steps.size()) - 1; }
};

struct SolutionMetrics {
  int makespan = 0;
  std::int64_t total_moves = 0;
  friend bool operator==(const SolutionMetrics&, const SolutionMetrics&) = default;
};

/// Outcome of a validity check. Converts to bool; on failure `step` is the
/// index of the first offending transition (or -1 for boundary mismatches).
struct Validation {
  bool ok = true;
  int step = -1;
  std::string diagnostic;
  explicit operator bool() const { return ok; }
};

/// Conditions (1)-(3): stay or traverse an edge, enter only vertices vacant in
/// `before`, and keep `after` injective. Throws InputError when the
/// arrangements disagree on agent or vertex count.
Validation check_transition(const Arrangement& before, const Arrangement& after,
                            const Graph& graph);
bool validate_transition(const Arrangement& before, const Arrangement& after,
                         const Graph& graph);

Validation validate_solution(const Solution& sol, const CpfInstance& inst);

SolutionMetrics metrics(const Solution& sol);

/// Keeps every agent at its initial vertex for `makespan` steps.
Solution identity_solution(const CpfInstance& inst, int makespan = 0);

// Instance text format:
//   cpf <n> <m> <mu>
//   e <u> <v>                (m lines)
//   a <id> <start> <goal>    (mu lines)
// '#' starts a comment; ids are 1-based.
CpfInstance read_instance(std::istream& in);
CpfInstance read_instance(std::string_view text);
CpfInstance read_instance_file(const std::string& path);
void write_instance(std::ostream& out, const CpfInstance& inst);
std::string write_instance(const CpfInstance& inst);

// Solution text format: one line per step, `t <l>: a1@v ... amu@v`.
void write_solution(std::ostream& out, const Solution& sol);
std::string write_solution(const Solution& sol);
Solution read_solution(std::istream& in, int vertex_count);
Solution read_solution(std::string_view text, int vertex_count);

}  // namespace cpfsat

#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "cpfsat/model.hpp"

namespace cpfsat {

inline constexpr int kUnreachable = std::numeric_limits<int>::max();

struct TimeNode {
  VertexId vertex;
  int layer;
  friend bool operator==(const TimeNode&, const TimeNode&) = default;
};

struct TimeArc {
  TimeNode from;
  TimeNode to;
  friend bool operator==(const TimeArc&, const TimeArc&) = default;
};

/// Layered digraph with eta + 1 copies of the vertex set. Arcs go from layer l
/// to l + 1 along each edge in both directions, plus one wait arc per vertex.
/// Encoders never build this; it exists for tests and diagnostics.
class TimeExpansion {
 public:
  TimeExpansion(Graph base, int eta);

  const Graph& base() const { return base_; }
  int eta() const { return eta_; }
  int layer_count() const { return eta_ + 1; }
  std::int64_t node_count() const;
  std::int64_t arc_count() const;

  bool has_arc(TimeNode from, TimeNode to) const;
  std::vector<TimeNode> successors(TimeNode node) const;
  std::vector<TimeArc> arcs() const;

 private:
  Graph base_;
  int eta_;
};

TimeExpansion expand(const Graph& graph, int eta);

/// Unweighted shortest-path lengths from `source`; kUnreachable elsewhere.
std::vector<int> bfs_distances(const Graph& graph, VertexId source);

/// Per-agent earliest and latest layer at which a vertex can lie on the
/// agent's trajectory.
///
/// In Exp_T(G, eta) every vertex has a wait arc, so [v, l] is reachable from
/// [s, 0] iff dist_G(s, v) <= l, and [g, eta] is reachable from [v, l] iff
/// dist_G(v, g) <= eta - l. Two BFS passes in G per agent therefore give the
/// exact reachability in the expansion.
class ReachWindow {
 public:
  ReachWindow(const CpfInstance& inst, int eta);

  int eta() const { return eta_; }
  int agent_count() const { return static_cast<int>(forward_.size()); }
  int forward(AgentId a, VertexId v) const { return forward_[a][v]; }
  int backward(AgentId a, VertexId v) const { return backward_[a][v]; }

  /// True iff agent a may occupy v at layer l.
  bool allows(AgentId a, VertexId v, int layer) const;
  std::int64_t excluded_count() const;

 private:
  int eta_;
  std::vector<std::vector<int>> forward_;
  std::vector<std::vector<int>> backward_;
};

ReachWindow reach_windows(const CpfInstance& inst, int eta);

/// paths[i][l] is the vertex of path i at layer l.
using PathCollection = std::vector<std::vector<VertexId>>;

PathCollection to_paths(const Solution& sol);
/// Rebuilds the step sequence from per-agent paths. Throws InputError if the
/// layers do not form arrangements (two paths share a node).
Solution to_solution(const PathCollection& paths, int vertex_count);

/// True iff the paths are arc-consistent in Exp_T(G, eta), pairwise vertex
/// disjoint, non-overlapping, and path i joins [start_i, 0] to [goal_i, eta].
/// Throws InputError on a path of the wrong length or a wrong path count.
bool check_paths(const PathCollection& paths, const CpfInstance& inst, int eta);

}  // namespace cpfsat

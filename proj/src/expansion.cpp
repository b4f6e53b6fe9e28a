#include "cpfsat/expansion.hpp"

#include <deque>

namespace cpfsat {

TimeExpansion::TimeExpansion(Graph base, int eta) : base_(std::move(base)), eta_(eta) {
  if (eta < 0) throw InputError("negative makespan bound");
}

std::int64_t TimeExpansion::node_count() const {
  return static_cast<std::int64_t>(layer_count()) * base_.vertex_count();
}

std::int64_t TimeExpansion::arc_count() const {
  return static_cast<std::int64_t>(eta_) * (2LL * base_.edge_count() + base_.vertex_count());
}

bool TimeExpansion::has_arc(TimeNode from, TimeNode to) const {
  if (from.layer < 0 || from.layer >= eta_ || to.layer != from.layer + 1) return false;
  if (from.vertex < 0 || from.vertex >= base_.vertex_count()) return false;
  if (to.vertex < 0 || to.vertex >= base_.vertex_count()) return false;
  return from.vertex == to.vertex || base_.adjacent(from.vertex, to.vertex);
}

std::vector<TimeNode> TimeExpansion::successors(TimeNode node) const {
  std::vector<TimeNode> out;
  if (node.layer >= eta_) return out;
  out.push_back({node.vertex, node.layer + 1});
  for (VertexId u : base_.neighbors(node.vertex)) out.push_back({u, node.layer + 1});
  return out;
}

std::vector<TimeArc> TimeExpansion::arcs() const {
  std::vector<TimeArc> out;
  out.reserve(static_cast<std::size_t>(arc_count()));
  for (int l = 0; l < eta_; ++l)
    for (VertexId v = 0; v < base_.vertex_count(); ++v)
      for (TimeNode s : successors({v, l})) out.push_back({{v, l}, s});
  return out;
}

TimeExpansion expand(const Graph& graph, int eta) { return TimeExpansion(graph, eta); }

std::vector<int> bfs_distances(const Graph& graph, VertexId source) {
  std::vector<int> dist(graph.vertex_count(), kUnreachable);
  std::deque<VertexId> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    for (VertexId u : graph.neighbors(v)) {
      if (dist[u] != kUnreachable) continue;
      dist[u] = dist[v] + 1;
      queue.push_back(u);
    }
  }
  return dist;
}

ReachWindow::ReachWindow(const CpfInstance& inst, int eta) : eta_(eta) {
  for (AgentId a = 0; a < inst.agent_count(); ++a) {
    forward_.push_back(bfs_distances(inst.graph, inst.initial.location(a)));
    backward_.push_back(bfs_distances(inst.graph, inst.goal.location(a)));
  }
}

bool ReachWindow::allows(AgentId a, VertexId v, int layer) const {
  int f = forward_[a][v];
  int b = backward_[a][v];
  return f != kUnreachable && b != kUnreachable && f <= layer && b <= eta_ - layer;
}

std::int64_t ReachWindow::excluded_count() const {
  std::int64_t count = 0;
  for (AgentId a = 0; a < agent_count(); ++a)
    for (VertexId v = 0; v < static_cast<VertexId>(forward_[a].size()); ++v)
      for (int l = 0; l <= eta_; ++l) count += !allows(a, v, l);
  return count;
}

ReachWindow reach_windows(const CpfInstance& inst, int eta) { return ReachWindow(inst, eta); }

PathCollection to_paths(const Solution& sol) {
  PathCollection paths;
  if (sol.steps.empty()) return paths;
  paths.assign(sol.steps.front().agent_count(), {});
  for (const Arrangement& step : sol.steps)
    for (AgentId a = 0; a < step.agent_count(); ++a) paths[a].push_back(step.location(a));
  return paths;
}

Solution to_solution(const PathCollection& paths, int vertex_count) {
  std::size_t layers = paths.empty() ? 1 : paths.front().size();
  Solution sol;
  for (std::size_t l = 0; l < layers; ++l) {
    std::vector<VertexId> locs;
    for (const auto& p : paths) {
      if (p.size() != layers) throw InputError("paths of unequal length");
      locs.push_back(p[l]);
    }
    sol.steps.emplace_back(vertex_count, std::move(locs));
  }
  return sol;
}

bool check_paths(const PathCollection& paths, const CpfInstance& inst, int eta) {
  const Graph& g = inst.graph;
  if (static_cast<int>(paths.size()) != inst.agent_count()) throw InputError("one path per agent required");
  for (const auto& p : paths)
    if (static_cast<int>(p.size()) != eta + 1) throw InputError("path length must be eta + 1");

  for (std::size_t i = 0; i < paths.size(); ++i) {
    const auto& p = paths[i];
    if (p.front() != inst.initial.location(static_cast<AgentId>(i))) return false;
    if (p.back() != inst.goal.location(static_cast<AgentId>(i))) return false;
    for (int l = 0; l < eta; ++l) {
      if (p[l] < 0 || p[l] >= g.vertex_count()) return false;
      if (p[l] != p[l + 1] && !g.adjacent(p[l], p[l + 1])) return false;
    }
  }

  std::vector<int> stamp(g.vertex_count(), -1);
  for (int l = 0; l <= eta; ++l) {
    // Vertex disjointness within the layer.
    for (const auto& p : paths) {
      if (stamp[p[l]] == l) return false;
      stamp[p[l]] = l;
    }
  }
  std::vector<char> source(g.vertex_count());
  for (int l = 0; l < eta; ++l) {
    // Endpoints of non-trivial arcs between l and l + 1 must not be shared.
    std::fill(source.begin(), source.end(), 0);
    for (const auto& p : paths)
      if (p[l] != p[l + 1]) source[p[l]] = 1;
    for (const auto& p : paths)
      if (p[l] != p[l + 1] && source[p[l + 1]]) return false;
  }
  return true;
}

}  // namespace cpfsat

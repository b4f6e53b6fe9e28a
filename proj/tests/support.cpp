#include "support.hpp"

#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace testkit {

using namespace cpfsat;

namespace {

CpfInstance make(int n, std::vector<Edge> edges, std::vector<VertexId> s, std::vector<VertexId> g) {
  return CpfInstance(Graph(n, std::move(edges)), Arrangement(n, std::move(s)), Arrangement(n, std::move(g)));
}

}  // namespace

CpfInstance p3() { return make(3, {{0, 1}, {1, 2}}, {0}, {2}); }
CpfInstance c4() { return make(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}, {0, 1}, {1, 2}); }
CpfInstance swap2() { return make(2, {{0, 1}}, {0, 1}, {1, 0}); }
CpfInstance parallel_pairs() { return make(4, {{0, 1}, {2, 3}}, {0, 2}, {1, 3}); }

GridSpec small_grid_spec(int i) {
  GridSpec spec;
  // cycle through 3x3, 3x4, 4x3, 4x4
  static const int dims[4][2] = {{3, 3}, {3, 4}, {4, 3}, {4, 4}};
  spec.width = dims[i % 4][0];
  spec.height = dims[i % 4][1];
  int obstacles = (i / 4) % 4;
  spec.obstacle_fraction = (obstacles + 0.5) / spec.cells();
  spec.agents = 1 + (i / 16) % 3;
  spec.seed = 1000 + static_cast<std::uint64_t>(i);
  return spec;
}

CpfInstance small_grid(int i) { return generate_grid_instance(small_grid_spec(i)); }

Dimacs parse_dimacs(const std::string& text) {
  Dimacs d;
  std::istringstream in(text);
  std::string line;
  std::vector<int> cur;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream ls(line);
    if (line[0] == 'p') {
      std::string p, cnf;
      ls >> p >> cnf >> d.vars >> d.declared_clauses;
      if (cnf != "cnf" || !ls) throw std::runtime_error("bad header");
      continue;
    }
    long x;
    while (ls >> x) {
      if (x == 0) {
        d.clauses.push_back(cur);
        cur.clear();
      } else {
        if (x > d.vars || -x > d.vars) throw std::runtime_error("literal out of range");
        cur.push_back(static_cast<int>(x));
      }
    }
  }
  if (!cur.empty()) throw std::runtime_error("unterminated clause");
  return d;
}

bool brute_force_sat(const std::vector<std::vector<int>>& clauses, int vars) {
  if (vars > 24) throw std::runtime_error("too many variables for brute force");
  for (std::uint64_t m = 0; m < (1ULL << vars); ++m) {
    bool all = true;
    for (const auto& c : clauses) {
      bool any = false;
      for (int lit : c) {
        int v = lit > 0 ? lit : -lit;
        bool val = (m >> (v - 1)) & 1;
        if ((lit > 0) == val) {
          any = true;
          break;
        }
      }
      if (!any) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

std::vector<std::vector<int>> adjacency(const CpfInstance& inst) {
  std::vector<std::vector<int>> adj(inst.vertex_count());
  for (const Edge& e : inst.graph.edges()) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  return adj;
}

bool raw_step_ok(const std::vector<int>& before, const std::vector<int>& after,
                 const std::vector<std::vector<int>>& adj) {
  std::set<int> occupied(before.begin(), before.end());
  std::set<int> targets;
  for (std::size_t a = 0; a < before.size(); ++a) {
    int from = before[a], to = after[a];
    if (!targets.insert(to).second) return false;
    if (from == to) continue;
    bool edge = false;
    for (int w : adj[from]) edge |= (w == to);
    if (!edge) return false;
    if (occupied.count(to)) return false;
  }
  return true;
}

bool raw_plan_ok(const std::vector<std::vector<int>>& steps, const CpfInstance& inst) {
  if (steps.empty()) return false;
  auto adj = adjacency(inst);
  for (const auto& s : steps) {
    std::set<int> seen(s.begin(), s.end());
    if (seen.size() != s.size()) return false;
  }
  for (int a = 0; a < inst.agent_count(); ++a) {
    if (steps.front()[a] != inst.initial.location(a)) return false;
    if (steps.back()[a] != inst.goal.location(a)) return false;
  }
  for (std::size_t l = 0; l + 1 < steps.size(); ++l)
    if (!raw_step_ok(steps[l], steps[l + 1], adj)) return false;
  return true;
}

std::optional<int> naive_makespan(const CpfInstance& inst, int cap) {
  const int mu = inst.agent_count();
  const int n = inst.vertex_count();
  auto adj = adjacency(inst);
  std::vector<int> start(mu), goal(mu);
  for (int a = 0; a < mu; ++a) {
    start[a] = inst.initial.location(a);
    goal[a] = inst.goal.location(a);
  }
  std::set<std::vector<int>> seen{start};
  std::vector<std::vector<int>> frontier{start};
  for (int depth = 0; depth <= cap; ++depth) {
    for (const auto& s : frontier)
      if (s == goal) return depth;
    std::vector<std::vector<int>> next;
    for (const auto& s : frontier) {
      // every tuple in V^mu, filtered by the raw step check
      std::vector<int> t(mu, 0);
      while (true) {
        if (raw_step_ok(s, t, adj) && seen.insert(t).second) next.push_back(t);
        int k = 0;
        while (k < mu && ++t[k] == n) t[k++] = 0;
        if (k == mu) break;
      }
    }
    frontier = std::move(next);
  }
  return std::nullopt;
}

}  // namespace testkit

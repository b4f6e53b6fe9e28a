#include "cpfsat/model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace cpfsat {

ParseError::ParseError(int line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

// ---------------------------------------------------------------------------
// Graph

Graph::Graph(int vertex_count, std::vector<Edge> edges) : vertex_count_(vertex_count) {
  if (vertex_count < 0) throw InputError("negative vertex count");
  for (Edge& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= vertex_count || e.v >= vertex_count)
      throw InputError("edge endpoint out of range");
    if (e.u == e.v) throw InputError("self-loop on vertex " + std::to_string(e.u + 1));
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  if (auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end())
    throw InputError("duplicate edge " + std::to_string(dup->u + 1) + " " +
                     std::to_string(dup->v + 1));
  edges_ = std::move(edges);

  std::vector<int> degree(vertex_count, 0);
  for (const Edge& e : edges_) {
    ++degree[e.u];
    ++degree[e.v];
  }
  offsets_.assign(vertex_count + 1, 0);
  for (int v = 0; v < vertex_count; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
  adjacency_.assign(offsets_.back(), kNoVertex);
  std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
  for (const Edge& e : edges_) {
    adjacency_[fill[e.u]++] = e.v;
    adjacency_[fill[e.v]++] = e.u;
  }
  for (int v = 0; v < vertex_count; ++v)
    std::sort(adjacency_.begin() + offsets_[v], adjacency_.begin() + offsets_[v + 1]);
}

std::span<const VertexId> Graph::neighbors(VertexId v) const {
  if (v < 0 || v >= vertex_count_) throw InputError("vertex out of range");
  return std::span<const VertexId>(adjacency_).subspan(offsets_[v], offsets_[v + 1] - offsets_[v]);
}

int Graph::neighbor_rank(VertexId v, VertexId u) const {
  auto nb = neighbors(v);
  auto it = std::lower_bound(nb.begin(), nb.end(), u);
  if (it == nb.end() || *it != u) return 0;
  return static_cast<int>(it - nb.begin()) + 1;
}

VertexId Graph::neighbor_at(VertexId v, int rank) const {
  auto nb = neighbors(v);
  if (rank < 1 || rank > static_cast<int>(nb.size())) throw InputError("neighbor rank out of range");
  return nb[rank - 1];
}

// ---------------------------------------------------------------------------
// Arrangement / instance

Arrangement::Arrangement(int vertex_count, std::vector<VertexId> locations)
    : location_(std::move(locations)), occupant_(vertex_count, kNoAgent) {
  for (AgentId a = 0; a < static_cast<AgentId>(location_.size()); ++a) {
    VertexId v = location_[a];
    if (v < 0 || v >= vertex_count)
      throw InputError("agent " + std::to_string(a + 1) + " placed outside the graph");
    if (occupant_[v] != kNoAgent)
      throw InputError("agents " + std::to_string(occupant_[v] + 1) + " and " +
                       std::to_string(a + 1) + " share vertex " + std::to_string(v + 1));
    occupant_[v] = a;
  }
}

CpfInstance::CpfInstance(Graph g, Arrangement start, Arrangement target)
    : graph(std::move(g)), initial(std::move(start)), goal(std::move(target)) {
  if (initial.vertex_count() != graph.vertex_count() || goal.vertex_count() != graph.vertex_count())
    throw InputError("arrangement vertex count differs from graph");
  if (initial.agent_count() != goal.agent_count())
    throw InputError("initial and goal place different numbers of agents");
}

// ---------------------------------------------------------------------------
// Validity

Validation check_transition(const Arrangement& before, const Arrangement& after,
                            const Graph& graph) {
  if (before.agent_count() != after.agent_count())
    throw InputError("arrangements place different agent sets");
  if (before.vertex_count() != graph.vertex_count() || after.vertex_count() != graph.vertex_count())
    throw InputError("arrangement does not match graph");

  std::vector<char> taken(graph.vertex_count(), 0);
  for (AgentId a = 0; a < after.agent_count(); ++a) {
    VertexId from = before.location(a);
    VertexId to = after.location(a);
    std::string who = "agent a" + std::to_string(a + 1);
    if (taken[to]++)
      return {false, -1, "condition (3): two agents enter v" + std::to_string(to + 1)};
    if (from == to) continue;
    if (!graph.adjacent(from, to))
      return {false, -1,
              "condition (1): " + who + " jumps v" + std::to_string(from + 1) + " -> v" +
                  std::to_string(to + 1) + " without an edge"};
    if (!before.vacant(to))
      return {false, -1,
              "condition (2): " + who + " enters v" + std::to_string(to + 1) +
                  " occupied by a" + std::to_string(before.occupant(to) + 1)};
  }
  return {};
}

bool validate_transition(const Arrangement& before, const Arrangement& after, const Graph& graph) {
  return check_transition(before, after, graph).ok;
}

Validation validate_solution(const Solution& sol, const CpfInstance& inst) {
  if (sol.steps.empty()) return {false, -1, "empty step sequence"};
  for (const Arrangement& s : sol.steps) {
    if (s.agent_count() != inst.agent_count() || s.vertex_count() != inst.vertex_count())
      return {false, -1, "step does not match instance dimensions"};
  }
  if (sol.steps.front() != inst.initial) return {false, -1, "first step differs from initial arrangement"};
  if (sol.steps.back() != inst.goal) return {false, -1, "last step differs from goal arrangement"};
  for (std::size_t l = 0; l + 1 < sol.steps.size(); ++l) {
    Validation v = check_transition(sol.steps[l], sol.steps[l + 1], inst.graph);
    if (!v) {
      v.step = static_cast<int>(l);
      v.diagnostic = "step " + std::to_string(l) + " -> " + std::to_string(l + 1) + ": " + v.diagnostic;
      return v;
    }
  }
  return {};
}

SolutionMetrics metrics(const Solution& sol) {
  SolutionMetrics m;
  m.makespan = std::max(0, sol.makespan());
  for (std::size_t l = 0; l + 1 < sol.steps.size(); ++l) {
    auto a = sol.steps[l].locations();
    auto b = sol.steps[l + 1].locations();
    for (std::size_t i = 0; i < a.size(); ++i) m.total_moves += (a[i] != b[i]);
  }
  return m;
}

Solution identity_solution(const CpfInstance& inst, int makespan) {
  return Solution{std::vector<Arrangement>(static_cast<std::size_t>(makespan) + 1, inst.initial)};
}

// ---------------------------------------------------------------------------
// Text formats

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

long parse_int(std::string_view tok, int line, const char* what) {
  long value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(line, std::string("expected integer ") + what + ", got '" + std::string(tok) + "'");
  return value;
}

VertexId parse_vertex(std::string_view tok, int n, int line) {
  long v = parse_int(tok, line, "vertex id");
  if (v < 1 || v > n)
    throw ParseError(line, "dangling vertex id " + std::to_string(v) + " (graph has " +
                               std::to_string(n) + " vertices)");
  return static_cast<VertexId>(v - 1);
}

}  // namespace

CpfInstance read_instance(std::istream& in) {
  std::string raw;
  int line_no = 0;
  bool have_header = false;
  int n = 0, m = 0, mu = 0;
  std::vector<Edge> edges;
  std::vector<VertexId> start, goal;
  std::vector<char> seen_agent;
  std::vector<AgentId> start_owner, goal_owner;
  int agents_read = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    auto tok = tokenize(raw);
    if (tok.empty()) continue;
    if (!have_header) {
      if (tok.size() != 4 || tok[0] != "cpf") throw ParseError(line_no, "expected header 'cpf <n> <m> <mu>'");
      long nn = parse_int(tok[1], line_no, "n");
      long mm = parse_int(tok[2], line_no, "m");
      long uu = parse_int(tok[3], line_no, "mu");
      if (nn < 1) throw ParseError(line_no, "graph needs at least one vertex");
      if (mm < 0 || uu < 0) throw ParseError(line_no, "negative count in header");
      if (uu > nn) throw ParseError(line_no, "more agents than vertices");
      n = static_cast<int>(nn);
      m = static_cast<int>(mm);
      mu = static_cast<int>(uu);
      start.assign(mu, kNoVertex);
      goal.assign(mu, kNoVertex);
      seen_agent.assign(mu, 0);
      start_owner.assign(n, kNoAgent);
      goal_owner.assign(n, kNoAgent);
      have_header = true;
      continue;
    }
    if (tok[0] == "e") {
      if (tok.size() != 3) throw ParseError(line_no, "expected 'e <u> <v>'");
      if (static_cast<int>(edges.size()) == m) throw ParseError(line_no, "more edges than declared");
      VertexId u = parse_vertex(tok[1], n, line_no);
      VertexId v = parse_vertex(tok[2], n, line_no);
      if (u == v) throw ParseError(line_no, "self-loop");
      edges.push_back({u, v});
    } else if (tok[0] == "a") {
      if (tok.size() != 4) throw ParseError(line_no, "expected 'a <id> <start> <goal>'");
      long id = parse_int(tok[1], line_no, "agent id");
      if (id < 1 || id > mu) throw ParseError(line_no, "agent id " + std::to_string(id) + " out of range");
      AgentId a = static_cast<AgentId>(id - 1);
      if (seen_agent[a]) throw ParseError(line_no, "agent " + std::to_string(id) + " listed twice");
      seen_agent[a] = 1;
      VertexId s = parse_vertex(tok[2], n, line_no);
      VertexId g = parse_vertex(tok[3], n, line_no);
      if (start_owner[s] != kNoAgent)
        throw ParseError(line_no, "duplicate agent placement: start vertex " + std::to_string(s + 1) +
                                      " already holds agent " + std::to_string(start_owner[s] + 1));
      if (goal_owner[g] != kNoAgent)
        throw ParseError(line_no, "duplicate agent placement: goal vertex " + std::to_string(g + 1) +
                                      " already holds agent " + std::to_string(goal_owner[g] + 1));
      start_owner[s] = a;
      goal_owner[g] = a;
      start[a] = s;
      goal[a] = g;
      ++agents_read;
    } else {
      throw ParseError(line_no, "unknown record '" + std::string(tok[0]) + "'");
    }
  }
  if (!have_header) throw ParseError(line_no, "missing header");
  if (static_cast<int>(edges.size()) != m)
    throw ParseError(line_no, "declared " + std::to_string(m) + " edges, found " + std::to_string(edges.size()));
  if (agents_read != mu)
    throw ParseError(line_no, "declared " + std::to_string(mu) + " agents, found " + std::to_string(agents_read));

  try {
    Graph g(n, std::move(edges));
    return CpfInstance(std::move(g), Arrangement(n, std::move(start)), Arrangement(n, std::move(goal)));
  } catch (const InputError& e) {
    throw ParseError(line_no, e.what());
  }
}

CpfInstance read_instance(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_instance(in);
}

CpfInstance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file " + path);
  return read_instance(in);
}

void write_instance(std::ostream& out, const CpfInstance& inst) {
  out << "cpf " << inst.vertex_count() << ' ' << inst.graph.edge_count() << ' ' << inst.agent_count() << '\n';
  for (const Edge& e : inst.graph.edges()) out << "e " << e.u + 1 << ' ' << e.v + 1 << '\n';
  for (AgentId a = 0; a < inst.agent_count(); ++a)
    out << "a " << a + 1 << ' ' << inst.initial.location(a) + 1 << ' ' << inst.goal.location(a) + 1 << '\n';
}

std::string write_instance(const CpfInstance& inst) {
  std::ostringstream out;
  write_instance(out, inst);
  return out.str();
}

void write_solution(std::ostream& out, const Solution& sol) {
  for (std::size_t l = 0; l < sol.steps.size(); ++l) {
    out << "t " << l << ':';
    auto locs = sol.steps[l].locations();
    for (std::size_t a = 0; a < locs.size(); ++a) out << " a" << a + 1 << '@' << locs[a] + 1;
    out << '\n';
  }
}

std::string write_solution(const Solution& sol) {
  std::ostringstream out;
  write_solution(out, sol);
  return out.str();
}

Solution read_solution(std::istream& in, int vertex_count) {
  Solution sol;
  std::string raw;
  int line_no = 0;
  int agents = -1;
  while (std::getline(in, raw)) {
    ++line_no;
    auto tok = tokenize(raw);
    if (tok.empty()) continue;
    if (tok.size() < 2 || tok[0] != "t" || tok[1].empty() || tok[1].back() != ':')
      throw ParseError(line_no, "expected 't <l>: a1@v ...'");
    long layer = parse_int(tok[1].substr(0, tok[1].size() - 1), line_no, "time step");
    if (layer != static_cast<long>(sol.steps.size()))
      throw ParseError(line_no, "time steps must be consecutive from 0");
    std::vector<VertexId> locs;
    for (std::size_t i = 2; i < tok.size(); ++i) {
      auto at = tok[i].find('@');
      if (tok[i].size() < 3 || tok[i][0] != 'a' || at == std::string_view::npos)
        throw ParseError(line_no, "malformed placement '" + std::string(tok[i]) + "'");
      long id = parse_int(tok[i].substr(1, at - 1), line_no, "agent id");
      if (id != static_cast<long>(locs.size()) + 1)
        throw ParseError(line_no, "agents must be listed in order a1..amu");
      locs.push_back(parse_vertex(tok[i].substr(at + 1), vertex_count, line_no));
    }
    if (agents < 0) agents = static_cast<int>(locs.size());
    if (static_cast<int>(locs.size()) != agents) throw ParseError(line_no, "agent count changes between steps");
    try {
      sol.steps.emplace_back(vertex_count, std::move(locs));
    } catch (const InputError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (sol.steps.empty()) throw ParseError(line_no, "solution has no steps");
  return sol;
}

Solution read_solution(std::string_view text, int vertex_count) {
  std::istringstream in{std::string(text)};
  return read_solution(in, vertex_count);
}

}  // namespace cpfsat

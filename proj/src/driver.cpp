#include "cpfsat/driver.hpp"

#include <algorithm>
#include <chrono>
#include <map>

namespace cpfsat {

namespace {

std::vector<int> components(const Graph& g) {
  std::vector<int> comp(g.vertex_count(), -1);
  int next = 0;
  for (VertexId s = 0; s < g.vertex_count(); ++s) {
    if (comp[s] >= 0) continue;
    std::vector<VertexId> stack{s};
    comp[s] = next;
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      for (VertexId u : g.neighbors(v))
        if (comp[u] < 0) {
          comp[u] = next;
          stack.push_back(u);
        }
    }
    ++next;
  }
  return comp;
}

std::string agent_name(AgentId a) { return "a" + std::to_string(a + 1); }

}  // namespace

PrecheckResult precheck(const CpfInstance& inst) {
  const auto comp = components(inst.graph);
  for (AgentId a = 0; a < inst.agent_count(); ++a)
    if (comp[inst.initial.location(a)] != comp[inst.goal.location(a)])
      return {true, agent_name(a) + ": start and goal lie in different components"};

  std::map<int, int> size, start_count, goal_count;
  for (VertexId v = 0; v < inst.vertex_count(); ++v) ++size[comp[v]];
  for (AgentId a = 0; a < inst.agent_count(); ++a) {
    ++start_count[comp[inst.initial.location(a)]];
    ++goal_count[comp[inst.goal.location(a)]];
  }
  if (start_count != goal_count) return {true, "agent counts per component differ between start and goal"};

  // A full component admits no move at all.
  for (AgentId a = 0; a < inst.agent_count(); ++a) {
    int c = comp[inst.initial.location(a)];
    if (start_count[c] == size[c] && inst.initial.location(a) != inst.goal.location(a))
      return {true, agent_name(a) + " must move but its component has no vacant vertex"};
  }
  return {};
}

int default_eta_cap(const CpfInstance& inst) {
  return inst.vertex_count() * inst.agent_count() + inst.vertex_count();
}

SolveReport find_optimal(const CpfInstance& inst, const DriverConfig& cfg) {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - t0).count(); };
  const int cap = cfg.eta_cap.value_or(default_eta_cap(inst));
  if (cfg.eta_start < 1 || cfg.eta_start > cap) throw InputError("need 1 <= eta_start <= eta_cap");
  if (!(cfg.time_budget_seconds > 0)) throw InputError("time budget must be positive");

  SolveReport report{Unknown{0, "not started"}, {}, 0.0};
  auto done = [&](SolveOutcome o) {
    report.outcome = std::move(o);
    report.seconds = elapsed();
    return report;
  };

  if (inst.initial == inst.goal) return done(Optimal{0, identity_solution(inst), true});
  if (PrecheckResult pre = precheck(inst); pre.unsolvable) return done(Unsolvable{pre.reason});

  for (int eta = cfg.eta_start; eta <= cap; ++eta) {
    double remaining = cfg.time_budget_seconds - elapsed();
    if (remaining <= 0) return done(Unknown{eta, "time budget exhausted", false});
    const auto q0 = Clock::now();
    EncodedInstance enc = encode(inst, eta, cfg.encoding);
    if (cfg.use_distance_heuristic) enc = apply_distance_heuristic(std::move(enc), ReachWindow(inst, eta));

    SolverConfig sc = cfg.solver;
    sc.time_limit_seconds = std::max(1e-3, cfg.time_budget_seconds - elapsed());
    SatResult r = solve(enc.cnf, sc);
    report.queries.push_back({eta, r.status, enc.stats, std::chrono::duration<double>(Clock::now() - q0).count()});

    switch (r.status) {
      case SatResult::Status::kUnsat: continue;
      case SatResult::Status::kTimeout: return done(Unknown{eta, "time budget exhausted: " + r.diagnostic, false});
      case SatResult::Status::kSolverError: return done(Unknown{eta, "solver error: " + r.diagnostic, true});
      case SatResult::Status::kSat: break;
    }
    Solution sol;
    try {
      sol = decode(enc, r.model, inst);
    } catch (const DecodeError& e) {
      return done(Unknown{eta, std::string("decoding failed: ") + e.what(), true});
    }
    if (Validation v = validate_solution(sol, inst); !v)
      return done(Unknown{eta, "decoded solution is invalid: " + v.diagnostic, true});
    return done(Optimal{eta, std::move(sol), eta > cfg.eta_start || eta == 1});
  }
  return done(Unknown{cap, "makespan cap " + std::to_string(cap) + " reached", false});
}

std::string describe(const SolveOutcome& outcome) {
  struct {
    std::string operator()(const Optimal& o) const {
      return "OPTIMAL makespan=" + std::to_string(o.makespan) + (o.unsat_below ? " (certified)" : "");
    }
    std::string operator()(const Unsolvable& u) const { return "UNSOLVABLE " + u.reason; }
    std::string operator()(const Unknown& u) const { return "UNKNOWN at eta=" + std::to_string(u.eta) + ": " + u.reason; }
  } visit;
  return std::visit(visit, outcome);
}

}  // namespace cpfsat

#include "cpfsat/oracle.hpp"

#include <span>
#include <unordered_map>

namespace cpfsat {

namespace {

using Key = std::uint64_t;

struct Codec {
  std::uint64_t base;
  int mu;

  Codec(int n, int mu) : base(static_cast<std::uint64_t>(n)), mu(mu) {
    long double space = 1;
    for (int i = 0; i < mu; ++i) space *= static_cast<long double>(n);
    if (space >= 1.8e19L) throw ResourceError("joint state space does not fit a 64-bit key");
  }
  Key pack(std::span<const VertexId> locs) const {
    Key k = 0;
    for (int a = mu - 1; a >= 0; --a) k = k * base + static_cast<Key>(locs[a]);
    return k;
  }
  std::vector<VertexId> unpack(Key k) const {
    std::vector<VertexId> locs(mu);
    for (int a = 0; a < mu; ++a) {
      locs[a] = static_cast<VertexId>(k % base);
      k /= base;
    }
    return locs;
  }
};

// Enumerates every joint successor of `from`, agent by agent.
class Successors {
 public:
  Successors(const Graph& g, const std::vector<VertexId>& from)
      : g_(g), from_(from), occupied_(g.vertex_count(), 0), taken_(g.vertex_count(), 0), next_(from) {
    for (VertexId v : from) occupied_[v] = 1;
  }

  template <class Emit>
  void each(Emit&& emit) { recurse(0, emit); }

 private:
  template <class Emit>
  void recurse(std::size_t a, Emit& emit) {
    if (a == from_.size()) {
      emit(next_);
      return;
    }
    VertexId v = from_[a];
    next_[a] = v;
    recurse(a + 1, emit);
    for (VertexId u : g_.neighbors(v)) {
      if (occupied_[u] || taken_[u]) continue;
      taken_[u] = 1;
      next_[a] = u;
      recurse(a + 1, emit);
      taken_[u] = 0;
    }
    next_[a] = v;
  }

  const Graph& g_;
  const std::vector<VertexId>& from_;
  std::vector<char> occupied_, taken_;
  std::vector<VertexId> next_;
};

}  // namespace

OracleResult oracle_makespan(const CpfInstance& inst, int cap, std::int64_t state_budget) {
  OracleResult result;
  const int n = inst.vertex_count();
  Codec codec(n, inst.agent_count());
  const Key start = codec.pack(inst.initial.locations());
  const Key goal = codec.pack(inst.goal.locations());

  std::unordered_map<Key, Key> parent{{start, start}};
  std::vector<Key> frontier{start};
  int depth = 0;
  bool found = start == goal;
  while (!found && depth < cap && !frontier.empty()) {
    std::vector<Key> next;
    for (Key k : frontier) {
      std::vector<VertexId> locs = codec.unpack(k);
      Successors(inst.graph, locs).each([&](const std::vector<VertexId>& succ) {
        Key s = codec.pack(succ);
        if (!parent.emplace(s, k).second) return;
        if (static_cast<std::int64_t>(parent.size()) > state_budget)
          throw ResourceError("oracle state budget of " + std::to_string(state_budget) + " exceeded");
        if (s == goal) found = true;
        next.push_back(s);
      });
      if (found) break;
    }
    frontier = std::move(next);
    ++depth;
  }
  result.states = static_cast<std::int64_t>(parent.size());
  if (!found) return result;

  result.makespan = depth;
  std::vector<Key> chain{goal};
  while (chain.back() != start) chain.push_back(parent.at(chain.back()));
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) result.witness.steps.emplace_back(n, codec.unpack(*it));
  return result;
}

bool oracle_decision(const CpfInstance& inst, int eta, std::int64_t state_budget) {
  if (eta < 0) return false;
  return oracle_makespan(inst, eta, state_budget).solved();
}

}  // namespace cpfsat
